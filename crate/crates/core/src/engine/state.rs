//! Machine states of the small-step strategy semantics.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::kernel::{Subst, Sym, Term};
use crate::strategy::StratRef;

/// Strategy node compared by identity. Module definitions and parsed
/// strategies are built once, so loops in an execution revisit the very
/// same nodes.
#[derive(Clone)]
pub struct Node(pub StratRef);

impl PartialEq for Node {
    fn eq(&self, other: &Node) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Node {}

impl Hash for Node {
    fn hash<H: Hasher>(&self, h: &mut H) {
        (Arc::as_ptr(&self.0) as usize).hash(h)
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

pub type Env = Arc<Subst>;

/// A strategy still to be run, with the bindings visible to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Task {
    pub strat: Node,
    pub env: Env,
}

/// Persistent stack of pending tasks; the head runs next.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Stack(Option<Arc<(Task, Stack)>>);

impl Stack {
    pub fn empty() -> Stack {
        Stack(None)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn push(&self, strat: &StratRef, env: &Env) -> Stack {
        let task = Task { strat: Node(strat.clone()), env: env.clone() };
        Stack(Some(Arc::new((task, self.clone()))))
    }

    pub fn top(&self) -> Option<(&Task, &Stack)> {
        self.0.as_deref().map(|(t, rest)| (t, rest))
    }

    pub fn len(&self) -> usize {
        let mut n = 0;
        let mut cur = self;
        while let Some((_, rest)) = cur.top() {
            n += 1;
            cur = rest;
        }
        n
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExecState {
    pub term: Term,
    pub stack: Stack,
}

impl ExecState {
    pub fn new(term: Term, strat: &StratRef, env: &Env) -> ExecState {
        ExecState { term, stack: Stack::empty().push(strat, env) }
    }

    pub fn is_solution(&self) -> bool {
        self.stack.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepClass {
    /// Bookkeeping on the strategy; the subject is untouched.
    Control,
    /// A whole atomic strategy evaluated on the subject.
    System,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub class: StepClass,
    /// Rule label or strategy name of a system step.
    pub label: Option<Sym>,
    pub state: ExecState,
}
