use std::sync::Arc;

use crate::kernel::{Sym, Term, Var};
use crate::module::CondFrag;

pub type StratRef = Arc<Strategy>;

/// Strategy expressions: the core language, the extended traversal
/// operators, and the derived forms removed by [`desugar`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Strategy {
    Idle,
    Fail,
    /// Rule application by label with initial assignments (by variable name).
    Apply {
        label: Sym,
        init: Vec<(Sym, Term)>,
        top: bool,
    },
    All,
    Match {
        anywhere: bool,
        pattern: Term,
        cond: Vec<CondFrag>,
    },
    Seq(StratRef, StratRef),
    Choice(StratRef, StratRef),
    Star(StratRef),
    Bang(StratRef),
    Cond(StratRef, StratRef, StratRef),
    One(StratRef),
    MatchRew {
        anywhere: bool,
        pattern: Term,
        cond: Vec<CondFrag>,
        slots: Vec<(Var, StratRef)>,
    },
    Call {
        name: Sym,
        args: Vec<Term>,
    },
    Congruence {
        op: Sym,
        args: Vec<StratRef>,
    },
    GtAll(StratRef),
    GtOne(StratRef),
    GtSome(StratRef),
    Try(StratRef),
    Not(StratRef),
    Test(StratRef),
    OrElse(StratRef, StratRef),
}

use Strategy::*;

pub fn idle() -> StratRef {
    Arc::new(Idle)
}

pub fn fail() -> StratRef {
    Arc::new(Fail)
}

pub fn seq(a: StratRef, b: StratRef) -> StratRef {
    Arc::new(Seq(a, b))
}

pub fn choice(a: StratRef, b: StratRef) -> StratRef {
    Arc::new(Choice(a, b))
}

pub fn cond(a: StratRef, b: StratRef, c: StratRef) -> StratRef {
    Arc::new(Cond(a, b, c))
}

/// Right-nested choice over the given alternatives; `fail` when empty.
pub fn choice_all(mut items: Vec<StratRef>) -> StratRef {
    let Some(mut acc) = items.pop() else { return fail() };
    while let Some(s) = items.pop() {
        acc = choice(s, acc);
    }
    acc
}

pub fn or_else(a: StratRef, b: StratRef) -> StratRef {
    Arc::new(OrElse(a, b))
}

impl Strategy {
    pub fn children(&self) -> Vec<&StratRef> {
        match self {
            Idle | Fail | Apply { .. } | All | Match { .. } | Call { .. } => vec![],
            Seq(a, b) | Choice(a, b) | OrElse(a, b) => vec![a, b],
            Star(a) | Bang(a) | One(a) | GtAll(a) | GtOne(a) | GtSome(a) | Try(a) | Not(a) | Test(a) => vec![a],
            Cond(a, b, c) => vec![a, b, c],
            MatchRew { slots, .. } => slots.iter().map(|(_, s)| s).collect(),
            Congruence { args, .. } => args.iter().collect(),
        }
    }

    /// Whether the expression uses congruence or generic traversal operators.
    pub fn is_extended(&self) -> bool {
        matches!(self, Congruence { .. } | GtAll(_) | GtOne(_) | GtSome(_))
            || self.children().into_iter().any(|c| c.is_extended())
    }

    pub fn is_sugared(&self) -> bool {
        matches!(self, Try(_) | Not(_) | Test(_) | OrElse(..)) || self.children().into_iter().any(|c| c.is_sugared())
    }

    /// Names of strategies called anywhere inside, with their arities.
    pub fn calls(&self, out: &mut Vec<(Sym, usize)>) {
        if let Call { name, args } = self {
            if !out.iter().any(|(n, a)| n == name && *a == args.len()) {
                out.push((name.clone(), args.len()));
            }
        }
        for c in self.children() {
            c.calls(out);
        }
    }
}

/// Rebuilds `s` with `f` applied to every direct child.
pub fn map_children(s: &StratRef, f: &mut dyn FnMut(&StratRef) -> StratRef) -> StratRef {
    let node = match &**s {
        Idle | Fail | Apply { .. } | All | Match { .. } | Call { .. } => return s.clone(),
        Seq(a, b) => Seq(f(a), f(b)),
        Choice(a, b) => Choice(f(a), f(b)),
        OrElse(a, b) => OrElse(f(a), f(b)),
        Star(a) => Star(f(a)),
        Bang(a) => Bang(f(a)),
        One(a) => One(f(a)),
        GtAll(a) => GtAll(f(a)),
        GtOne(a) => GtOne(f(a)),
        GtSome(a) => GtSome(f(a)),
        Try(a) => Try(f(a)),
        Not(a) => Not(f(a)),
        Test(a) => Test(f(a)),
        Cond(a, b, c) => Cond(f(a), f(b), f(c)),
        MatchRew { anywhere, pattern, cond, slots } => MatchRew {
            anywhere: *anywhere,
            pattern: pattern.clone(),
            cond: cond.clone(),
            slots: slots.iter().map(|(v, x)| (v.clone(), f(x))).collect(),
        },
        Congruence { op, args } => Congruence { op: op.clone(), args: args.iter().map(f).collect() },
    };
    Arc::new(node)
}

/// Eliminates `try`, `not`, `test` and `or-else`; extended operators are
/// kept.
pub fn desugar(s: &StratRef) -> StratRef {
    if !s.is_sugared() {
        return s.clone();
    }
    match &**s {
        Try(a) => cond(desugar(a), idle(), idle()),
        Not(a) => cond(desugar(a), fail(), idle()),
        Test(a) => {
            let inner = cond(desugar(a), fail(), idle());
            cond(inner, fail(), idle())
        }
        OrElse(a, b) => cond(desugar(a), idle(), desugar(b)),
        _ => map_children(s, &mut desugar),
    }
}
