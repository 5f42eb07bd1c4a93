//! Emptiness of the product of a Kripke structure with the automaton of
//! the negated property, by nested depth-first search.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::kernel::Sym;
use crate::ltl::buchi::{to_buchi, Buchi};
use crate::ltl::Ltl;

/// Transition system explored on demand.
pub trait Kripke {
    type State: Clone + Eq + Hash;
    type Label: Clone + PartialEq;

    fn initial(&self) -> Result<Self::State>;
    fn successors(&self, s: &Self::State) -> Result<Vec<(Self::Label, Self::State)>>;
    fn holds(&self, s: &Self::State, prop: &Sym) -> Result<bool>;
}

/// A state of a counterexample and the step taken from it; `None` is the
/// self-loop added to a state without successors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep<S, L> {
    pub state: S,
    pub label: Option<L>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckResult<S, L> {
    Holds,
    /// Infinite path `prefix cycle cycle …` violating the property.
    Fails {
        prefix: Vec<TraceStep<S, L>>,
        cycle: Vec<TraceStep<S, L>>,
    },
}

impl<S, L> CheckResult<S, L> {
    pub fn holds(&self) -> bool {
        matches!(self, CheckResult::Holds)
    }
}

pub const DEFAULT_STATE_LIMIT: u64 = 1_000_000;

type PState = (usize, usize);

struct Product<'k, K: Kripke> {
    k: &'k K,
    aut: Buchi,
    limit: u64,
    states: Vec<K::State>,
    index: HashMap<K::State, usize>,
    succ: Vec<Option<Vec<(Option<K::Label>, usize)>>>,
    labels: Vec<Option<u64>>,
}

impl<K: Kripke> Product<'_, K> {
    fn intern(&mut self, s: K::State) -> Result<usize> {
        if let Some(&i) = self.index.get(&s) {
            return Ok(i);
        }
        if self.states.len() as u64 >= self.limit {
            return Err(Error::SearchLimit(self.limit));
        }
        let i = self.states.len();
        self.states.push(s.clone());
        self.index.insert(s, i);
        self.succ.push(None);
        self.labels.push(None);
        Ok(i)
    }

    fn label(&mut self, i: usize) -> Result<u64> {
        if let Some(l) = self.labels[i] {
            return Ok(l);
        }
        let mut l = 0;
        for (b, p) in self.aut.props.iter().enumerate() {
            if self.k.holds(&self.states[i], p)? {
                l |= 1 << b;
            }
        }
        self.labels[i] = Some(l);
        Ok(l)
    }

    fn ksucc(&mut self, i: usize) -> Result<Vec<(Option<K::Label>, usize)>> {
        if let Some(v) = &self.succ[i] {
            return Ok(v.clone());
        }
        let next = self.k.successors(&self.states[i].clone())?;
        let mut v = Vec::with_capacity(next.len());
        for (l, s) in next {
            v.push((Some(l), self.intern(s)?));
        }
        if v.is_empty() {
            v.push((None, i));
        }
        self.succ[i] = Some(v.clone());
        Ok(v)
    }

    fn successors(&mut self, (k, q): PState) -> Result<Vec<(Option<K::Label>, PState)>> {
        let mut out = Vec::new();
        for (l, k2) in self.ksucc(k)? {
            let lab = self.label(k2)?;
            for &q2 in &self.aut.succ[q] {
                if self.aut.states[q2].admits(lab) {
                    out.push((l.clone(), (k2, q2)));
                }
            }
        }
        Ok(out)
    }

    fn accepting(&self, (_, q): PState) -> bool {
        self.aut.states[q].accepting
    }
}

struct Frame<L> {
    state: PState,
    succ: Vec<(Option<L>, PState)>,
    next: usize,
}

/// Whether every infinite path from the initial state satisfies `f`.
pub fn check_kripke<K: Kripke>(k: &K, f: &Ltl, limit: u64) -> Result<CheckResult<K::State, K::Label>> {
    let aut = to_buchi(&Ltl::not(f.clone()))?;
    let mut p =
        Product { k, aut, limit, states: Vec::new(), index: HashMap::new(), succ: Vec::new(), labels: Vec::new() };
    let k0 = p.intern(k.initial()?)?;
    let l0 = p.label(k0)?;
    let starts: Vec<PState> = p.aut.initial.iter().filter(|&&q| p.aut.states[q].admits(l0)).map(|&q| (k0, q)).collect();

    let mut outer_seen: HashSet<PState> = HashSet::new();
    let mut inner_seen: HashSet<PState> = HashSet::new();
    let mut on_stack: HashMap<PState, usize> = HashMap::new();
    for s in starts {
        if !outer_seen.insert(s) {
            continue;
        }
        let mut stack: Vec<Frame<K::Label>> = vec![Frame { state: s, succ: p.successors(s)?, next: 0 }];
        on_stack.insert(s, 0);
        while let Some(top) = stack.last_mut() {
            if top.next < top.succ.len() {
                let (_, t) = top.succ[top.next];
                top.next += 1;
                if outer_seen.insert(t) {
                    let succ = p.successors(t)?;
                    on_stack.insert(t, stack.len());
                    stack.push(Frame { state: t, succ, next: 0 });
                }
                continue;
            }
            let seed = top.state;
            if p.accepting(seed) {
                if let Some((path, hit)) = inner(&mut p, seed, &on_stack, &mut inner_seen)? {
                    return Ok(lasso(&p, &stack, path, hit));
                }
            }
            on_stack.remove(&seed);
            stack.pop();
        }
    }
    Ok(CheckResult::Holds)
}

// Searches from `seed` for a state on the outer stack. Returns the steps
// taken (label, target) and the stack depth reached.
#[allow(clippy::type_complexity)]
fn inner<K: Kripke>(
    p: &mut Product<'_, K>,
    seed: PState,
    on_stack: &HashMap<PState, usize>,
    seen: &mut HashSet<PState>,
) -> Result<Option<(Vec<(Option<K::Label>, PState)>, usize)>> {
    let mut stack: Vec<Frame<K::Label>> = vec![Frame { state: seed, succ: p.successors(seed)?, next: 0 }];
    let mut taken: Vec<(Option<K::Label>, PState)> = Vec::new();
    while let Some(top) = stack.last_mut() {
        if top.next < top.succ.len() {
            let (l, t) = top.succ[top.next].clone();
            top.next += 1;
            if let Some(&depth) = on_stack.get(&t) {
                taken.push((l, t));
                return Ok(Some((taken, depth)));
            }
            if seen.insert(t) {
                let succ = p.successors(t)?;
                taken.push((l, t));
                stack.push(Frame { state: t, succ, next: 0 });
            }
            continue;
        }
        stack.pop();
        taken.pop();
    }
    Ok(None)
}

fn lasso<K: Kripke>(
    p: &Product<'_, K>,
    outer: &[Frame<K::Label>],
    inner: Vec<(Option<K::Label>, PState)>,
    hit: usize,
) -> CheckResult<K::State, K::Label> {
    // Outer frames record their next successor one past the edge taken.
    let edge = |f: &Frame<K::Label>| f.succ[f.next - 1].0.clone();
    let state = |ps: PState| p.states[ps.0].clone();
    let prefix = outer[..hit].iter().map(|f| TraceStep { state: state(f.state), label: edge(f) }).collect();
    let mut cycle: Vec<TraceStep<K::State, K::Label>> =
        outer[hit..outer.len() - 1].iter().map(|f| TraceStep { state: state(f.state), label: edge(f) }).collect();
    let mut at = outer[outer.len() - 1].state;
    for (l, t) in inner {
        cycle.push(TraceStep { state: state(at), label: l });
        at = t;
    }
    shorten(prefix, cycle)
}

// Same infinite path with the shortest cycle and prefix: the prefix loses
// steps that the cycle ends with, and a cycle repeating a shorter one is
// cut down to it.
fn shorten<S: PartialEq, L: PartialEq>(
    mut prefix: Vec<TraceStep<S, L>>,
    mut cycle: Vec<TraceStep<S, L>>,
) -> CheckResult<S, L> {
    while prefix.last().is_some_and(|p| Some(p) == cycle.last()) {
        prefix.pop();
        cycle.rotate_right(1);
    }
    let n = cycle.len();
    if let Some(k) = (1..n).find(|&k| n.is_multiple_of(k) && (k..n).all(|i| cycle[i] == cycle[i - k])) {
        cycle.truncate(k);
    }
    CheckResult::Fails { prefix, cycle }
}

/// Whether a counterexample is a path of `k` from its initial state whose
/// cycle closes.
pub fn replay<K: Kripke>(
    k: &K,
    prefix: &[TraceStep<K::State, K::Label>],
    cycle: &[TraceStep<K::State, K::Label>],
) -> Result<bool> {
    let Some(first) = cycle.first() else { return Ok(false) };
    let path: Vec<&TraceStep<K::State, K::Label>> = prefix.iter().chain(cycle).collect();
    if path[0].state != k.initial()? {
        return Ok(false);
    }
    for (i, st) in path.iter().enumerate() {
        let target = path.get(i + 1).map_or(&first.state, |n| &n.state);
        let succ = k.successors(&st.state)?;
        let ok = match &st.label {
            None => succ.is_empty() && target == &st.state,
            Some(l) => succ.iter().any(|(l2, s2)| l2 == l && s2 == target),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
