//! Tableau translation of formulas in negation normal form into Büchi
//! automata with state labels.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::kernel::Sym;
use crate::ltl::Ltl;

/// Automaton state: the literals a Kripke state must satisfy to be read
/// here, as bit masks over [`Buchi::props`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BState {
    pub pos: u64,
    pub neg: u64,
    pub accepting: bool,
}

impl BState {
    pub fn admits(&self, label: u64) -> bool {
        label & self.pos == self.pos && label & self.neg == 0
    }
}

#[derive(Debug, Clone)]
pub struct Buchi {
    pub props: Vec<Sym>,
    pub states: Vec<BState>,
    pub succ: Vec<Vec<usize>>,
    pub initial: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Node {
    incoming: BTreeSet<usize>,
    new: Vec<Ltl>,
    old: BTreeSet<Ltl>,
    next: BTreeSet<Ltl>,
}

const INIT: usize = usize::MAX;

struct Tableau {
    nodes: Vec<Node>,
}

impl Tableau {
    fn expand(&mut self, mut node: Node) {
        let Some(f) = node.new.pop() else {
            if let Some(n) = self.nodes.iter_mut().find(|n| n.old == node.old && n.next == node.next) {
                n.incoming.extend(node.incoming);
                return;
            }
            let id = self.nodes.len();
            let next: Vec<Ltl> = node.next.iter().cloned().collect();
            self.nodes.push(node);
            self.expand(Node { incoming: [id].into(), new: next, old: BTreeSet::new(), next: BTreeSet::new() });
            return;
        };
        if node.old.contains(&f) {
            return self.expand(node);
        }
        match &f {
            Ltl::False => {}
            Ltl::Prop(_) | Ltl::Not(_) => {
                let clash = match &f {
                    Ltl::Not(p) => node.old.contains(&**p),
                    p => node.old.contains(&Ltl::not(p.clone())),
                };
                if !clash {
                    node.old.insert(f);
                    self.expand(node);
                }
            }
            Ltl::True => {
                node.old.insert(f);
                self.expand(node);
            }
            Ltl::And(a, b) => {
                node.new.push((**a).clone());
                node.new.push((**b).clone());
                node.old.insert(f);
                self.expand(node);
            }
            Ltl::Next(a) => {
                node.next.insert((**a).clone());
                node.old.insert(f);
                self.expand(node);
            }
            Ltl::Or(a, b) | Ltl::Until(a, b) | Ltl::Release(a, b) => {
                let mut n1 = node.clone();
                let mut n2 = node;
                match &f {
                    Ltl::Or(..) => {
                        n1.new.push((**a).clone());
                        n2.new.push((**b).clone());
                    }
                    Ltl::Until(..) => {
                        n1.new.push((**a).clone());
                        n1.next.insert(f.clone());
                        n2.new.push((**b).clone());
                    }
                    _ => {
                        n1.new.push((**b).clone());
                        n1.next.insert(f.clone());
                        n2.new.push((**a).clone());
                        n2.new.push((**b).clone());
                    }
                }
                n1.old.insert(f.clone());
                n2.old.insert(f);
                self.expand(n1);
                self.expand(n2);
            }
            Ltl::Implies(..) | Ltl::Always(_) | Ltl::Eventually(_) => {
                unreachable!("formula is in negation normal form")
            }
        }
    }
}

fn untils(f: &Ltl, out: &mut Vec<(Ltl, Ltl)>) {
    match f {
        Ltl::Until(a, b) => {
            if !out.iter().any(|(u, _)| u == f) {
                out.push((f.clone(), (**b).clone()));
            }
            untils(a, out);
            untils(b, out);
        }
        Ltl::Not(a) | Ltl::Next(a) | Ltl::Always(a) | Ltl::Eventually(a) => untils(a, out),
        Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Implies(a, b) | Ltl::Release(a, b) => {
            untils(a, out);
            untils(b, out);
        }
        Ltl::True | Ltl::False | Ltl::Prop(_) => {}
    }
}

/// Automaton accepting exactly the infinite words satisfying `f`.
pub fn to_buchi(f: &Ltl) -> Result<Buchi> {
    let props = f.props();
    if props.len() > 64 {
        return Err(Error::Unsupported("formulas with more than 64 propositions".into()));
    }
    let f = f.nnf();
    let mut tab = Tableau { nodes: Vec::new() };
    tab.expand(Node { incoming: [INIT].into(), new: vec![f.clone()], old: BTreeSet::new(), next: BTreeSet::new() });
    let nodes = tab.nodes;

    let bit = |p: &Sym| 1u64 << props.iter().position(|q| q == p).expect("collected proposition");
    let masks: Vec<(u64, u64)> = nodes
        .iter()
        .map(|n| {
            let (mut pos, mut neg) = (0, 0);
            for l in &n.old {
                match l {
                    Ltl::Prop(p) => pos |= bit(p),
                    Ltl::Not(p) => {
                        if let Ltl::Prop(p) = &**p {
                            neg |= bit(p);
                        }
                    }
                    _ => {}
                }
            }
            (pos, neg)
        })
        .collect();

    let mut us = Vec::new();
    untils(&f, &mut us);
    let fair: Vec<Vec<bool>> =
        us.iter().map(|(u, b)| nodes.iter().map(|n| !n.old.contains(u) || n.old.contains(b)).collect()).collect();

    // Counter construction: level k waits for a visit to the k-th set.
    let m = fair.len().max(1);
    let id = |n: usize, k: usize| n * m + k;
    let mut states = Vec::with_capacity(nodes.len() * m);
    let mut succ = vec![Vec::new(); nodes.len() * m];
    for (n, (pos, neg)) in masks.iter().enumerate() {
        for k in 0..m {
            let in_set = fair.get(k).is_none_or(|s| s[n]);
            states.push(BState { pos: *pos, neg: *neg, accepting: k == 0 && in_set });
        }
    }
    for (to, node) in nodes.iter().enumerate() {
        for &from in &node.incoming {
            if from == INIT {
                continue;
            }
            for k in 0..m {
                let in_set = fair.get(k).is_none_or(|s| s[from]);
                let k2 = if in_set { (k + 1) % m } else { k };
                succ[id(from, k)].push(id(to, k2));
            }
        }
    }
    let initial = nodes.iter().enumerate().filter(|(_, n)| n.incoming.contains(&INIT)).map(|(i, _)| id(i, 0)).collect();
    Ok(Buchi { props, states, succ, initial })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Accepts the lasso `word[..loop_at] (word[loop_at..])^ω`?
    fn accepts(b: &Buchi, word: &[u64], loop_at: usize) -> bool {
        let n = word.len();
        let next = |i: usize| if i + 1 == n { loop_at } else { i + 1 };
        // states of the product of the automaton with the lasso positions
        let idx = |q: usize, i: usize| q * n + i;
        let total = b.states.len() * n;
        let mut edges = vec![Vec::new(); total];
        for q in 0..b.states.len() {
            for i in 0..n {
                if !b.states[q].admits(word[i]) {
                    continue;
                }
                for &q2 in &b.succ[q] {
                    if b.states[q2].admits(word[next(i)]) {
                        edges[idx(q, i)].push(idx(q2, next(i)));
                    }
                }
            }
        }
        let reach = |from: Vec<usize>| {
            let mut seen = vec![false; total];
            let mut todo = from;
            while let Some(s) = todo.pop() {
                for &t in &edges[s] {
                    if !seen[t] {
                        seen[t] = true;
                        todo.push(t);
                    }
                }
            }
            seen
        };
        let starts: Vec<usize> =
            b.initial.iter().filter(|&&q| b.states[q].admits(word[0])).map(|&q| idx(q, 0)).collect();
        let mut from_init = reach(starts.clone());
        for s in starts {
            from_init[s] = true;
        }
        (0..total).any(|s| from_init[s] && b.states[s / n].accepting && reach(vec![s])[s])
    }

    #[test]
    fn always_and_eventually() {
        let p = Ltl::prop("p");
        let b = to_buchi(&Ltl::always(p.clone())).unwrap();
        assert!(accepts(&b, &[1, 1], 0));
        assert!(!accepts(&b, &[1, 0, 1], 1));
        let b = to_buchi(&Ltl::eventually(Ltl::not(p))).unwrap();
        assert!(accepts(&b, &[1, 1, 0], 2));
        assert!(!accepts(&b, &[1, 1], 0));
    }

    #[test]
    fn until() {
        let f = Ltl::until(Ltl::prop("p"), Ltl::prop("q"));
        let b = to_buchi(&f).unwrap();
        // p = bit 0, q = bit 1
        assert!(accepts(&b, &[1, 1, 2], 2));
        assert!(accepts(&b, &[2], 0));
        assert!(!accepts(&b, &[1, 1], 0));
        assert!(!accepts(&b, &[1, 0, 2], 2));
    }

    #[test]
    fn true_accepts_everything() {
        let b = to_buchi(&Ltl::True).unwrap();
        assert!(accepts(&b, &[0], 0));
        assert!(b.states.iter().all(|s| s.accepting));
    }

    #[test]
    fn infinitely_often_needs_both() {
        let gf = |p| Ltl::always(Ltl::eventually(Ltl::prop(p)));
        let b = to_buchi(&Ltl::and(gf("p"), gf("q"))).unwrap();
        assert!(accepts(&b, &[1, 2], 0));
        assert!(!accepts(&b, &[1, 2, 1], 2));
    }
}
