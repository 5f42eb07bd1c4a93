//! Matching modulo associativity, commutativity and identity.
//!
//! The matcher works on canonical terms. Collection operators (assoc, comm,
//! or with an identity) are matched as argument lists: sequences for assoc
//! operators and multisets for comm ones.

use std::collections::BTreeSet;

use crate::kernel::position::{Position, Slot};
use crate::kernel::signature::Signature;
use crate::kernel::subst::Subst;
use crate::kernel::term::{Sym, Term, TermKind, Var};

#[derive(Clone)]
struct Coll {
    op: Sym,
    identity: Option<Term>,
    min: usize,
    max: usize,
}

#[derive(Clone)]
enum Goal {
    Eq(Term, Term),
    Seq(Coll, Vec<Term>, Vec<Term>),
    Bag(Coll, Vec<Term>, Vec<Term>),
}

struct Matcher<'a> {
    sig: &'a Signature,
}

impl<'a> Matcher<'a> {
    /// Returns true when the callback asked to stop.
    fn solve(&self, mut goals: Vec<Goal>, mut s: Subst, k: &mut dyn FnMut(&Subst) -> bool) -> bool {
        loop {
            let Some(goal) = goals.pop() else {
                return k(&s);
            };
            match goal {
                Goal::Eq(p, t) => {
                    if p.is_ground() {
                        if p != t {
                            return false;
                        }
                        continue;
                    }
                    match p.kind() {
                        TermKind::Var(v) => {
                            if !self.bind(&mut s, v, &t) {
                                return false;
                            }
                        }
                        TermKind::App { op, args } => {
                            if &**op == "s_" && args.len() == 1 && self.sig.has_successor() {
                                if let Some(n) = t.as_numeral() {
                                    if n == 0 {
                                        return false;
                                    }
                                    goals.push(Goal::Eq(args[0].clone(), Term::numeral(n - 1)));
                                    continue;
                                }
                            }
                            if let Some(coll) = self.collection(op, args.len()) {
                                let comm = self.sig.attrs(op, args.len()).map(|a| a.comm).unwrap_or(false);
                                let elems = self.sig.collection_elems(op, &t, coll.identity.as_ref());
                                if comm {
                                    goals.push(Goal::Bag(coll, args.clone(), elems));
                                } else {
                                    goals.push(Goal::Seq(coll, args.clone(), elems));
                                }
                                continue;
                            }
                            if t.op() != Some(op) || t.args().len() != args.len() {
                                return false;
                            }
                            for (pa, ta) in args.iter().zip(t.args()).rev() {
                                goals.push(Goal::Eq(pa.clone(), ta.clone()));
                            }
                        }
                    }
                }
                Goal::Seq(c, pats, subj) => return self.seq(goals, s, c, pats, subj, k),
                Goal::Bag(c, pats, subj) => return self.bag(goals, s, c, pats, subj, k),
            }
        }
    }

    fn collection(&self, op: &Sym, arity: usize) -> Option<Coll> {
        let a = self.sig.attrs(op, arity)?;
        if !(a.assoc || a.comm || a.identity.is_some()) {
            return None;
        }
        Some(Coll {
            op: op.clone(),
            identity: a.identity.clone(),
            min: if a.identity.is_some() { 0 } else { 1 },
            max: if a.assoc { usize::MAX } else { 1 },
        })
    }

    fn bind(&self, s: &mut Subst, v: &Var, t: &Term) -> bool {
        if let Some(old) = s.get(v) {
            return old == t;
        }
        match self.sig.least_sort(t) {
            Ok(ls) if self.sig.leq(&ls, &v.sort) => {
                s.insert(v.clone(), t.clone());
                true
            }
            _ => false,
        }
    }

    // Argument-list view of a bound value; without assoc a value of the same
    // operator is still a single element.
    fn elems(&self, c: &Coll, bound: &Term) -> Vec<Term> {
        if c.max > 1 {
            return self.sig.collection_elems(&c.op, bound, c.identity.as_ref());
        }
        if c.identity.as_ref() == Some(bound) {
            Vec::new()
        } else {
            vec![bound.clone()]
        }
    }

    fn value(&self, c: &Coll, seg: &[Term]) -> Option<Term> {
        match seg.len() {
            0 => c.identity.clone(),
            1 => Some(seg[0].clone()),
            _ => Some(self.sig.make(&c.op, seg.to_vec())),
        }
    }

    fn seq(
        &self,
        goals: Vec<Goal>,
        s: Subst,
        c: Coll,
        pats: Vec<Term>,
        subj: Vec<Term>,
        k: &mut dyn FnMut(&Subst) -> bool,
    ) -> bool {
        let Some((p, rest)) = pats.split_first() else {
            if subj.is_empty() {
                return self.solve(goals, s, k);
            }
            return false;
        };
        let rest = rest.to_vec();
        match p.as_var() {
            Some(v) => {
                if let Some(bound) = s.get(v) {
                    let elems = self.elems(&c, bound);
                    if elems.len() > c.max || subj.len() < elems.len() || subj[..elems.len()] != elems[..] {
                        return false;
                    }
                    let mut g = goals;
                    g.push(Goal::Seq(c, rest, subj[elems.len()..].to_vec()));
                    return self.solve(g, s, k);
                }
                let need: usize = rest.iter().map(|r| if r.is_var() { c.min } else { 1 }).sum();
                if subj.len() < need {
                    return false;
                }
                let hi = c.max.min(subj.len() - need);
                if rest.is_empty() && (subj.len() < c.min || subj.len() > c.max) {
                    return false;
                }
                let lo = if rest.is_empty() { subj.len() } else { c.min };
                for len in lo..=hi {
                    let Some(val) = self.value(&c, &subj[..len]) else { continue };
                    let mut s2 = s.clone();
                    if !self.bind(&mut s2, v, &val) {
                        continue;
                    }
                    let mut g = goals.clone();
                    g.push(Goal::Seq(c.clone(), rest.clone(), subj[len..].to_vec()));
                    if self.solve(g, s2, k) {
                        return true;
                    }
                }
                false
            }
            None => {
                if subj.is_empty() {
                    return false;
                }
                let mut g = goals;
                g.push(Goal::Seq(c, rest, subj[1..].to_vec()));
                g.push(Goal::Eq(p.clone(), subj[0].clone()));
                self.solve(g, s, k)
            }
        }
    }

    fn bag(
        &self,
        goals: Vec<Goal>,
        s: Subst,
        c: Coll,
        pats: Vec<Term>,
        subj: Vec<Term>,
        k: &mut dyn FnMut(&Subst) -> bool,
    ) -> bool {
        if pats.is_empty() {
            if subj.is_empty() {
                return self.solve(goals, s, k);
            }
            return false;
        }
        // non-variable patterns first
        if let Some(pi) = pats.iter().position(|p| !p.is_var()) {
            let p = pats[pi].clone();
            let mut rest = pats.clone();
            rest.remove(pi);
            for i in 0..subj.len() {
                if i > 0 && subj[i] == subj[i - 1] {
                    continue;
                }
                let mut remaining = subj.clone();
                let e = remaining.remove(i);
                let mut g = goals.clone();
                g.push(Goal::Bag(c.clone(), rest.clone(), remaining));
                g.push(Goal::Eq(p.clone(), e));
                if self.solve(g, s.clone(), k) {
                    return true;
                }
            }
            return false;
        }
        // bound variables next
        if let Some(pi) = pats.iter().position(|p| s.contains(p.as_var().unwrap())) {
            let bound = s.get(pats[pi].as_var().unwrap()).unwrap().clone();
            let elems = self.elems(&c, &bound);
            if elems.len() > c.max {
                return false;
            }
            let mut remaining = subj.clone();
            for e in &elems {
                match remaining.iter().position(|x| x == e) {
                    Some(j) => {
                        remaining.remove(j);
                    }
                    None => return false,
                }
            }
            let mut rest = pats.clone();
            rest.remove(pi);
            let mut g = goals;
            g.push(Goal::Bag(c, rest, remaining));
            return self.solve(g, s, k);
        }
        let v = pats[0].as_var().unwrap().clone();
        let rest = pats[1..].to_vec();
        if rest.is_empty() {
            if subj.len() < c.min || subj.len() > c.max {
                return false;
            }
            let Some(val) = self.value(&c, &subj) else { return false };
            let mut s2 = s;
            if !self.bind(&mut s2, &v, &val) {
                return false;
            }
            return self.solve(goals, s2, k);
        }
        let need = rest.len() * c.min;
        if subj.len() < need {
            return false;
        }
        let hi = c.max.min(subj.len() - need);
        let mut seen: BTreeSet<Vec<Term>> = BTreeSet::new();
        for len in c.min..=hi {
            let mut stop = false;
            for_each_subset(subj.len(), len, &mut |idx| {
                let chosen: Vec<Term> = idx.iter().map(|&i| subj[i].clone()).collect();
                if !seen.insert(chosen.clone()) {
                    return false;
                }
                let Some(val) = self.value(&c, &chosen) else { return false };
                let mut s2 = s.clone();
                if !self.bind(&mut s2, &v, &val) {
                    return false;
                }
                let remaining: Vec<Term> =
                    subj.iter().enumerate().filter(|(i, _)| !idx.contains(i)).map(|(_, t)| t.clone()).collect();
                let mut g = goals.clone();
                g.push(Goal::Bag(c.clone(), rest.clone(), remaining));
                stop = self.solve(g, s2, k);
                stop
            });
            if stop {
                return true;
            }
        }
        false
    }
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns true.
pub(crate) fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            if go(i + 1, n, k, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    go(0, n, k, &mut Vec::with_capacity(k), f)
}

/// Streams matches of `pat` against `subj` extending `init`. Stops as soon
/// as the callback returns true; returns whether it stopped.
pub fn match_with(sig: &Signature, pat: &Term, subj: &Term, init: &Subst, k: &mut dyn FnMut(&Subst) -> bool) -> bool {
    let m = Matcher { sig };
    m.solve(vec![Goal::Eq(pat.clone(), subj.clone())], init.clone(), k)
}

/// All matches at the root, deduplicated and sorted.
pub fn match_all(sig: &Signature, pat: &Term, subj: &Term, init: &Subst) -> Vec<Subst> {
    let mut out = BTreeSet::new();
    match_with(sig, pat, subj, init, &mut |s| {
        out.insert(s.clone());
        false
    });
    out.into_iter().collect()
}

pub fn matches(sig: &Signature, pat: &Term, subj: &Term) -> bool {
    match_with(sig, pat, subj, &Subst::new(), &mut |_| true)
}

/// Streams matches at the root of `node`, extended to proper spans of an
/// assoc argument list or proper subsets of a comm one when the pattern is
/// headed by the same operator.
pub fn match_root_slots(
    sig: &Signature,
    pat: &Term,
    node: &Term,
    init: &Subst,
    k: &mut dyn FnMut(Option<Slot>, &Subst) -> bool,
) -> bool {
    if match_with(sig, pat, node, init, &mut |s| k(None, s)) {
        return true;
    }
    let TermKind::App { op, args } = node.kind() else { return false };
    if pat.op() != Some(op) || args.len() <= 2 {
        return false;
    }
    let Some(a) = sig.attrs(op, args.len()) else { return false };
    if a.comm {
        for len in 2..args.len() {
            let stop = for_each_subset(args.len(), len, &mut |idx| {
                let part = sig.make(op, idx.iter().map(|&i| args[i].clone()).collect());
                let slot = Slot::Subset(idx.to_vec());
                match_with(sig, pat, &part, init, &mut |s| k(Some(slot.clone()), s))
            });
            if stop {
                return true;
            }
        }
    } else if a.assoc {
        for len in 2..args.len() {
            for start in 0..=args.len() - len {
                let part = sig.make(op, args[start..start + len].to_vec());
                let slot = Slot::Span { start, len };
                if match_with(sig, pat, &part, init, &mut |s| k(Some(slot.clone()), s)) {
                    return true;
                }
            }
        }
    }
    false
}

/// Streams matches at every position of `subj` in pre-order (see
/// [`match_root_slots`] for the slots tried at each node). With
/// `respect_frozen`, frozen arguments are not entered.
pub fn match_anywhere(
    sig: &Signature,
    pat: &Term,
    subj: &Term,
    init: &Subst,
    respect_frozen: bool,
    k: &mut dyn FnMut(&Position, &Subst) -> bool,
) -> bool {
    fn go(
        sig: &Signature,
        pat: &Term,
        node: &Term,
        path: &mut Vec<usize>,
        init: &Subst,
        respect_frozen: bool,
        k: &mut dyn FnMut(&Position, &Subst) -> bool,
    ) -> bool {
        let stop = match_root_slots(sig, pat, node, init, &mut |slot, s| k(&Position { path: path.clone(), slot }, s));
        if stop {
            return true;
        }
        let TermKind::App { op, args } = node.kind() else { return false };
        let attrs = sig.attrs(op, args.len());
        let frozen: &[usize] = match (respect_frozen, attrs) {
            (true, Some(a)) => &a.frozen,
            _ => &[],
        };
        let flat_frozen = attrs.map(|a| a.assoc).unwrap_or(false) && !frozen.is_empty();
        for (i, a) in args.iter().enumerate() {
            if flat_frozen || frozen.contains(&(i + 1)) {
                continue;
            }
            path.push(i);
            let stop = go(sig, pat, a, path, init, respect_frozen, k);
            path.pop();
            if stop {
                return true;
            }
        }
        false
    }
    go(sig, pat, subj, &mut Vec::new(), init, respect_frozen, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::signature::{OpAttrs, OpDecl};
    use crate::kernel::term::sym;

    fn sig(assoc: bool, comm: bool) -> Signature {
        let mut sig = Signature::new();
        for s in ["Elt", "List"] {
            sig.add_sort(s);
        }
        sig.add_subsort("Elt", "List").unwrap();
        for c in ["a", "b", "c"] {
            sig.add_op(OpDecl { name: sym(c), args: vec![], result: sym("Elt"), attrs: OpAttrs::default() }).unwrap();
        }
        sig.add_op(OpDecl { name: sym("nil"), args: vec![], result: sym("List"), attrs: OpAttrs::default() }).unwrap();
        sig.add_op(OpDecl {
            name: sym("__"),
            args: vec![sym("List"), sym("List")],
            result: sym("List"),
            attrs: OpAttrs { assoc, comm, identity: Some(Term::constant("nil")), ..Default::default() },
        })
        .unwrap();
        sig.finalize().unwrap();
        sig
    }

    fn l(sig: &Signature, xs: Vec<Term>) -> Term {
        sig.make(&sym("__"), xs)
    }

    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    fn v(n: &str, s: &str) -> Term {
        Term::new_var(n, s)
    }

    #[test]
    fn nonlinear_comm_without_assoc() {
        let sig = sig(false, true);
        let x = v("X", "List");
        let aa = l(&sig, vec![c("a"), c("a")]);
        // (X X) against ((a a) (a a)): X is the pair, not its elements
        let p = l(&sig, vec![x.clone(), x]);
        let t = l(&sig, vec![aa.clone(), aa.clone()]);
        let found = match_all(&sig, &p, &t, &Subst::new());
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].get_by_name("X"), Some(&aa));
    }

    #[test]
    fn assoc_identity_splits() {
        let sig = sig(true, false);
        let subj = l(&sig, vec![c("a"), c("b"), c("c")]);
        let pat = l(&sig, vec![v("L", "List"), v("R", "List")]);
        // four split points including empty prefix and suffix
        assert_eq!(match_all(&sig, &pat, &subj, &Subst::new()).len(), 4);
        let pat = l(&sig, vec![v("L", "List"), v("E", "Elt"), v("R", "List")]);
        assert_eq!(match_all(&sig, &pat, &subj, &Subst::new()).len(), 3);
    }

    #[test]
    fn ac_identity_subsets() {
        let sig = sig(true, true);
        let subj = l(&sig, vec![c("a"), c("b"), c("c")]);
        let pat = l(&sig, vec![v("E", "Elt"), v("R", "List")]);
        assert_eq!(match_all(&sig, &pat, &subj, &Subst::new()).len(), 3);
        let pat = l(&sig, vec![v("X", "List"), v("Y", "List")]);
        assert_eq!(match_all(&sig, &pat, &subj, &Subst::new()).len(), 8);
    }

    #[test]
    fn nonlinear_and_ground() {
        let sig = sig(true, true);
        let subj = l(&sig, vec![c("a"), c("a"), c("b")]);
        let pat = l(&sig, vec![v("E", "Elt"), v("E", "Elt"), v("R", "List")]);
        let ms = match_all(&sig, &pat, &subj, &Subst::new());
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].get(&Var::new("E", "Elt")), Some(&c("a")));
        assert!(matches(&sig, &l(&sig, vec![c("b"), c("a"), c("a")]), &subj));
    }

    #[test]
    fn anywhere_includes_spans() {
        let sig = sig(true, false);
        let subj = l(&sig, vec![c("a"), c("b"), c("a"), c("b")]);
        let pat = l(&sig, vec![c("a"), c("b")]);
        let mut hits = Vec::new();
        match_anywhere(&sig, &pat, &subj, &Subst::new(), false, &mut |p, _| {
            hits.push(p.clone());
            false
        });
        assert_eq!(hits.len(), 2);
    }

    #[test]
    fn subsets_enumerated_in_order() {
        let mut got = Vec::new();
        for_each_subset(4, 2, &mut |s| {
            got.push(s.to_vec());
            false
        });
        assert_eq!(got.len(), 6);
        assert_eq!(got[0], vec![0, 1]);
        assert_eq!(got[5], vec![2, 3]);
    }
}
