//! Equational normalization, condition checking and rule application.

pub mod builtin;

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{
    match_anywhere, match_root_slots, match_with, replace_at, Position, Subst, Sym, Term, TermKind, Var,
};
use crate::module::{CondFrag, ModuleDef, Rule};

pub const DEFAULT_STEP_LIMIT: u64 = 1_000_000;
const DEFAULT_DEPTH_LIMIT: usize = 1_500;

/// Argument evaluation order used when an operator has no `strat` attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalOrder {
    Leftmost,
    Rightmost,
}

/// Rewriting engine for one module. Keeps a cache of normal forms.
pub struct Rewriter {
    module: Arc<ModuleDef>,
    eq_index: HashMap<Sym, Vec<usize>>,
    step_limit: u64,
    depth_limit: usize,
    order: EvalOrder,
    cache: RefCell<HashMap<Term, Term>>,
    steps: Cell<u64>,
    depth: Cell<usize>,
}

impl Rewriter {
    pub fn new(module: Arc<ModuleDef>) -> Rewriter {
        let mut eq_index: HashMap<Sym, Vec<usize>> = HashMap::new();
        for (i, eq) in module.eqs.iter().enumerate() {
            if let Some(op) = eq.lhs.op() {
                eq_index.entry(op.clone()).or_default().push(i);
            }
        }
        for list in eq_index.values_mut() {
            list.sort_by_key(|&i| module.eqs[i].owise);
        }
        Rewriter {
            module,
            eq_index,
            step_limit: DEFAULT_STEP_LIMIT,
            depth_limit: DEFAULT_DEPTH_LIMIT,
            order: EvalOrder::Leftmost,
            cache: RefCell::new(HashMap::new()),
            steps: Cell::new(0),
            depth: Cell::new(0),
        }
    }

    pub fn with_step_limit(mut self, limit: u64) -> Rewriter {
        self.step_limit = limit;
        self
    }

    pub fn with_order(mut self, order: EvalOrder) -> Rewriter {
        self.order = order;
        self
    }

    pub fn module(&self) -> &Arc<ModuleDef> {
        &self.module
    }

    pub fn sig(&self) -> &crate::kernel::Signature {
        &self.module.sig
    }

    pub fn step_limit(&self) -> u64 {
        self.step_limit
    }

    /// Equational normal form.
    pub fn normalize(&self, t: &Term) -> Result<Term> {
        let outer = self.depth.get() == 0;
        if outer {
            self.steps.set(0);
        }
        let r = self.norm(t);
        if outer {
            self.depth.set(0);
        }
        r
    }

    fn enter(&self) -> Result<()> {
        let d = self.depth.get() + 1;
        if d > self.depth_limit {
            return Err(Error::Nontermination(self.steps.get()));
        }
        self.depth.set(d);
        Ok(())
    }

    fn leave(&self) {
        self.depth.set(self.depth.get() - 1);
    }

    fn count_step(&self) -> Result<()> {
        let n = self.steps.get() + 1;
        if n > self.step_limit {
            return Err(Error::Nontermination(self.step_limit));
        }
        self.steps.set(n);
        Ok(())
    }

    /// Argument indices (0-based) evaluated before the top is reduced.
    pub fn eval_indices(&self, op: &str, arity: usize) -> Vec<usize> {
        let attrs = self.module.sig.attrs(op, arity);
        let strat = attrs.and_then(|a| a.strat.as_ref());
        let assoc = attrs.map(|a| a.assoc).unwrap_or(false);
        let mut idx: Vec<usize> = match strat {
            Some(s) if assoc => {
                if s.is_empty() {
                    vec![]
                } else {
                    (0..arity).collect()
                }
            }
            Some(s) => s.iter().map(|i| i - 1).collect(),
            None => (0..arity).collect(),
        };
        if strat.is_none() && self.order == EvalOrder::Rightmost {
            idx.reverse();
        }
        idx
    }

    fn norm(&self, t: &Term) -> Result<Term> {
        let TermKind::App { op, args } = t.kind() else { return Ok(t.clone()) };
        if let Some(nf) = self.cache.borrow().get(t) {
            return Ok(nf.clone());
        }
        self.enter()?;
        let result = self.norm_app(t, op, args);
        self.leave();
        let nf = result?;
        self.cache.borrow_mut().insert(t.clone(), nf.clone());
        Ok(nf)
    }

    fn norm_app(&self, t: &Term, op: &Sym, args: &[Term]) -> Result<Term> {
        let mut new_args = args.to_vec();
        let mut changed = false;
        for i in self.eval_indices(op, args.len()) {
            let a = self.norm(&new_args[i])?;
            if a != new_args[i] {
                new_args[i] = a;
                changed = true;
            }
        }
        let u = if changed { self.module.sig.make(op, new_args) } else { t.clone() };
        if changed && u.op() != Some(op) {
            // collapsed onto an argument or folded into a numeral
            return self.norm(&u);
        }
        match self.reduce_top(&u)? {
            Some(next) => {
                self.count_step()?;
                self.norm(&next)
            }
            None => Ok(u),
        }
    }

    /// One equational step at the top of `u`, if any equation or builtin
    /// applies.
    fn reduce_top(&self, u: &Term) -> Result<Option<Term>> {
        let sig = &self.module.sig;
        let TermKind::App { op, args } = u.kind() else { return Ok(None) };
        if let Some(fam) = sig.family(op, args.len()) {
            if fam.attrs.builtin {
                if let Some(r) = builtin::eval(sig, op, args) {
                    return Ok(Some(r));
                }
            }
        }
        let Some(eqs) = self.eq_index.get(op) else { return Ok(None) };
        for &ei in eqs {
            let eq = &self.module.eqs[ei];
            let mut found: Option<Term> = None;
            let mut err: Option<Error> = None;
            match_root_slots(sig, &eq.lhs, u, &Subst::new(), &mut |slot, s| {
                let mut hit = None;
                match self.cond_rec(&eq.cond, s, &mut |s2| {
                    hit = Some(s2.clone());
                    true
                }) {
                    Ok(_) => {}
                    Err(e) => {
                        err = Some(e);
                        return true;
                    }
                }
                if let Some(s2) = hit {
                    let rhs = s2.apply(sig, &eq.rhs);
                    found = Some(match slot {
                        None => rhs,
                        Some(slot) => replace_at(sig, u, &Position { path: vec![], slot: Some(slot) }, rhs),
                    });
                    return true;
                }
                false
            });
            if let Some(e) = err {
                return Err(e);
            }
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// Streams every extension of `s` satisfying the condition fragments in
    /// order; returns whether the callback stopped the enumeration.
    pub fn check_condition_with(
        &self,
        frags: &[CondFrag],
        s: &Subst,
        k: &mut dyn FnMut(&Subst) -> bool,
    ) -> Result<bool> {
        if self.depth.get() == 0 {
            self.steps.set(0);
        }
        self.cond_rec(frags, s, k)
    }

    fn cond_rec(&self, frags: &[CondFrag], s: &Subst, k: &mut dyn FnMut(&Subst) -> bool) -> Result<bool> {
        let sig = &self.module.sig;
        let Some((first, rest)) = frags.split_first() else {
            return Ok(k(s));
        };
        match first {
            CondFrag::Eq(l, r) => {
                let a = self.norm(&s.apply(sig, l))?;
                let b = self.norm(&s.apply(sig, r))?;
                if a == b {
                    self.cond_rec(rest, s, k)
                } else {
                    Ok(false)
                }
            }
            CondFrag::Sort(t, sort) => {
                let v = self.norm(&s.apply(sig, t))?;
                let ls = sig.least_sort(&v)?;
                if sig.leq(&ls, sort) {
                    self.cond_rec(rest, s, k)
                } else {
                    Ok(false)
                }
            }
            CondFrag::Assign(p, r) => {
                let v = self.norm(&s.apply(sig, r))?;
                let mut err = None;
                let stopped = match_with(sig, p, &v, s, &mut |s2| match self.cond_rec(rest, s2, k) {
                    Ok(stop) => stop,
                    Err(e) => {
                        err = Some(e);
                        true
                    }
                });
                match err {
                    Some(e) => Err(e),
                    None => Ok(stopped),
                }
            }
        }
    }

    /// All substitutions extending `s` that satisfy the condition.
    pub fn check_condition(&self, frags: &[CondFrag], s: &Subst) -> Result<Vec<Subst>> {
        let mut out = Vec::new();
        self.check_condition_with(frags, s, &mut |s2| {
            if !out.contains(s2) {
                out.push(s2.clone());
            }
            false
        })?;
        Ok(out)
    }

    /// Builds the initial substitution of a rule from `name <- term` pairs.
    pub fn rule_init(&self, rule: &Rule, init: &[(Sym, Term)]) -> Result<Subst> {
        let vars = rule.vars();
        let mut s = Subst::new();
        for (name, t) in init {
            let v = vars.iter().find(|v| &v.name == name).ok_or_else(|| {
                Error::Instantiation(format!(
                    "rule {} has no variable {name}",
                    rule.label.as_deref().unwrap_or("<unlabeled>")
                ))
            })?;
            s.insert(v.clone(), t.clone());
        }
        Ok(s)
    }

    /// One-step rewrites of `t` with `rule`, normalized and deduplicated.
    pub fn apply_rule(&self, t: &Term, rule: &Rule, init: &Subst, top: bool) -> Result<Vec<Term>> {
        let sig = &self.module.sig;
        let lhs = init.apply(sig, &rule.lhs);
        let mut out: Vec<Term> = Vec::new();
        let mut err: Option<Error> = None;
        let mut visit = |pos: &Position, s: &Subst| -> bool {
            let res = self.check_condition_with(&rule.cond, s, &mut |s2| {
                let rhs = s2.apply(sig, &rule.rhs);
                if !rhs.is_ground() {
                    let free: Vec<String> = rhs.vars().iter().map(Var::to_string).collect();
                    err = Some(Error::Instantiation(format!(
                        "rule {} leaves {} unbound",
                        rule.label.as_deref().unwrap_or("<unlabeled>"),
                        free.join(", ")
                    )));
                    return true;
                }
                let r = replace_at(sig, t, pos, rhs);
                match self.normalize(&r) {
                    Ok(nf) => {
                        if !out.contains(&nf) {
                            out.push(nf);
                        }
                        false
                    }
                    Err(e) => {
                        err = Some(e);
                        true
                    }
                }
            });
            match res {
                Ok(stop) => stop,
                Err(e) => {
                    err = Some(e);
                    true
                }
            }
        };
        if top {
            let root = Position::root();
            match_with(sig, &lhs, t, init, &mut |s| visit(&root, s));
        } else {
            match_anywhere(sig, &lhs, t, init, true, &mut visit);
        }
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// Rewrites with every rule carrying `label`.
    pub fn apply_label(&self, t: &Term, label: &str, init: &[(Sym, Term)], top: bool) -> Result<Vec<Term>> {
        if !self.module.has_label(label) {
            return Err(Error::Undeclared { kind: "rule label", name: label.to_string() });
        }
        let mut out: Vec<Term> = Vec::new();
        for rule in self.module.rules_labeled(label) {
            let s = self.rule_init(rule, init)?;
            for r in self.apply_rule(t, rule, &s, top)? {
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
        Ok(out)
    }

    /// Rewrites with every executable rule, anywhere.
    pub fn apply_all(&self, t: &Term) -> Result<Vec<Term>> {
        let mut out: Vec<Term> = Vec::new();
        for rule in self.module.rules.iter().filter(|r| !r.nonexec) {
            for r in self.apply_rule(t, rule, &Subst::new(), false)? {
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
        Ok(out)
    }

    /// Follows the first successor up to `limit` times (unbounded when
    /// `None`, subject to the step limit).
    pub fn rewrite(&self, t: &Term, limit: Option<u64>) -> Result<(Term, u64)> {
        let mut cur = self.normalize(t)?;
        let mut n = 0;
        loop {
            if limit.is_some_and(|l| n >= l) {
                return Ok((cur, n));
            }
            if n >= self.step_limit {
                return Err(Error::Nontermination(self.step_limit));
            }
            match self.apply_all(&cur)?.into_iter().next() {
                Some(next) => {
                    cur = next;
                    n += 1;
                }
                None => return Ok((cur, n)),
            }
        }
    }
}
