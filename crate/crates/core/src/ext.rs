//! Congruence operators and generic traversals. The engine runs them
//! directly; [`translate`] rewrites them into matchrews over the
//! constructors so both readings can be compared.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::kernel::{Signature, Sym, Term, Var};
use crate::module::ModuleDef;
use crate::strategy::{choice_all, idle, map_children, or_else, seq, StratRef, Strategy};

static FRESH: AtomicU64 = AtomicU64::new(0);

/// Constructor operators by name and arity, in declaration order.
pub fn congruence_ops(sig: &Signature) -> Vec<(Sym, usize)> {
    let mut out: Vec<(Sym, usize)> = Vec::new();
    for d in sig.ops() {
        if !d.attrs.ctor {
            continue;
        }
        let key = (d.name.clone(), d.arity());
        if !out.contains(&key) {
            out.push(key);
        }
    }
    out
}

fn fresh_vars(sig: &Signature, op: &str, arity: usize) -> Vec<Var> {
    crate::engine::generic_vars(sig, op, arity)
        .into_iter()
        .map(|v| {
            let k = FRESH.fetch_add(1, Ordering::Relaxed);
            Var::new(&format!("X{k}"), &v.sort)
        })
        .collect()
}

/// `matchrew op(X1, …, Xn) by X1 using s1, …` or `match c` for constants.
fn congruence(sig: &Signature, op: &Sym, args: Vec<StratRef>) -> StratRef {
    if args.is_empty() {
        return Arc::new(Strategy::Match { anywhere: false, pattern: Term::app(op.clone(), vec![]), cond: vec![] });
    }
    let vars = fresh_vars(sig, op, args.len());
    let pattern = Term::app(op.clone(), vars.iter().cloned().map(Term::var).collect());
    Arc::new(Strategy::MatchRew { anywhere: false, pattern, cond: vec![], slots: vars.into_iter().zip(args).collect() })
}

/// Rewrites congruences and traversals into the core language.
pub fn translate(s: &StratRef, sig: &Signature) -> Result<StratRef> {
    use Strategy::*;
    if !s.is_extended() {
        return Ok(s.clone());
    }
    Ok(match &**s {
        Congruence { op, args } => {
            if !crate::frontend::strategy_parser::is_ctor(sig, op, args.len()) {
                return Err(Error::Transform(format!("`{op}` is not a constructor")));
            }
            let args = args.iter().map(|a| translate(a, sig)).collect::<Result<Vec<_>>>()?;
            congruence(sig, op, args)
        }
        GtAll(a) => {
            let a = translate(a, sig)?;
            let branches =
                congruence_ops(sig).into_iter().map(|(op, n)| congruence(sig, &op, vec![a.clone(); n])).collect();
            choice_all(branches)
        }
        GtOne(a) => {
            let a = translate(a, sig)?;
            let mut branches = Vec::new();
            for (op, n) in congruence_ops(sig) {
                if n == 0 {
                    continue;
                }
                let mut alts: Vec<StratRef> = (0..n)
                    .map(|i| {
                        let args = (0..n).map(|j| if i == j { a.clone() } else { idle() }).collect();
                        congruence(sig, &op, args)
                    })
                    .collect();
                let mut acc = alts.pop().expect("non-constant");
                while let Some(x) = alts.pop() {
                    acc = or_else(x, acc);
                }
                branches.push(acc);
            }
            choice_all(branches)
        }
        GtSome(a) => {
            let test = Arc::new(Test(Arc::new(GtOne(a.clone()))));
            let all = Arc::new(GtAll(Arc::new(Try(a.clone()))));
            translate(&seq(test, all), sig)?
        }
        _ => {
            let mut err = None;
            let out = map_children(s, &mut |c| match translate(c, sig) {
                Ok(x) => x,
                Err(e) => {
                    err = Some(e);
                    c.clone()
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            out
        }
    })
}

/// The module with every strategy definition translated.
pub fn translate_module(m: &ModuleDef) -> Result<ModuleDef> {
    let mut out = m.clone();
    for def in &mut out.strat_defs {
        def.body = translate(&def.body, &m.sig)?;
    }
    Ok(out)
}

/// Solutions using the built-in semantics of the extended operators.
pub fn eval_native(t: &Term, s: &StratRef, m: &Arc<ModuleDef>) -> Result<Vec<Term>> {
    Engine::new(m.clone()).srewrite(t, s, false)
}

/// Solutions after translating the strategy and the module definitions.
pub fn eval_translated(t: &Term, s: &StratRef, m: &ModuleDef) -> Result<Vec<Term>> {
    let tm = Arc::new(translate_module(m)?);
    let s = translate(s, &m.sig)?;
    Engine::new(tm).srewrite(t, &s, false)
}
