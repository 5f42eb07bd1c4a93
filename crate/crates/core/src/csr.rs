//! Context-sensitive rewriting: replacement maps read off `strat` and
//! `frozen`, μ-normalization, and the module transformation that layers
//! μ-normalization with a descent into every argument.

use std::collections::HashMap;
use std::sync::Arc;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::kernel::{match_root_slots, replace_at, sym, Position, Signature, Subst, Sym, Term, TermKind, Var};
use crate::module::{CondFrag, Equation, ModuleDef, ModuleKind, Rule, StratDecl, StratDef};
use crate::rewrite::{builtin, Rewriter};
use crate::strategy::{choice_all, seq, StratRef, Strategy};

/// Replacing argument indices (1-based) per operator; operators not listed
/// replace every argument.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReplacementMap {
    map: HashMap<(Sym, usize), Vec<usize>>,
}

impl ReplacementMap {
    pub fn get(&self, op: &str, arity: usize) -> Vec<usize> {
        match self.map.get(&(sym(op), arity)) {
            Some(v) => v.clone(),
            None => (1..=arity).collect(),
        }
    }

    pub fn set(&mut self, op: &str, arity: usize, idx: Vec<usize>) {
        self.map.insert((sym(op), arity), idx);
    }

    pub fn replaces(&self, op: &str, arity: usize, i: usize) -> bool {
        match self.map.get(&(sym(op), arity)) {
            Some(v) => v.contains(&i),
            None => (1..=arity).contains(&i),
        }
    }
}

/// μ(f) is the set of `strat` indices, minus the `frozen` ones.
pub fn replacement_map_of(sig: &Signature) -> ReplacementMap {
    let mut mu = ReplacementMap::default();
    for d in sig.ops() {
        let n = d.arity();
        let Some(fam) = sig.family(&d.name, n) else { continue };
        let a = &fam.attrs;
        if a.strat.is_none() && a.frozen.is_empty() {
            continue;
        }
        let base: Vec<usize> = match &a.strat {
            Some(s) => s.iter().copied().filter(|&i| i > 0).collect(),
            None => (1..=n).collect(),
        };
        let mut idx: Vec<usize> = base.into_iter().filter(|i| !a.frozen.contains(i)).collect();
        idx.sort_unstable();
        idx.dedup();
        mu.set(&d.name, n, idx);
    }
    mu
}

/// μ-replacing positions in pre-order.
pub fn mu_positions(t: &Term, mu: &ReplacementMap) -> Vec<Position> {
    fn go(t: &Term, mu: &ReplacementMap, path: &mut Vec<usize>, out: &mut Vec<Position>) {
        out.push(Position { path: path.clone(), slot: None });
        let TermKind::App { op, args } = t.kind() else { return };
        for (i, a) in args.iter().enumerate() {
            if mu.replaces(op, args.len(), i + 1) {
                path.push(i);
                go(a, mu, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, mu, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive rewriting with equations and rules at μ-replacing positions
/// only. Equations are used as left-to-right rules; builtin operators are
/// evaluated where they occur in replacing positions.
pub fn mu_normalize(t: &Term, m: &Arc<ModuleDef>) -> Result<Term> {
    let sig = &m.sig;
    let rw = Rewriter::new(m.clone());
    let mu = replacement_map_of(sig);
    let mut steps: Vec<(&Term, &Term, &[CondFrag])> = m.eqs.iter().map(|e| (&e.lhs, &e.rhs, &e.cond[..])).collect();
    steps.extend(m.rules.iter().filter(|r| !r.nonexec).map(|r| (&r.lhs, &r.rhs, &r.cond[..])));
    let mut cur = sig.canonicalize(t)?;
    let mut count = 0u64;
    'outer: loop {
        for pos in mu_positions(&cur, &mu) {
            let sub = cur.at_path(&pos.path).expect("position exists").clone();
            if let Some(op) = sub.op() {
                let builtin_op = sig.family(op, sub.args().len()).is_some_and(|f| f.attrs.builtin);
                if builtin_op {
                    if let Some(r) = builtin::eval(sig, op, sub.args()) {
                        cur = replace_at(sig, &cur, &pos, r);
                        count += 1;
                        continue 'outer;
                    }
                }
            }
            for (lhs, rhs, cond) in &steps {
                let mut hit: Option<Result<Term>> = None;
                match_root_slots(sig, lhs, &sub, &Subst::new(), &mut |slot, s| {
                    let mut found = None;
                    match rw.check_condition_with(cond, s, &mut |s2| {
                        found = Some(s2.apply(sig, rhs));
                        true
                    }) {
                        Err(e) => {
                            hit = Some(Err(e));
                            true
                        }
                        Ok(_) => match found {
                            Some(r) => {
                                let p = Position { path: pos.path.clone(), slot };
                                hit = Some(Ok(replace_at(sig, &cur, &p, r)));
                                true
                            }
                            None => false,
                        },
                    }
                });
                if let Some(next) = hit {
                    cur = next?;
                    count += 1;
                    if count > rw.step_limit() {
                        return Err(Error::Nontermination(rw.step_limit()));
                    }
                    continue 'outer;
                }
            }
        }
        return Ok(cur);
    }
}

pub const NORM_VIA_MUNORM: &str = "norm-via-munorm";
pub const MUNORM: &str = "munorm";
pub const DECOMP: &str = "decomp";

fn call(name: &str) -> StratRef {
    Arc::new(Strategy::Call { name: sym(name), args: vec![] })
}

/// One branch per operator declaration: a matchrew normalizing every
/// argument for proper operators, a `match` for constants.
pub fn make_decomp(sig: &Signature) -> StratRef {
    let mut next = 1;
    let mut branches = Vec::new();
    for d in sig.ops() {
        if d.args.is_empty() {
            let c = Term::app(d.name.clone(), vec![]);
            branches.push(Arc::new(Strategy::Match { anywhere: false, pattern: c, cond: vec![] }));
            continue;
        }
        let vars: Vec<Var> = d
            .args
            .iter()
            .map(|s| {
                let v = Var::new(&format!("X{next}"), s);
                next += 1;
                v
            })
            .collect();
        let pattern = Term::app(d.name.clone(), vars.iter().cloned().map(Term::var).collect());
        let slots = vars.into_iter().map(|v| (v, call(NORM_VIA_MUNORM))).collect();
        branches.push(Arc::new(Strategy::MatchRew { anywhere: false, pattern, cond: vec![], slots }));
    }
    choice_all(branches)
}

/// Strategy module `<name>-CSR`: equations not in `keep` become rules,
/// replacement restrictions become frozen arguments, and the strategies
/// `norm-via-munorm`, `munorm` and `decomp` are added.
pub fn csr_transform(m: &ModuleDef, keep: &[Equation]) -> Result<ModuleDef> {
    let mut out = m.clone();
    out.name = sym(&format!("{}-CSR", m.name));
    out.kind = ModuleKind::Strategy;
    out.imports.clear();
    let mut eqs = Vec::new();
    let mut rules: Vec<Rule> = Vec::new();
    for e in &m.eqs {
        if keep.contains(e) {
            eqs.push(e.clone());
            continue;
        }
        if e.owise {
            return Err(Error::Transform(format!(
                "equation for `{}` has the owise attribute",
                e.lhs.op().map(|o| o.to_string()).unwrap_or_default()
            )));
        }
        rules.push(Rule { label: None, lhs: e.lhs.clone(), rhs: e.rhs.clone(), cond: e.cond.clone(), nonexec: false });
    }
    rules.extend(m.rules.iter().cloned());
    out.eqs = eqs;
    out.rules = rules;

    let mu = replacement_map_of(&m.sig);
    for d in out.sig.ops_mut() {
        if d.attrs.strat.is_some() || !d.attrs.frozen.is_empty() {
            let n = d.args.len();
            let keep = mu.get(&d.name, n);
            d.attrs.frozen = (1..=n).filter(|i| !keep.contains(i)).collect();
        }
    }
    out.sig.finalize()?;

    let any = sym(crate::frontend::parser::ANY_TERM);
    for name in [NORM_VIA_MUNORM, MUNORM, DECOMP] {
        if out.strat_decl(name, 0).is_some() {
            return Err(Error::Transform(format!("strategy `{name}` is already declared")));
        }
        out.strat_decls.push(StratDecl { name: sym(name), args: vec![], subject: any.clone() });
    }
    let all: StratRef = Arc::new(Strategy::All);
    let munorm = Arc::new(Strategy::Bang(Arc::new(Strategy::One(all))));
    let decomp = make_decomp(&m.sig);
    let defs = [(NORM_VIA_MUNORM, seq(call(MUNORM), call(DECOMP))), (MUNORM, munorm), (DECOMP, decomp)];
    for (name, body) in defs {
        out.strat_defs.push(StratDef { name: sym(name), lhs: vec![], body, cond: vec![] });
    }
    Ok(out)
}

/// Layered normal forms of `t` under the transformed module.
pub fn norm_via_munorm(t: &Term, csr: &Arc<ModuleDef>) -> Result<Vec<Term>> {
    Engine::new(csr.clone()).srewrite(t, &call(NORM_VIA_MUNORM), false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::lexer::tokenize;
    use crate::frontend::{printer, ModuleStore, TermCtx};

    fn setup() -> (ModuleStore, Arc<ModuleDef>) {
        let mut s = ModuleStore::new();
        s.load_str(crate::fixtures::LAZY_LIST).unwrap();
        let m = s.get("LAZY-LIST").unwrap();
        (s, m)
    }

    fn parse(m: &ModuleDef, src: &str) -> Term {
        let vars = HashMap::new();
        TermCtx::new(&m.sig, &vars).parse(&tokenize(src)).unwrap()
    }

    #[test]
    fn replacement_map() {
        let (_, m) = setup();
        let mu = replacement_map_of(&m.sig);
        assert_eq!(mu.get("_:_", 2), vec![1]);
        assert_eq!(mu.get("take", 2), vec![1, 2]);
    }

    #[test]
    fn positions() {
        let (_, m) = setup();
        let mu = replacement_map_of(&m.sig);
        let t = parse(&m, "take(2, natsFrom(1))");
        let paths: Vec<Vec<usize>> = mu_positions(&t, &mu).into_iter().map(|p| p.path).collect();
        assert_eq!(paths, vec![vec![], vec![0], vec![1], vec![1, 0]]);
        let t = parse(&m, "1 : natsFrom(2)");
        assert_eq!(mu_positions(&t, &mu).len(), 2);
    }

    #[test]
    fn mu_normal_forms() {
        let (_, m) = setup();
        let t = parse(&m, "take(3, natsFrom(0))");
        let n = mu_normalize(&t, &m).unwrap();
        assert_eq!(printer::term(&m.sig, &n), "0 : take(2, natsFrom(0 + 1))");
        let n = mu_normalize(&parse(&m, "natsFrom(0)"), &m).unwrap();
        assert_eq!(printer::term(&m.sig, &n), "0 : natsFrom(0 + 1)");
    }

    #[test]
    fn transformed_module() {
        let (s, m) = setup();
        let c = Arc::new(csr_transform(&m, &s.prelude_equations()).unwrap());
        assert_eq!(&*c.name, "LAZY-LIST-CSR");
        assert_eq!(
            c.rules.len(),
            m.rules.len() + m.eqs.len() - s.prelude_equations().iter().filter(|e| m.eqs.contains(e)).count()
        );
        assert_eq!(c.sig.attrs("_:_", 2).unwrap().frozen, vec![2]);
        let t = parse(&m, "take(3, natsFrom(0))");
        let r = norm_via_munorm(&t, &c).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(printer::term(&c.sig, &r[0]), "0 : 1 : 2 : nil");
    }
}
