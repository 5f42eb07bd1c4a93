//! LTL model checking of multistrategy executions.

pub mod buchi;
pub mod check;
pub mod formula;

use std::cell::RefCell;
use std::collections::HashMap;

pub use check::{check_kripke, replay, CheckResult, Kripke, TraceStep, DEFAULT_STATE_LIMIT};
pub use formula::Ltl;

use crate::error::{Error, Result};
use crate::frontend::printer;
use crate::kernel::{Subst, Sym, Term, Var, UNIVERSAL};
use crate::module::PLACEHOLDER;
use crate::multistrat::{MsContext, MsLabel, Multi};
use crate::rewrite::Rewriter;
use crate::strategy::StratRef;

/// Truth of proposition `name` on `t`: the proposition's term with `t` for
/// `@`, reduced.
pub fn eval_prop(rw: &Rewriter, name: &str, t: &Term) -> Result<bool> {
    let m = rw.module();
    let p = m.prop(name).ok_or_else(|| Error::Undeclared { kind: "proposition", name: name.to_string() })?;
    let mut s = Subst::new();
    s.insert(Var::new(PLACEHOLDER, UNIVERSAL), t.clone());
    let v = rw.normalize(&s.apply(&m.sig, &p.term))?;
    match v.op().map(|o| &**o) {
        Some("true") if v.args().is_empty() => Ok(true),
        Some("false") if v.args().is_empty() => Ok(false),
        _ => Err(Error::Proposition { name: name.to_string(), value: printer::term(&m.sig, &v) }),
    }
}

/// Multistrategy contexts as a Kripke structure labeled through their
/// subject terms.
pub struct MsKripke<'m, 'e> {
    multi: &'m Multi<'e>,
    init: MsContext,
    cache: RefCell<HashMap<(Term, Sym), bool>>,
}

impl<'m, 'e> MsKripke<'m, 'e> {
    pub fn new(multi: &'m Multi<'e>, t: &Term, strats: &[StratRef]) -> Result<MsKripke<'m, 'e>> {
        Ok(MsKripke { init: multi.initial(t, strats)?, multi, cache: RefCell::new(HashMap::new()) })
    }
}

impl Kripke for MsKripke<'_, '_> {
    type State = MsContext;
    type Label = MsLabel;

    fn initial(&self) -> Result<MsContext> {
        Ok(self.init.clone())
    }

    fn successors(&self, s: &MsContext) -> Result<Vec<(MsLabel, MsContext)>> {
        self.multi.successors(s)
    }

    fn holds(&self, s: &MsContext, prop: &Sym) -> Result<bool> {
        let key = (s.term.clone(), prop.clone());
        if let Some(&b) = self.cache.borrow().get(&key) {
            return Ok(b);
        }
        let b = eval_prop(self.multi.engine.rewriter(), prop, &s.term)?;
        self.cache.borrow_mut().insert(key, b);
        Ok(b)
    }
}

pub type MsCheckResult = CheckResult<MsContext, MsLabel>;

/// Checks `f` on the executions of `strats` from `t` under the multistrategy's
/// global strategy.
pub fn check(multi: &Multi, f: &Ltl, t: &Term, strats: &[StratRef], limit: u64) -> Result<MsCheckResult> {
    let k = MsKripke::new(multi, t, strats)?;
    check_kripke(&k, f, limit)
}
