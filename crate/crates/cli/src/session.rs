//! Command execution against a module store.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;
use strata::frontend::command::{script_commands, Command, GlobalSpec};
use strata::frontend::lexer::Token;
use strata::frontend::{parse_strategy, printer, ModuleStore, TermCtx};
use strata::ltl::{check, CheckResult, TraceStep};
use strata::multistrat::{GExpr, Global, MsContext, MsLabel, Multi};
use strata::{csr, engine::Engine, Error, ModuleDef, Result, Rewriter, StratRef, Term};

#[derive(Debug, Clone)]
pub struct Options {
    pub extended: bool,
    pub step_limit: Option<u64>,
    pub state_limit: Option<u64>,
}

impl Default for Options {
    fn default() -> Self {
        Options { extended: true, step_limit: None, state_limit: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JsonStep {
    pub term: String,
    /// `None` for the self-loop of a final state.
    pub label: Option<String>,
}

/// Result of one command.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Module { name: String },
    Result { term: String },
    Solutions { solutions: Vec<String> },
    Check { verdict: String, counterexample: Option<Counterexample> },
    Text { text: String },
    Quit,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub prefix: Vec<JsonStep>,
    pub cycle: Vec<JsonStep>,
}

pub struct Session {
    pub store: ModuleStore,
    pub opts: Options,
    current: Option<String>,
    /// Directory `load` paths are relative to.
    base: PathBuf,
}

impl Session {
    pub fn new(opts: Options) -> Session {
        let mut store = ModuleStore::new();
        store.extended = opts.extended;
        Session { store, opts, current: None, base: PathBuf::from(".") }
    }

    pub fn set_base(&mut self, dir: &Path) {
        self.base = dir.to_path_buf();
    }

    fn module(&self) -> Result<Arc<ModuleDef>> {
        let name = self.current.as_deref().ok_or_else(|| Error::Module("no module has been loaded".into()))?;
        self.store.get(name).ok_or_else(|| Error::Undeclared { kind: "module", name: name.to_string() })
    }

    fn select(&mut self, name: &str) -> Result<Outcome> {
        if self.store.get(name).is_none() {
            return Err(Error::Undeclared { kind: "module", name: name.to_string() });
        }
        self.current = Some(name.to_string());
        Ok(Outcome::Module { name: name.to_string() })
    }

    fn rewriter(&self, m: Arc<ModuleDef>) -> Rewriter {
        let rw = Rewriter::new(m);
        match self.opts.step_limit {
            Some(n) => rw.with_step_limit(n),
            None => rw,
        }
    }

    fn engine(&self, m: Arc<ModuleDef>) -> Engine {
        let e = Engine::with_rewriter(self.rewriter(m));
        match self.opts.state_limit {
            Some(n) => e.with_state_limit(n),
            None => e,
        }
    }

    fn term(&self, m: &ModuleDef, toks: &[Token]) -> Result<Term> {
        let vars = HashMap::new();
        TermCtx::new(&m.sig, &vars).parse(toks)
    }

    fn strategy(&self, m: &ModuleDef, toks: &[Token]) -> Result<StratRef> {
        parse_strategy(toks, m, &HashMap::new(), self.opts.extended)
    }

    fn global(spec: &GlobalSpec) -> Result<Global> {
        Ok(match spec {
            GlobalSpec::Turns => Global::Turns,
            GlobalSpec::Concurrent => Global::Freec,
            GlobalSpec::Steps(k) => Global::Bounded(*k),
            GlobalSpec::Custom(toks) => Global::Custom(GExpr::parse(toks)?),
        })
    }

    /// Runs every command of a script. Errors are passed to `out` and do not
    /// stop the remaining commands.
    pub fn run_script(&mut self, src: &str, out: &mut dyn FnMut(Result<Outcome>)) {
        for c in script_commands(src) {
            let r = c.and_then(|c| self.execute(c));
            let stop = matches!(r, Ok(Outcome::Quit));
            out(r);
            if stop {
                return;
            }
        }
    }

    pub fn execute(&mut self, cmd: Command) -> Result<Outcome> {
        match cmd {
            Command::Quit => Ok(Outcome::Quit),
            Command::Modules(toks) => {
                let ms = self.store.load_tokens(&toks)?;
                let last = ms.last().map(|m| m.name.to_string()).ok_or_else(|| Error::Module("no module".into()))?;
                self.current = Some(last.clone());
                Ok(Outcome::Module { name: last })
            }
            Command::Load(path) => {
                let p = self.base.join(&path);
                let src = std::fs::read_to_string(&p)
                    .map_err(|e| Error::Module(format!("cannot read {}: {e}", p.display())))?;
                let ms = self.store.load_str(&src)?;
                let last = ms
                    .last()
                    .map(|m| m.name.to_string())
                    .ok_or_else(|| Error::Module(format!("{path} declares no module")))?;
                self.current = Some(last.clone());
                Ok(Outcome::Module { name: last })
            }
            Command::Select(name) => self.select(&name),
            Command::ShowModule(name) => {
                let m = match name {
                    Some(n) => self.store.get(&n).ok_or(Error::Undeclared { kind: "module", name: n })?,
                    None => self.module()?,
                };
                Ok(Outcome::Text { text: printer::module(&m, &self.store.prelude_modules()) })
            }
            Command::TransformCsr(name) => {
                let m = self.store.get(&name).ok_or(Error::Undeclared { kind: "module", name: name.clone() })?;
                let t = csr::csr_transform(&m, &self.store.prelude_equations())?;
                let name = t.name.to_string();
                self.store.insert(t);
                self.select(&name)
            }
            Command::Reduce(toks) => {
                let m = self.module()?;
                let t = self.term(&m, &toks)?;
                let r = self.rewriter(m.clone()).normalize(&t)?;
                Ok(Outcome::Result { term: printer::term(&m.sig, &r) })
            }
            Command::Rewrite { limit, term } => {
                let m = self.module()?;
                let t = self.term(&m, &term)?;
                let (r, _) = self.rewriter(m.clone()).rewrite(&t, limit)?;
                Ok(Outcome::Result { term: printer::term(&m.sig, &r) })
            }
            Command::SRewrite { depth_first, term, strategy } => {
                let m = self.module()?;
                let t = self.term(&m, &term)?;
                let s = self.strategy(&m, &strategy)?;
                let sols = self.engine(m.clone()).srewrite(&t, &s, depth_first)?;
                Ok(Outcome::Solutions { solutions: sols.iter().map(|t| printer::term(&m.sig, t)).collect() })
            }
            Command::MultiRewrite { term, strategies, global } => {
                let m = self.module()?;
                let t = self.term(&m, &term)?;
                let ss = strategies.iter().map(|s| self.strategy(&m, s)).collect::<Result<Vec<_>>>()?;
                let e = self.engine(m.clone());
                let sols = Multi::new(&e, Self::global(&global)?).run(&t, &ss)?;
                Ok(Outcome::Solutions { solutions: sols.iter().map(|t| printer::term(&m.sig, t)).collect() })
            }
            Command::Check { formula, term, strategies, global } => {
                let m = self.module()?;
                let f = strata::frontend::ltl_parser::parse_ltl_tokens(&formula, &m)?;
                let t = self.term(&m, &term)?;
                let ss = strategies.iter().map(|s| self.strategy(&m, s)).collect::<Result<Vec<_>>>()?;
                let e = self.engine(m.clone());
                let limit = e.state_limit();
                let multi = Multi::new(&e, Self::global(&global)?);
                let show = |steps: &[TraceStep<MsContext, MsLabel>]| {
                    steps
                        .iter()
                        .map(|s| JsonStep {
                            term: printer::term(&m.sig, &s.state.term),
                            label: s.label.as_ref().map(|l| l.to_string()),
                        })
                        .collect()
                };
                Ok(match check(&multi, &f, &t, &ss, limit)? {
                    CheckResult::Holds => Outcome::Check { verdict: "holds".into(), counterexample: None },
                    CheckResult::Fails { prefix, cycle } => Outcome::Check {
                        verdict: "fails".into(),
                        counterexample: Some(Counterexample { prefix: show(&prefix), cycle: show(&cycle) }),
                    },
                })
            }
        }
    }
}

/// Transcript-style rendering of an outcome.
pub fn render(o: &Outcome) -> String {
    match o {
        Outcome::Module { name } => format!("Module {name} is now the current module."),
        Outcome::Result { term } => format!("result: {term}"),
        Outcome::Solutions { solutions } => {
            if solutions.is_empty() {
                return "No solution.".into();
            }
            let mut lines: Vec<String> =
                solutions.iter().enumerate().map(|(i, s)| format!("Solution {}: {s}", i + 1)).collect();
            lines.push("No more solutions.".into());
            lines.join("\n")
        }
        Outcome::Check { counterexample: None, .. } => "The property is satisfied.".into(),
        Outcome::Check { counterexample: Some(c), .. } => {
            let mut lines = vec!["The property is not satisfied. Counterexample:".to_string()];
            let step = |lines: &mut Vec<String>, s: &JsonStep| {
                lines.push(format!("| {}", s.term));
                lines.push(match &s.label {
                    Some(l) => format!("v {l}"),
                    None => "v (final state)".into(),
                });
            };
            for s in &c.prefix {
                step(&mut lines, s);
            }
            lines.push("-- cycle --".into());
            for s in &c.cycle {
                step(&mut lines, s);
            }
            lines.join("\n")
        }
        Outcome::Text { text } => text.clone(),
        Outcome::Quit => "Bye.".into(),
    }
}

/// Exit status contributed by an outcome: 2 for a violated property.
pub fn check_code(o: &Outcome) -> Option<i32> {
    match o {
        Outcome::Check { counterexample, .. } => Some(if counterexample.is_some() { 2 } else { 0 }),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(src: &str) -> Vec<std::result::Result<String, String>> {
        let mut s = Session::new(Options::default());
        let mut out = Vec::new();
        s.run_script(src, &mut |r| out.push(r.map(|o| render(&o)).map_err(|e| e.to_string())));
        out
    }

    #[test]
    fn inline_module_and_reduce() {
        let out = run("fmod N is sort N . ops z : -> N . op s : N -> N . op d : N -> N . var X : N . eq d(z) = z . eq d(s(X)) = s(s(d(X))) . endfm\nred d(s(z)) .");
        assert_eq!(out[0].as_deref(), Ok("Module N is now the current module."));
        assert_eq!(out[1].as_deref(), Ok("result: s(s(z))"));
    }

    #[test]
    fn errors_are_reported_and_the_script_goes_on() {
        let out = run("red a .\nbogus .\nquit .\nred a .");
        assert!(out[0].is_err());
        assert!(out[1].is_err());
        assert_eq!(out[2].as_deref(), Ok("Bye."));
        assert_eq!(out.len(), 3);
    }

    #[test]
    fn rendering() {
        assert_eq!(render(&Outcome::Solutions { solutions: vec![] }), "No solution.");
        let o = Outcome::Solutions { solutions: vec!["a".into(), "b".into()] };
        assert_eq!(render(&o), "Solution 1: a\nSolution 2: b\nNo more solutions.");
        let ce = Counterexample { prefix: vec![], cycle: vec![JsonStep { term: "t".into(), label: None }] };
        let o = Outcome::Check { verdict: "fails".into(), counterexample: Some(ce) };
        assert_eq!(render(&o), "The property is not satisfied. Counterexample:\n-- cycle --\n| t\nv (final state)");
        assert_eq!(check_code(&o), Some(2));
    }
}
