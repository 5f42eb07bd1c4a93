//! Multistrategies: several strategy threads take turns rewriting one
//! subject. A thread moves by running its control steps until one atomic
//! step has been performed.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::engine::{Engine, Env, ExecState, Stack, StepClass};
use crate::error::{Error, Result};
use crate::frontend::lexer::{find_top, matching_close, Token};
use crate::kernel::{Sym, Term};
use crate::strategy::StratRef;

/// Subject with the pending work of every thread. `turn` is the thread to
/// move next under `turns`; `budget` counts the steps left under `freec(K)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MsContext {
    pub term: Term,
    pub threads: Vec<Stack>,
    pub turn: usize,
    pub budget: Option<u64>,
}

/// Step performed by one thread.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MsLabel {
    pub thread: usize,
    pub step: Sym,
}

impl fmt::Display for MsLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} does {}", self.thread, self.step)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Global {
    Turns,
    Freec,
    Bounded(u64),
    Custom(GExpr),
}

/// Global strategy expressions over thread steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GExpr {
    Idle,
    Fail,
    /// Control steps of a thread followed by one system step.
    Step(usize),
    Control(usize),
    System(usize),
    Turns,
    Freec,
    Bounded(u64),
    Seq(Box<GExpr>, Box<GExpr>),
    Choice(Box<GExpr>, Box<GExpr>),
    Star(Box<GExpr>),
    Bang(Box<GExpr>),
    Cond(Box<GExpr>, Box<GExpr>, Box<GExpr>),
    One(Box<GExpr>),
}

impl GExpr {
    /// Parses `step(N)`, `control(N)`, `system(N)`, `turns`, `freec`,
    /// `freec(K)`, `idle` and `fail` combined with `;`, `|`, `*`, `!`, `+`,
    /// `? :` and `one`.
    pub fn parse(toks: &[Token]) -> Result<GExpr> {
        let Some(first) = toks.first() else {
            return Err(Error::Syntax { line: 0, col: 0, msg: "expected a global strategy".into() });
        };
        if let Some(q) = find_top(toks, |t| t.is("?")) {
            let rest = &toks[q + 1..];
            let colon = find_top(rest, |t| t.is(":")).ok_or_else(|| toks[q].error("missing `:`"))?;
            return Ok(GExpr::Cond(
                Box::new(GExpr::parse(&toks[..q])?),
                Box::new(GExpr::parse(&rest[..colon])?),
                Box::new(GExpr::parse(&rest[colon + 1..])?),
            ));
        }
        for tok in ["|", ";"] {
            if let Some(i) = find_top(toks, |t| t.is(tok)) {
                let a = Box::new(GExpr::parse(&toks[..i])?);
                let b = Box::new(GExpr::parse(&toks[i + 1..])?);
                return Ok(if tok == "|" { GExpr::Choice(a, b) } else { GExpr::Seq(a, b) });
            }
        }
        let n = toks.len();
        if n > 1 {
            let inner = || GExpr::parse(&toks[..n - 1]);
            match toks[n - 1].text.as_str() {
                "*" => return Ok(GExpr::Star(Box::new(inner()?))),
                "!" => return Ok(GExpr::Bang(Box::new(inner()?))),
                "+" => {
                    let a = inner()?;
                    return Ok(GExpr::Seq(Box::new(a.clone()), Box::new(GExpr::Star(Box::new(a)))));
                }
                _ => {}
            }
        }
        if first.is("(") && matching_close(toks, 0)? == n - 1 {
            return GExpr::parse(&toks[1..n - 1]);
        }
        let arg = || -> Result<&[Token]> {
            if n >= 3 && toks[1].is("(") && matching_close(toks, 1)? == n - 1 {
                Ok(&toks[2..n - 1])
            } else {
                Err(first.error(format!("`{}` expects an argument", first.text)))
            }
        };
        let number = |ts: &[Token]| -> Result<u64> {
            match ts {
                [t] => t.text.parse().map_err(|_| t.error("expected a number")),
                _ => Err(first.error("expected a number")),
            }
        };
        match (first.text.as_str(), n) {
            ("idle", 1) => Ok(GExpr::Idle),
            ("fail", 1) => Ok(GExpr::Fail),
            ("turns", 1) => Ok(GExpr::Turns),
            ("freec" | "concurrent", 1) => Ok(GExpr::Freec),
            ("freec", _) => Ok(GExpr::Bounded(number(arg()?)?)),
            ("step" | "=>>", _) => Ok(GExpr::Step(number(arg()?)? as usize)),
            ("control", _) => Ok(GExpr::Control(number(arg()?)? as usize)),
            ("system", _) => Ok(GExpr::System(number(arg()?)? as usize)),
            ("one", _) => Ok(GExpr::One(Box::new(GExpr::parse(arg()?)?))),
            _ => Err(first.error(format!("unknown global strategy `{}`", first.text))),
        }
    }

    fn max_thread(&self) -> Option<usize> {
        use GExpr::*;
        match self {
            Step(n) | Control(n) | System(n) => Some(*n),
            Seq(a, b) | Choice(a, b) => a.max_thread().max(b.max_thread()),
            Star(a) | Bang(a) | One(a) => a.max_thread(),
            Cond(a, b, c) => a.max_thread().max(b.max_thread()).max(c.max_thread()),
            _ => None,
        }
    }
}

/// Multistrategy execution over one engine.
pub struct Multi<'e> {
    pub engine: &'e Engine,
    pub global: Global,
}

impl<'e> Multi<'e> {
    pub fn new(engine: &'e Engine, global: Global) -> Multi<'e> {
        Multi { engine, global }
    }

    /// Starting context; the term is reduced first.
    pub fn initial(&self, t: &Term, strats: &[StratRef]) -> Result<MsContext> {
        if strats.is_empty() {
            return Err(Error::Unsupported("a multistrategy needs at least one thread".into()));
        }
        if let Global::Custom(g) = &self.global {
            if let Some(n) = g.max_thread().filter(|&n| n >= strats.len()) {
                return Err(Error::Unsupported(format!("thread {n} does not exist")));
            }
        }
        let env = Env::default();
        let budget = match self.global {
            Global::Bounded(k) => Some(k),
            _ => None,
        };
        Ok(MsContext {
            term: self.engine.rewriter().normalize(t)?,
            threads: strats.iter().map(|s| Stack::empty().push(s, &env)).collect(),
            turn: 0,
            budget,
        })
    }

    fn thread_state(ctx: &MsContext, n: usize) -> ExecState {
        ExecState { term: ctx.term.clone(), stack: ctx.threads[n].clone() }
    }

    fn with_thread(ctx: &MsContext, n: usize, st: ExecState) -> MsContext {
        let mut next = ctx.clone();
        next.term = st.term;
        next.threads[n] = st.stack;
        next
    }

    /// Contexts after thread `n` performs one atomic step.
    pub fn ms_step(&self, ctx: &MsContext, n: usize) -> Result<Vec<(MsLabel, MsContext)>> {
        let steps = self.engine.system_steps(&Self::thread_state(ctx, n))?;
        Ok(steps
            .iter()
            .map(|(label, st)| (MsLabel { thread: n, step: label.clone() }, Self::with_thread(ctx, n, st.clone())))
            .collect())
    }

    /// One-step successors under the global strategy; empty when the
    /// context is final.
    pub fn successors(&self, ctx: &MsContext) -> Result<Vec<(MsLabel, MsContext)>> {
        let n = ctx.threads.len();
        match &self.global {
            Global::Turns => {
                let mut out = self.ms_step(ctx, ctx.turn)?;
                for (_, c) in &mut out {
                    c.turn = (ctx.turn + 1) % n;
                }
                Ok(out)
            }
            Global::Freec | Global::Bounded(_) => {
                if ctx.budget == Some(0) {
                    return Ok(vec![]);
                }
                let mut out = Vec::new();
                for i in 0..n {
                    for (l, mut c) in self.ms_step(ctx, i)? {
                        c.budget = ctx.budget.map(|b| b - 1);
                        out.push((l, c));
                    }
                }
                Ok(out)
            }
            Global::Custom(_) => Err(Error::Unsupported(
                "custom global strategies have no step relation; use turns or concurrent".into(),
            )),
        }
    }

    /// Result terms of the multistrategy, in discovery order.
    pub fn run(&self, t: &Term, strats: &[StratRef]) -> Result<Vec<Term>> {
        let init = self.initial(t, strats)?;
        let finals = match &self.global {
            Global::Custom(g) => self.eval(g, &init)?,
            _ => self.explore(init)?,
        };
        let mut out: Vec<Term> = Vec::new();
        for c in finals {
            if !out.contains(&c.term) {
                out.push(c.term);
            }
        }
        Ok(out)
    }

    /// Final contexts reachable from `init` under a built-in global
    /// strategy.
    fn explore(&self, init: MsContext) -> Result<Vec<MsContext>> {
        let limit = self.engine.state_limit();
        let mut visited = HashSet::new();
        let mut queue = VecDeque::new();
        visited.insert(init.clone());
        queue.push_back(init);
        let mut out = Vec::new();
        while let Some(ctx) = queue.pop_front() {
            let succ = self.successors(&ctx)?;
            if succ.is_empty() {
                out.push(ctx);
                continue;
            }
            for (_, c) in succ {
                if visited.insert(c.clone()) {
                    if visited.len() as u64 > limit {
                        return Err(Error::SearchLimit(limit));
                    }
                    queue.push_back(c);
                }
            }
        }
        Ok(out)
    }

    fn sub(&self, global: Global, ctx: &MsContext) -> Result<Vec<MsContext>> {
        let m = Multi { engine: self.engine, global };
        let mut start = ctx.clone();
        start.budget = match m.global {
            Global::Bounded(k) => Some(k),
            _ => None,
        };
        let mut out = m.explore(start)?;
        for c in &mut out {
            c.budget = None;
        }
        Ok(out)
    }

    fn thread_steps(&self, ctx: &MsContext, n: usize, class: StepClass) -> Result<Vec<MsContext>> {
        Ok(self
            .engine
            .step(&Self::thread_state(ctx, n))?
            .into_iter()
            .filter(|s| s.class == class)
            .map(|s| Self::with_thread(ctx, n, s.state))
            .collect())
    }

    /// Big-step evaluation of a custom global strategy.
    pub fn eval(&self, g: &GExpr, ctx: &MsContext) -> Result<Vec<MsContext>> {
        use GExpr::*;
        let limit = self.engine.state_limit();
        Ok(match g {
            Idle => vec![ctx.clone()],
            Fail => vec![],
            Step(n) => self.ms_step(ctx, *n)?.into_iter().map(|(_, c)| c).collect(),
            Control(n) => self.thread_steps(ctx, *n, StepClass::Control)?,
            System(n) => self.thread_steps(ctx, *n, StepClass::System)?,
            Turns => self.sub(Global::Turns, ctx)?,
            Freec => self.sub(Global::Freec, ctx)?,
            Bounded(k) => self.sub(Global::Bounded(*k), ctx)?,
            Seq(a, b) => {
                let mut out = Vec::new();
                for c in self.eval(a, ctx)? {
                    for d in self.eval(b, &c)? {
                        if !out.contains(&d) {
                            out.push(d);
                        }
                    }
                }
                out
            }
            Choice(a, b) => {
                let mut out = self.eval(a, ctx)?;
                for d in self.eval(b, ctx)? {
                    if !out.contains(&d) {
                        out.push(d);
                    }
                }
                out
            }
            Star(a) | Bang(a) => {
                let mut seen = vec![ctx.clone()];
                let mut i = 0;
                while i < seen.len() {
                    for d in self.eval(a, &seen[i].clone())? {
                        if !seen.contains(&d) {
                            if seen.len() as u64 >= limit {
                                return Err(Error::SearchLimit(limit));
                            }
                            seen.push(d);
                        }
                    }
                    i += 1;
                }
                if matches!(g, Bang(_)) {
                    let mut out = Vec::new();
                    for c in seen {
                        if self.eval(a, &c)?.is_empty() {
                            out.push(c);
                        }
                    }
                    out
                } else {
                    seen
                }
            }
            Cond(a, b, c) => {
                let first = self.eval(a, ctx)?;
                if first.is_empty() {
                    self.eval(c, ctx)?
                } else {
                    let mut out = Vec::new();
                    for x in first {
                        for d in self.eval(b, &x)? {
                            if !out.contains(&d) {
                                out.push(d);
                            }
                        }
                    }
                    out
                }
            }
            One(a) => self.eval(a, ctx)?.into_iter().take(1).collect(),
        })
    }
}

/// Convenience wrapper running a multistrategy with a fresh engine.
pub fn run_global(
    m: &Arc<crate::module::ModuleDef>,
    t: &Term,
    strats: &[StratRef],
    global: Global,
) -> Result<Vec<Term>> {
    let engine = Engine::new(m.clone());
    Multi::new(&engine, global).run(t, strats)
}
