//! Strategy execution. Solutions are computed by exploring a small-step
//! machine whose states pair the subject with a stack of pending tasks.
//! Atomic strategies (rule applications, `all`, tests, matchrews, `one` and
//! the traversal operators) are evaluated to completion in a single step.

pub mod state;

use std::cell::RefCell;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ext::congruence_ops;
use crate::kernel::{match_anywhere, match_with, replace_at, sym, Position, Signature, Subst, Sym, Term, Var};
use crate::module::{CondFrag, ModuleDef};
use crate::rewrite::Rewriter;
use crate::strategy::{StratRef, Strategy};

pub use state::{Env, ExecState, Node, Stack, Step, StepClass, Task};

pub const DEFAULT_STATE_LIMIT: u64 = 1_000_000;

type MemoKey = (Term, Node, Env);

pub struct Engine {
    rw: Rewriter,
    state_limit: u64,
    memo: RefCell<HashMap<MemoKey, Arc<Vec<Term>>>>,
    active: RefCell<HashSet<MemoKey>>,
    sys_memo: RefCell<HashMap<ExecState, Arc<Vec<(Sym, ExecState)>>>>,
}

/// Whether `s` runs to completion in one system step.
pub fn is_atomic(s: &Strategy) -> bool {
    use Strategy::*;
    matches!(
        s,
        Apply { .. }
            | All
            | Match { .. }
            | MatchRew { .. }
            | One(_)
            | Congruence { .. }
            | GtAll(_)
            | GtOne(_)
            | GtSome(_)
    )
}

/// Name shown for a step performed by `s`: the first strategy called
/// inside it, else the first rule applied, else the combinator itself.
pub fn label_of(s: &Strategy) -> Sym {
    fn find(s: &Strategy, calls: bool) -> Option<Sym> {
        match s {
            Strategy::Call { name, .. } if calls => Some(name.clone()),
            Strategy::Apply { label, .. } if !calls => Some(label.clone()),
            _ => s.children().into_iter().find_map(|c| find(c, calls)),
        }
    }
    if let Some(l) = find(s, true).or_else(|| find(s, false)) {
        return l;
    }
    use Strategy::*;
    sym(match s {
        Idle => "idle",
        Fail => "fail",
        All => "all",
        Match { .. } => "match",
        MatchRew { .. } => "matchrew",
        Congruence { op, .. } => op,
        GtAll(_) => "gt-all",
        GtOne(_) => "gt-one",
        GtSome(_) => "gt-some",
        Seq(..) => ";",
        Choice(..) => "|",
        OrElse(..) => "or-else",
        Cond(..) => "?",
        Star(_) => "*",
        Bang(_) => "!",
        One(_) => "one",
        Try(_) => "try",
        Not(_) => "not",
        Test(_) => "test",
        Apply { label, .. } => label,
        Call { name, .. } => name,
    })
}

fn control(term: &Term, stack: Stack) -> Step {
    Step { class: StepClass::Control, label: None, state: ExecState { term: term.clone(), stack } }
}

/// Every way of picking one element from each list.
pub fn cartesian(lists: &[Arc<Vec<Term>>]) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::with_capacity(lists.len())];
    for l in lists {
        let mut next = Vec::with_capacity(out.len() * l.len());
        for prefix in &out {
            for x in l.iter() {
                let mut v = prefix.clone();
                v.push(x.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn push_new(out: &mut Vec<Term>, t: Term) {
    if !out.contains(&t) {
        out.push(t);
    }
}

impl Engine {
    pub fn new(module: Arc<ModuleDef>) -> Engine {
        Engine::with_rewriter(Rewriter::new(module))
    }

    pub fn with_rewriter(rw: Rewriter) -> Engine {
        Engine {
            rw,
            state_limit: DEFAULT_STATE_LIMIT,
            memo: RefCell::default(),
            active: RefCell::default(),
            sys_memo: RefCell::default(),
        }
    }

    pub fn with_state_limit(mut self, limit: u64) -> Engine {
        self.state_limit = limit;
        self
    }

    pub fn state_limit(&self) -> u64 {
        self.state_limit
    }

    pub fn rewriter(&self) -> &Rewriter {
        &self.rw
    }

    pub fn module(&self) -> &Arc<ModuleDef> {
        self.rw.module()
    }

    pub fn sig(&self) -> &Signature {
        self.rw.sig()
    }

    /// All results of running `s` on `t`, in exploration order.
    pub fn srewrite(&self, t: &Term, s: &StratRef, depth_first: bool) -> Result<Vec<Term>> {
        let t = self.rw.normalize(t)?;
        let env = Env::default();
        if depth_first {
            self.search(ExecState::new(t, s, &env), true, false)
        } else {
            Ok(self.solutions(&t, s, &env)?.to_vec())
        }
    }

    /// Memoized solution set of `s` on `t` under `env`, breadth first.
    pub fn solutions(&self, t: &Term, s: &StratRef, env: &Env) -> Result<Arc<Vec<Term>>> {
        let key = (t.clone(), Node(s.clone()), env.clone());
        if let Some(v) = self.memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        if !self.active.borrow_mut().insert(key.clone()) {
            return Err(Error::Divergence(format!("`{}` depends on its own result", label_of(s))));
        }
        let res = if is_atomic(s) {
            self.atomic(t, s, env)
        } else {
            self.search(ExecState::new(t.clone(), s, env), false, false)
        };
        self.active.borrow_mut().remove(&key);
        let res = Arc::new(res?);
        self.memo.borrow_mut().insert(key, res.clone());
        Ok(res)
    }

    /// Explores the machine from `init`, collecting subjects of finished
    /// states.
    pub fn search(&self, init: ExecState, depth_first: bool, first_only: bool) -> Result<Vec<Term>> {
        let mut visited: HashSet<ExecState> = HashSet::new();
        let mut frontier = VecDeque::new();
        visited.insert(init.clone());
        frontier.push_back(init);
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        loop {
            let next = if depth_first { frontier.pop_back() } else { frontier.pop_front() };
            let Some(st) = next else { break };
            if st.is_solution() {
                if seen.insert(st.term.clone()) {
                    out.push(st.term);
                    if first_only {
                        break;
                    }
                }
                continue;
            }
            let mut succ = self.step(&st)?;
            if depth_first {
                succ.reverse();
            }
            for step in succ {
                if visited.insert(step.state.clone()) {
                    if visited.len() as u64 > self.state_limit {
                        return Err(Error::SearchLimit(self.state_limit));
                    }
                    frontier.push_back(step.state);
                }
            }
        }
        Ok(out)
    }

    /// One-step successors of a state, classified.
    pub fn step(&self, st: &ExecState) -> Result<Vec<Step>> {
        use Strategy::*;
        let Some((task, rest)) = st.stack.top() else { return Ok(vec![]) };
        let t = &st.term;
        let env = &task.env;
        let s = &task.strat.0;
        Ok(match &**s {
            Idle => vec![control(t, rest.clone())],
            Fail => vec![],
            Seq(a, b) => vec![control(t, rest.push(b, env).push(a, env))],
            Choice(a, b) => vec![control(t, rest.push(a, env)), control(t, rest.push(b, env))],
            Star(a) => vec![control(t, rest.clone()), control(t, rest.push(s, env).push(a, env))],
            Bang(a) => self.cond_step(t, a, Some(s), None, env, rest)?,
            Cond(a, b, c) => self.cond_step(t, a, Some(b), Some(c), env, rest)?,
            Try(a) => self.cond_step(t, a, None, None, env, rest)?,
            OrElse(a, b) => self.cond_step(t, a, None, Some(b), env, rest)?,
            Not(a) => {
                if self.solutions(t, a, env)?.is_empty() {
                    vec![control(t, rest.clone())]
                } else {
                    vec![]
                }
            }
            Test(a) => {
                if self.solutions(t, a, env)?.is_empty() {
                    vec![]
                } else {
                    vec![control(t, rest.clone())]
                }
            }
            Call { name, args } => self.unfold(t, name, args, env, rest)?,
            _ => {
                let label = label_of(s);
                self.solutions(t, s, env)?
                    .iter()
                    .map(|u| Step {
                        class: StepClass::System,
                        label: Some(label.clone()),
                        state: ExecState { term: u.clone(), stack: rest.clone() },
                    })
                    .collect()
            }
        })
    }

    /// The condition of a conditional runs to completion in one system
    /// step; when it has no result the else branch is entered.
    fn cond_step(
        &self,
        t: &Term,
        c: &StratRef,
        then: Option<&StratRef>,
        els: Option<&StratRef>,
        env: &Env,
        rest: &Stack,
    ) -> Result<Vec<Step>> {
        let sols = self.solutions(t, c, env)?;
        if sols.is_empty() {
            let stack = els.map(|e| rest.push(e, env)).unwrap_or_else(|| rest.clone());
            return Ok(vec![control(t, stack)]);
        }
        let stack = then.map(|b| rest.push(b, env)).unwrap_or_else(|| rest.clone());
        let label = label_of(c);
        Ok(sols
            .iter()
            .map(|u| Step {
                class: StepClass::System,
                label: Some(label.clone()),
                state: ExecState { term: u.clone(), stack: stack.clone() },
            })
            .collect())
    }

    fn instantiate(&self, t: &Term, env: &Env) -> Result<Term> {
        let v = self.rw.normalize(&env.apply(self.sig(), t))?;
        if !v.is_ground() {
            let free: Vec<String> = v.vars().iter().map(Var::to_string).collect();
            return Err(Error::Instantiation(format!("unbound strategy variables {}", free.join(", "))));
        }
        Ok(v)
    }

    /// Replaces a call by the bodies of every definition whose head matches
    /// the reduced arguments.
    fn unfold(&self, t: &Term, name: &Sym, args: &[Term], env: &Env, rest: &Stack) -> Result<Vec<Step>> {
        let sig = self.sig();
        let args = args.iter().map(|a| self.instantiate(a, env)).collect::<Result<Vec<_>>>()?;
        let module = self.module().clone();
        let mut out = Vec::new();
        for def in module.defs_for(name, args.len()) {
            let mut substs = vec![Subst::new()];
            for (p, a) in def.lhs.iter().zip(&args) {
                substs = substs.iter().flat_map(|s| crate::kernel::match_all(sig, p, a, s)).collect();
            }
            for s in substs {
                for s2 in self.rw.check_condition(&def.cond, &s)? {
                    out.push(control(t, rest.push(&def.body, &Arc::new(s2))));
                }
            }
        }
        Ok(out)
    }

    fn holds(&self, cond: &[CondFrag], s: &Subst) -> Result<bool> {
        self.rw.check_condition_with(cond, s, &mut |_| true)
    }

    /// Matches of `pattern` (at the root, or anywhere) extending `env`.
    fn matches(&self, t: &Term, pattern: &Term, anywhere: bool, env: &Env) -> Vec<(Position, Subst)> {
        let sig = self.sig();
        let p = env.apply(sig, pattern);
        let mut found = Vec::new();
        if anywhere {
            match_anywhere(sig, &p, t, env, false, &mut |pos, s| {
                found.push((pos.clone(), s.clone()));
                false
            });
        } else {
            match_with(sig, &p, t, env, &mut |s| {
                found.push((Position::root(), s.clone()));
                false
            });
        }
        found
    }

    fn atomic(&self, t: &Term, s: &StratRef, env: &Env) -> Result<Vec<Term>> {
        use Strategy::*;
        let sig = self.sig();
        match &**s {
            Apply { label, init, top } => {
                let init =
                    init.iter().map(|(n, v)| Ok((n.clone(), self.instantiate(v, env)?))).collect::<Result<Vec<_>>>()?;
                self.rw.apply_label(t, label, &init, *top)
            }
            All => self.rw.apply_all(t),
            Match { anywhere, pattern, cond } => {
                for (_, m) in self.matches(t, pattern, *anywhere, env) {
                    if self.holds(cond, &m)? {
                        return Ok(vec![t.clone()]);
                    }
                }
                Ok(vec![])
            }
            MatchRew { anywhere, pattern, cond, slots } => {
                let mut out = Vec::new();
                for (pos, m) in self.matches(t, pattern, *anywhere, env) {
                    for s2 in self.rw.check_condition(cond, &m)? {
                        let env2 = Arc::new(s2);
                        let mut lists = Vec::with_capacity(slots.len());
                        for (x, strat) in slots {
                            let v =
                                env2.get(x).ok_or_else(|| Error::Instantiation(format!("slot {x} is not bound")))?;
                            lists.push(self.solutions(v, strat, &env2)?);
                        }
                        for combo in cartesian(&lists) {
                            let mut s3 = (*env2).clone();
                            for ((x, _), r) in slots.iter().zip(combo) {
                                s3.insert(x.clone(), r);
                            }
                            let sub = s3.apply(sig, pattern);
                            let whole = if *anywhere { replace_at(sig, t, &pos, sub) } else { sub };
                            push_new(&mut out, self.rw.normalize(&whole)?);
                        }
                    }
                }
                Ok(out)
            }
            One(a) => self.search(ExecState::new(t.clone(), a, env), true, true),
            Congruence { op, args } => {
                let Some(fam) = sig.family(op, args.len()) else { return Ok(vec![]) };
                let mut out = Vec::new();
                for children in self.decompose(t, &fam.name, fam.arity) {
                    let lists = children
                        .iter()
                        .zip(args)
                        .map(|(c, a)| self.solutions(c, a, env))
                        .collect::<Result<Vec<_>>>()?;
                    self.rebuild(op, &lists, &mut out)?;
                }
                Ok(out)
            }
            GtAll(a) => {
                let mut out = Vec::new();
                for (op, n) in congruence_ops(sig) {
                    for children in self.decompose(t, &op, n) {
                        let lists = children.iter().map(|c| self.solutions(c, a, env)).collect::<Result<Vec<_>>>()?;
                        self.rebuild(&op, &lists, &mut out)?;
                    }
                }
                Ok(out)
            }
            GtOne(a) => {
                let mut out = Vec::new();
                for (op, n) in congruence_ops(sig) {
                    let decomps = self.decompose(t, &op, n);
                    // leftmost argument position with any result
                    for i in 0..n {
                        let mut here = Vec::new();
                        for children in &decomps {
                            let mut lists: Vec<Arc<Vec<Term>>> =
                                children.iter().map(|c| Arc::new(vec![c.clone()])).collect();
                            lists[i] = self.solutions(&children[i], a, env)?;
                            self.rebuild(&op, &lists, &mut here)?;
                        }
                        if !here.is_empty() {
                            for u in here {
                                push_new(&mut out, u);
                            }
                            break;
                        }
                    }
                }
                Ok(out)
            }
            GtSome(a) => {
                let mut tried = Vec::new();
                let mut any = false;
                for (op, n) in congruence_ops(sig) {
                    if n == 0 {
                        continue;
                    }
                    for children in self.decompose(t, &op, n) {
                        let mut lists = Vec::with_capacity(n);
                        for c in &children {
                            let r = self.solutions(c, a, env)?;
                            if r.is_empty() {
                                lists.push(Arc::new(vec![c.clone()]));
                            } else {
                                any = true;
                                lists.push(r);
                            }
                        }
                        tried.push((op.clone(), lists));
                    }
                }
                let mut out = Vec::new();
                if any {
                    for (op, lists) in tried {
                        self.rebuild(&op, &lists, &mut out)?;
                    }
                }
                Ok(out)
            }
            _ => Err(Error::Unsupported(format!("`{}` is not atomic", label_of(s)))),
        }
    }

    fn rebuild(&self, op: &Sym, lists: &[Arc<Vec<Term>>], out: &mut Vec<Term>) -> Result<()> {
        for combo in cartesian(lists) {
            let u = self.sig().make(op, combo);
            push_new(out, self.rw.normalize(&u)?);
        }
        Ok(())
    }

    /// Argument lists `args` with `op(args)` equal to `t` modulo axioms.
    pub fn decompose(&self, t: &Term, op: &Sym, arity: usize) -> Vec<Vec<Term>> {
        let sig = self.sig();
        if arity == 0 {
            return if t.op() == Some(op) && t.args().is_empty() { vec![vec![]] } else { vec![] };
        }
        if let Some(n) = t.as_numeral() {
            return if &**op == "s_" && arity == 1 && n > 0 && sig.has_successor() {
                vec![vec![Term::numeral(n - 1)]]
            } else {
                vec![]
            };
        }
        let Some(fam) = sig.family(op, arity) else { return vec![] };
        let a = &fam.attrs;
        if !a.assoc && !a.comm && a.identity.is_none() {
            return if t.op() == Some(op) && t.args().len() == arity { vec![t.args().to_vec()] } else { vec![] };
        }
        let pattern = Term::app(op.clone(), generic_vars(sig, op, arity).into_iter().map(Term::var).collect());
        let vars = generic_vars(sig, op, arity);
        crate::kernel::match_all(sig, &pattern, t, &Subst::new())
            .into_iter()
            .map(|s| vars.iter().map(|v| s.get(v).cloned().expect("pattern variable bound")).collect())
            .collect()
    }

    /// Successor states of `st` reached by any number of control steps
    /// followed by exactly one system step, with that step's label.
    pub fn system_steps(&self, st: &ExecState) -> Result<Arc<Vec<(Sym, ExecState)>>> {
        if let Some(v) = self.sys_memo.borrow().get(st) {
            return Ok(v.clone());
        }
        let mut visited = HashSet::new();
        let mut queue = VecDeque::new();
        visited.insert(st.clone());
        queue.push_back(st.clone());
        let mut out: Vec<(Sym, ExecState)> = Vec::new();
        while let Some(cur) = queue.pop_front() {
            for step in self.step(&cur)? {
                match step.class {
                    StepClass::Control => {
                        if visited.insert(step.state.clone()) {
                            if visited.len() as u64 > self.state_limit {
                                return Err(Error::SearchLimit(self.state_limit));
                            }
                            queue.push_back(step.state);
                        }
                    }
                    StepClass::System => {
                        let item = (step.label.unwrap_or_else(|| sym("step")), step.state);
                        if !out.contains(&item) {
                            out.push(item);
                        }
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.sys_memo.borrow_mut().insert(st.clone(), out.clone());
        Ok(out)
    }
}

/// Variables `X1 … Xn` ranging over the argument kinds of `op`.
pub fn generic_vars(sig: &Signature, op: &str, arity: usize) -> Vec<Var> {
    let fam = sig.family(op, arity);
    (0..arity)
        .map(|i| {
            let sort = fam
                .and_then(|f| f.decls.first())
                .map(|&d| sig.kind_of(&sig.ops()[d].args[i]))
                .unwrap_or_else(|| sym(crate::kernel::UNIVERSAL));
            Var::new(&format!("X{}", i + 1), &sort)
        })
        .collect()
}
