//! Module language: `fmod`, `mod` and `smod` blocks with sorts, operators,
//! variables, equations, rules, strategy declarations and definitions, and
//! atomic propositions.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frontend::lexer::{err_at, find_top, matching_close, split_top, tokenize, Token};
use crate::frontend::prelude::PRELUDE;
use crate::frontend::strategy_parser::parse_strategy;
use crate::frontend::term_parser::TermCtx;
use crate::kernel::{sym, OpAttrs, OpDecl, Sym, Term, Var};
use crate::module::{CondFrag, Equation, ModuleDef, ModuleKind, PropDef, Rule, StratDecl, StratDef};

/// Sort name accepted in strategy declarations without being declared.
pub const ANY_TERM: &str = "AnyTerm";

/// Registry of loaded modules, keyed by name.
#[derive(Debug, Clone)]
pub struct ModuleStore {
    modules: HashMap<String, Arc<ModuleDef>>,
    order: Vec<String>,
    builtin: usize,
    /// Whether strategy expressions may use congruence and traversal
    /// operators.
    pub extended: bool,
}

impl Default for ModuleStore {
    fn default() -> Self {
        ModuleStore::new()
    }
}

impl ModuleStore {
    /// A store holding the builtin modules.
    pub fn new() -> ModuleStore {
        let mut store = ModuleStore { modules: HashMap::new(), order: Vec::new(), builtin: 0, extended: true };
        store.load_str(PRELUDE).expect("prelude parses");
        store.builtin = store.order.len();
        store
    }

    pub fn get(&self, name: &str) -> Option<Arc<ModuleDef>> {
        self.modules.get(name).cloned()
    }

    /// Adds or replaces a module.
    pub fn insert(&mut self, m: ModuleDef) -> Arc<ModuleDef> {
        let name = m.name.to_string();
        let m = Arc::new(m);
        if self.modules.insert(name.clone(), m.clone()).is_none() {
            self.order.push(name);
        }
        m
    }

    /// Names of modules loaded by the user, in load order.
    pub fn user_modules(&self) -> &[String] {
        &self.order[self.builtin..]
    }

    /// Equations of the builtin modules.
    pub fn prelude_equations(&self) -> Vec<crate::module::Equation> {
        let mut out: Vec<crate::module::Equation> = Vec::new();
        for name in &self.order[..self.builtin] {
            for eq in &self.modules[name].eqs {
                if !out.contains(eq) {
                    out.push(eq.clone());
                }
            }
        }
        out
    }

    /// The builtin modules.
    pub fn prelude_modules(&self) -> Vec<Arc<ModuleDef>> {
        self.order[..self.builtin].iter().map(|n| self.modules[n].clone()).collect()
    }

    /// Most recently loaded user module.
    pub fn last(&self) -> Option<Arc<ModuleDef>> {
        self.user_modules().last().and_then(|n| self.get(n))
    }

    /// Parses every module in `src`, registering each one before the next
    /// is read so that later modules may import earlier ones.
    pub fn load_str(&mut self, src: &str) -> Result<Vec<Arc<ModuleDef>>> {
        self.load_tokens(&tokenize(src))
    }

    pub fn load_tokens(&mut self, toks: &[Token]) -> Result<Vec<Arc<ModuleDef>>> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < toks.len() {
            let (m, next) = self.parse_module(toks, i)?;
            out.push(self.insert(m));
            i = next;
        }
        Ok(out)
    }

    fn parse_module(&self, toks: &[Token], start: usize) -> Result<(ModuleDef, usize)> {
        let head = &toks[start];
        let (kind, end_kw) = match head.text.as_str() {
            "fmod" => (ModuleKind::Functional, "endfm"),
            "mod" => (ModuleKind::System, "endm"),
            "smod" => (ModuleKind::Strategy, "endsm"),
            "mb" | "cmb" => return Err(head.error("membership axioms are not supported")),
            other => return Err(head.error(format!("expected a module, found `{other}`"))),
        };
        let name = toks.get(start + 1).ok_or_else(|| head.error("missing module name"))?;
        if !toks.get(start + 2).is_some_and(|t| t.is("is")) {
            return Err(name.error("expected `is` after the module name"));
        }
        let body_start = start + 3;
        let end = (body_start..toks.len())
            .find(|&j| matches!(toks[j].text.as_str(), "endfm" | "endm" | "endsm"))
            .ok_or_else(|| head.error(format!("module `{}` is not closed", name.text)))?;
        if !toks[end].is(end_kw) {
            return Err(toks[end].error(format!("expected `{end_kw}`")));
        }
        let body = &toks[body_start..end];
        let mut stmts = split_top(body, |t| t.is("."));
        let tail = stmts.pop().unwrap_or(&[]);
        if !tail.is_empty() {
            return Err(err_at(tail, "statement is missing its terminating ` .`"));
        }
        let m = Builder::new(self, &name.text, kind).build(&stmts)?;
        Ok((m, end + 1))
    }
}

fn is_import(kw: &str) -> bool {
    matches!(kw, "protecting" | "pr" | "extending" | "ex" | "including" | "inc")
}

const OP_ATTRS: &[&str] = &[
    "ctor",
    "constructor",
    "assoc",
    "comm",
    "id:",
    "idem",
    "left",
    "right",
    "frozen",
    "strat",
    "prec",
    "gather",
    "format",
    "memo",
    "iter",
    "ditto",
    "config",
    "object",
    "msg",
    "poly",
    "builtin",
    "special",
    "metadata",
];

const STMT_ATTRS: &[&str] = &["owise", "otherwise", "nonexec", "label", "metadata", "print", "variant", "narrowing"];

/// Splits a trailing `[attr ...]` group off a statement.
fn split_attrs<'a>(toks: &'a [Token], keywords: &[&str]) -> (&'a [Token], &'a [Token]) {
    if !toks.last().is_some_and(|t| t.is("]")) {
        return (toks, &[]);
    }
    let close = toks.len() - 1;
    let mut depth = 0i32;
    let mut open = None;
    for j in (0..=close).rev() {
        match toks[j].text.as_str() {
            ")" | "]" | "}" => depth += 1,
            "(" | "[" | "{" => {
                depth -= 1;
                if depth == 0 {
                    open = Some(j);
                    break;
                }
            }
            _ => {}
        }
    }
    match open {
        Some(o) if o + 1 < close && keywords.contains(&toks[o + 1].text.as_str()) => (&toks[..o], &toks[o + 1..close]),
        _ => (toks, &[]),
    }
}

fn parse_index(t: &Token) -> Result<usize> {
    t.text.parse().map_err(|_| t.error(format!("expected a number, found `{}`", t.text)))
}

/// Integers inside a parenthesized group starting at `open`; returns them and
/// the index after the group.
fn paren_ints(toks: &[Token], open: usize) -> Result<(Vec<usize>, usize)> {
    if !toks.get(open).is_some_and(|t| t.is("(")) {
        return Err(err_at(&toks[open.min(toks.len().saturating_sub(1))..], "expected `(`"));
    }
    let close = matching_close(toks, open)?;
    let ints = toks[open + 1..close].iter().map(parse_index).collect::<Result<Vec<_>>>()?;
    Ok((ints, close + 1))
}

struct PendingOp {
    decl: OpDecl,
    id_toks: Option<Vec<Token>>,
}

fn parse_op_attrs(toks: &[Token], arity: usize) -> Result<(OpAttrs, Option<Vec<Token>>)> {
    let mut attrs = OpAttrs::default();
    let mut id_toks = None;
    let mut i = 0;
    let in_range = |ix: &[usize], t: &Token| -> Result<()> {
        match ix.iter().find(|&&k| k == 0 || k > arity) {
            Some(k) => Err(t.error(format!("argument index {k} out of range 1..{arity}"))),
            None => Ok(()),
        }
    };
    while i < toks.len() {
        let t = &toks[i];
        i += 1;
        match t.text.as_str() {
            "ctor" | "constructor" => attrs.ctor = true,
            "assoc" => attrs.assoc = true,
            "comm" => attrs.comm = true,
            "builtin" => attrs.builtin = true,
            "memo" | "iter" | "ditto" | "config" | "object" | "msg" => {}
            "id:" => {
                let start = i;
                let mut depth = 0i32;
                while i < toks.len() {
                    match toks[i].text.as_str() {
                        "(" | "[" | "{" => depth += 1,
                        ")" | "]" | "}" => depth -= 1,
                        w if depth == 0 && OP_ATTRS.contains(&w) => break,
                        _ => {}
                    }
                    i += 1;
                }
                if start == i {
                    return Err(t.error("missing identity element"));
                }
                id_toks = Some(toks[start..i].to_vec());
            }
            "idem" | "left" | "right" | "special" => {
                return Err(Error::Unsupported(format!("operator attribute `{}`", t.text)));
            }
            "frozen" => {
                if toks.get(i).is_some_and(|x| x.is("(")) {
                    let (ix, next) = paren_ints(toks, i)?;
                    in_range(&ix, t)?;
                    attrs.frozen = ix;
                    i = next;
                } else {
                    attrs.frozen = (1..=arity).collect();
                }
                attrs.frozen.sort_unstable();
                attrs.frozen.dedup();
            }
            "strat" => {
                let (ix, next) = paren_ints(toks, i)?;
                i = next;
                let upto: Vec<usize> = ix.iter().copied().take_while(|&k| k != 0).collect();
                in_range(&upto, t)?;
                attrs.strat = Some(upto);
            }
            "prec" => {
                let n = toks.get(i).ok_or_else(|| t.error("missing precedence"))?;
                attrs.prec = Some(parse_index(n)? as u32);
                i += 1;
            }
            "gather" | "format" | "poly" => {
                if toks.get(i).is_some_and(|x| x.is("(")) {
                    i = matching_close(toks, i)? + 1;
                }
            }
            "metadata" => i += 1,
            other => return Err(t.error(format!("unknown operator attribute `{other}`"))),
        }
    }
    Ok((attrs, id_toks))
}

/// Parses the fragments of an equational condition.
pub fn parse_condition(toks: &[Token], ctx: &TermCtx) -> Result<Vec<CondFrag>> {
    if toks.is_empty() {
        return Err(Error::Syntax { line: 0, col: 0, msg: "empty condition".into() });
    }
    split_top(toks, |t| t.is("/\\")).into_iter().map(|frag| parse_fragment(frag, ctx)).collect()
}

fn parse_fragment(toks: &[Token], ctx: &TermCtx) -> Result<CondFrag> {
    if toks.is_empty() {
        return Err(Error::Syntax { line: 0, col: 0, msg: "empty condition fragment".into() });
    }
    if find_top(toks, |t| t.is("=>")).is_some() {
        return Err(Error::Unsupported("rewriting conditions in rules".into()));
    }
    if let Some(i) = find_top(toks, |t| t.is(":=")) {
        return Ok(CondFrag::Assign(ctx.parse(&toks[..i])?, ctx.parse(&toks[i + 1..])?));
    }
    if let Some(i) = find_top(toks, |t| t.is("=")) {
        return Ok(CondFrag::Eq(ctx.parse(&toks[..i])?, ctx.parse(&toks[i + 1..])?));
    }
    let n = toks.len();
    if n > 2 && toks[n - 2].is(":") && ctx.sig.has_sort(&toks[n - 1].text) {
        return Ok(CondFrag::Sort(ctx.parse(&toks[..n - 2])?, sym(&toks[n - 1].text)));
    }
    let t = ctx.parse(toks)?;
    Ok(CondFrag::Eq(t, Term::constant("true")))
}

/// Variables of `t` not in `bound`.
fn unbound(t: &Term, bound: &[Var]) -> Vec<Var> {
    t.vars().into_iter().filter(|v| !bound.contains(v)).collect()
}

/// Checks that every variable of the right-hand side and the condition is
/// bound by the left-hand side or an earlier assignment.
fn check_vars(lhs: &Term, rhs: &Term, cond: &[CondFrag], what: &str) -> Result<()> {
    let mut bound = lhs.vars();
    for c in cond {
        match c {
            CondFrag::Assign(p, r) => {
                if let Some(v) = unbound(r, &bound).first() {
                    return Err(Error::Module(format!("variable {}:{} is unbound in {what}", v.name, v.sort)));
                }
                p.collect_vars(&mut bound);
            }
            CondFrag::Eq(l, r) => {
                for t in [l, r] {
                    if let Some(v) = unbound(t, &bound).first() {
                        return Err(Error::Module(format!("variable {}:{} is unbound in {what}", v.name, v.sort)));
                    }
                }
            }
            CondFrag::Sort(t, _) => {
                if let Some(v) = unbound(t, &bound).first() {
                    return Err(Error::Module(format!("variable {}:{} is unbound in {what}", v.name, v.sort)));
                }
            }
        }
    }
    if let Some(v) = unbound(rhs, &bound).first() {
        return Err(Error::Module(format!("variable {}:{} is unbound in {what}", v.name, v.sort)));
    }
    Ok(())
}

struct Builder<'s> {
    store: &'s ModuleStore,
    m: ModuleDef,
    vars: HashMap<String, Sym>,
}

impl<'s> Builder<'s> {
    fn new(store: &'s ModuleStore, name: &str, kind: ModuleKind) -> Builder<'s> {
        Builder { store, m: ModuleDef::new(name, kind), vars: HashMap::new() }
    }

    fn import(&mut self, name: &str, at: &Token) -> Result<()> {
        if self.m.imports.iter().any(|i| &**i == name) {
            return Ok(());
        }
        let imp = self.store.get(name).ok_or_else(|| at.error(format!("unknown module `{name}`")))?;
        for s in imp.sig.sorts() {
            self.m.sig.add_sort(s);
        }
        for (a, b) in imp.sig.subsorts() {
            self.m.sig.add_subsort(a, b)?;
        }
        for d in imp.sig.ops() {
            self.m.sig.add_op(d.clone())?;
        }
        for e in &imp.eqs {
            if !self.m.eqs.contains(e) {
                self.m.eqs.push(e.clone());
            }
        }
        for r in &imp.rules {
            if !self.m.rules.contains(r) {
                self.m.rules.push(r.clone());
            }
        }
        for d in &imp.strat_decls {
            if !self.m.strat_decls.contains(d) {
                self.m.strat_decls.push(d.clone());
            }
        }
        for d in &imp.strat_defs {
            if !self.m.strat_defs.contains(d) {
                self.m.strat_defs.push(d.clone());
            }
        }
        for p in &imp.props {
            if !self.m.props.contains(p) {
                self.m.props.push(p.clone());
            }
        }
        for i in imp.imports.iter().chain(std::iter::once(&imp.name)) {
            if !self.m.imports.contains(i) {
                self.m.imports.push(i.clone());
            }
        }
        Ok(())
    }

    fn sort_name(&self, t: &Token) -> Result<Sym> {
        if self.m.sig.has_sort(&t.text) {
            Ok(sym(&t.text))
        } else {
            Err(t.error(format!("undeclared sort `{}`", t.text)))
        }
    }

    /// Sort list where kinds `[S]` stand for `S`.
    fn sort_list(&self, toks: &[Token]) -> Result<Vec<Sym>> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < toks.len() {
            if toks[i].is("[") {
                let close = matching_close(toks, i)?;
                let inner = &toks[i + 1..close];
                let first = inner.first().ok_or_else(|| toks[i].error("empty kind"))?;
                out.push(self.sort_name(first)?);
                i = close + 1;
            } else {
                out.push(self.sort_name(&toks[i])?);
                i += 1;
            }
        }
        Ok(out)
    }

    fn build(mut self, stmts: &[&[Token]]) -> Result<ModuleDef> {
        let own_name = self.m.name.to_string();
        if own_name != "BOOL" && self.store.get("BOOL").is_some() {
            let at = Token { text: "BOOL".into(), line: 0, col: 0 };
            self.import("BOOL", &at)?;
        }
        let kw = |s: &[Token]| s.first().map(|t| t.text.clone()).unwrap_or_default();
        for s in stmts {
            if s.is_empty() {
                continue;
            }
            let k = kw(s);
            if is_import(&k) {
                let names = split_top(&s[1..], |t| t.is("+"));
                for n in names {
                    match n {
                        [one] => self.import(&one.text, one)?,
                        _ => return Err(err_at(n, "expected a module name")),
                    }
                }
            }
        }
        for s in stmts {
            match kw(s).as_str() {
                "sort" | "sorts" => {
                    for t in &s[1..] {
                        self.m.sig.add_sort(&t.text);
                    }
                }
                "mb" | "cmb" => return Err(Error::Unsupported("membership axioms".into())),
                _ => {}
            }
        }
        for s in stmts {
            if matches!(kw(s).as_str(), "subsort" | "subsorts") {
                let groups = split_top(&s[1..], |t| t.is("<"));
                if groups.len() < 2 {
                    return Err(err_at(s, "expected `<` in subsort declaration"));
                }
                for w in groups.windows(2) {
                    for a in w[0] {
                        for b in w[1] {
                            self.sort_name(a)?;
                            self.sort_name(b)?;
                            self.m.sig.add_subsort(&a.text, &b.text)?;
                        }
                    }
                }
            }
        }
        let mut pending = Vec::new();
        for s in stmts {
            match kw(s).as_str() {
                "op" | "ops" => pending.extend(self.op_decl(s)?),
                "var" | "vars" => {
                    let colon =
                        find_top(s, |t| t.is(":")).ok_or_else(|| err_at(s, "expected `:` in variable declaration"))?;
                    let sorts = self.sort_list(&s[colon + 1..])?;
                    let [sort] = sorts.as_slice() else {
                        return Err(err_at(&s[colon..], "expected one sort"));
                    };
                    for t in &s[1..colon] {
                        self.vars.insert(t.text.clone(), sort.clone());
                    }
                }
                _ => {}
            }
        }
        for p in &pending {
            self.m.sig.add_op(p.decl.clone())?;
        }
        self.m.sig.finalize()?;
        let mut with_id = false;
        for p in &pending {
            let Some(id) = &p.id_toks else { continue };
            let t = TermCtx::new(&self.m.sig, &self.vars).parse(id)?;
            if !t.is_ground() {
                return Err(err_at(id, "identity element must be ground"));
            }
            let idx = self.m.sig.ops().iter().position(|d| d == &p.decl).expect("declared above");
            self.m.sig.ops_mut()[idx].attrs.identity = Some(t);
            with_id = true;
        }
        if with_id {
            self.m.sig.finalize()?;
        }
        for s in stmts {
            match kw(s).as_str() {
                "eq" | "ceq" => {
                    let e = self.equation(s)?;
                    self.m.eqs.push(e);
                }
                "rl" | "crl" => {
                    let r = self.rule(s)?;
                    self.m.rules.push(r);
                }
                "strat" | "strats" => {
                    let ds = self.strat_decl(s)?;
                    for d in ds {
                        if !self.m.strat_decls.contains(&d) {
                            self.m.strat_decls.push(d);
                        }
                    }
                }
                _ => {}
            }
        }
        for s in stmts {
            match kw(s).as_str() {
                "sd" | "csd" => {
                    let d = self.strat_def(s)?;
                    self.m.strat_defs.push(d);
                }
                "prop" => {
                    let p = self.prop(s)?;
                    self.m.props.retain(|q| q.name != p.name);
                    self.m.props.push(p);
                }
                _ => {}
            }
        }
        for s in stmts {
            let k = kw(s);
            let known = [
                "sort", "sorts", "subsort", "subsorts", "op", "ops", "var", "vars", "eq", "ceq", "rl", "crl", "strat",
                "strats", "sd", "csd", "prop",
            ];
            if !s.is_empty() && !is_import(&k) && !known.contains(&k.as_str()) {
                return Err(s[0].error(format!("unknown declaration `{k}`")));
            }
        }
        Ok(self.m)
    }

    fn op_decl(&self, s: &[Token]) -> Result<Vec<PendingOp>> {
        let colon = find_top(&s[1..], |t| t.is(":")).map(|i| i + 1);
        // bracket operator names such as `[_,_,_]` contain depth-changing tokens
        let colon = colon.or_else(|| s.iter().position(|t| t.is(":")));
        let colon = colon.ok_or_else(|| err_at(s, "expected `:` in operator declaration"))?;
        let names: Vec<String> = if s[0].is("ops") {
            s[1..colon].iter().map(|t| t.text.clone()).collect()
        } else {
            vec![s[1..colon].iter().map(|t| t.text.as_str()).collect::<String>()]
        };
        if names.is_empty() || names.iter().any(|n| n.is_empty()) {
            return Err(err_at(s, "missing operator name"));
        }
        let rest = &s[colon + 1..];
        let arrow = find_top(rest, |t| t.is("->") || t.is("~>")).ok_or_else(|| err_at(s, "expected `->`"))?;
        let args = self.sort_list(&rest[..arrow])?;
        let (result_toks, attr_toks) = split_attrs(&rest[arrow + 1..], OP_ATTRS);
        let result = self.sort_list(result_toks)?;
        let [result] = result.as_slice() else {
            return Err(err_at(&rest[arrow..], "expected one result sort"));
        };
        let (attrs, id_toks) = parse_op_attrs(attr_toks, args.len())?;
        if (attrs.assoc || attrs.comm) && args.len() != 2 {
            return Err(err_at(s, "assoc and comm operators must be binary"));
        }
        Ok(names
            .into_iter()
            .map(|n| PendingOp {
                decl: OpDecl { name: sym(&n), args: args.clone(), result: result.clone(), attrs: attrs.clone() },
                id_toks: id_toks.clone(),
            })
            .collect())
    }

    fn ctx(&self) -> TermCtx<'_> {
        TermCtx::new(&self.m.sig, &self.vars)
    }

    /// Skips an optional `[label] :` prefix; returns the label and the rest.
    fn label<'t>(&self, s: &'t [Token]) -> Result<(Option<Sym>, &'t [Token])> {
        if s.first().is_some_and(|t| t.is("[")) {
            let close = matching_close(s, 0)?;
            if s.get(close + 1).is_some_and(|t| t.is(":")) {
                let name: String = s[1..close].iter().map(|t| t.text.as_str()).collect();
                return Ok((Some(sym(&name)), &s[close + 2..]));
            }
        }
        Ok((None, s))
    }

    fn equation(&self, s: &[Token]) -> Result<Equation> {
        let conditional = s[0].is("ceq");
        let (_, body) = self.label(&s[1..])?;
        let (body, attrs) = split_attrs(body, STMT_ATTRS);
        let owise = attrs.iter().any(|t| t.is("owise") || t.is("otherwise"));
        let eq = find_top(body, |t| t.is("=")).ok_or_else(|| err_at(s, "expected `=` in equation"))?;
        let ctx = self.ctx();
        let lhs = ctx.parse(&body[..eq])?;
        let rest = &body[eq + 1..];
        let (rhs_toks, cond) = match (conditional, find_top(rest, |t| t.is("if"))) {
            (true, Some(i)) => (&rest[..i], parse_condition(&rest[i + 1..], &ctx)?),
            (true, None) => return Err(err_at(s, "conditional equation without `if`")),
            (false, Some(i)) => return Err(rest[i].error("use `ceq` for conditional equations")),
            (false, None) => (rest, vec![]),
        };
        let rhs = ctx.parse(rhs_toks)?;
        if lhs.is_var() {
            return Err(err_at(s, "equation left-hand side cannot be a variable"));
        }
        check_vars(&lhs, &rhs, &cond, "equation")?;
        Ok(Equation { lhs, rhs, cond, owise })
    }

    fn rule(&self, s: &[Token]) -> Result<Rule> {
        let conditional = s[0].is("crl");
        let (label, body) = self.label(&s[1..])?;
        let (body, attrs) = split_attrs(body, STMT_ATTRS);
        let nonexec = attrs.iter().any(|t| t.is("nonexec"));
        let label = label.or_else(|| {
            let i = attrs.iter().position(|t| t.is("label"))?;
            attrs.get(i + 1).map(|t| sym(&t.text))
        });
        let arrow = find_top(body, |t| t.is("=>")).ok_or_else(|| err_at(s, "expected `=>` in rule"))?;
        let ctx = self.ctx();
        let lhs = ctx.parse(&body[..arrow])?;
        let rest = &body[arrow + 1..];
        let (rhs_toks, cond) = match (conditional, find_top(rest, |t| t.is("if"))) {
            (true, Some(i)) => (&rest[..i], parse_condition(&rest[i + 1..], &ctx)?),
            (true, None) => return Err(err_at(s, "conditional rule without `if`")),
            (false, Some(i)) => return Err(rest[i].error("use `crl` for conditional rules")),
            (false, None) => (rest, vec![]),
        };
        let rhs = ctx.parse(rhs_toks)?;
        if !ctx.sig.same_kind(&ctx.sig.least_sort(&lhs)?, &ctx.sig.least_sort(&rhs)?) {
            return Err(err_at(s, "rule sides have different kinds"));
        }
        if !nonexec {
            check_vars(&lhs, &rhs, &cond, "rule (declare it nonexec)")?;
        }
        Ok(Rule { label, lhs, rhs, cond, nonexec })
    }

    fn strat_sort(&self, t: &Token) -> Result<Sym> {
        if t.is(ANY_TERM) {
            Ok(sym(ANY_TERM))
        } else {
            self.sort_name(t)
        }
    }

    fn strat_decl(&self, s: &[Token]) -> Result<Vec<StratDecl>> {
        let (s, _) = split_attrs(s, &["memo", "metadata"]);
        let at = find_top(s, |t| t.is("@")).ok_or_else(|| err_at(s, "expected `@` in strategy declaration"))?;
        let subject = match &s[at + 1..] {
            [t] => self.strat_sort(t)?,
            other => return Err(err_at(other, "expected the subject sort after `@`")),
        };
        let head = &s[1..at];
        let (names, args) = match find_top(head, |t| t.is(":")) {
            Some(c) => (&head[..c], head[c + 1..].iter().map(|t| self.strat_sort(t)).collect::<Result<Vec<_>>>()?),
            None => (head, vec![]),
        };
        if names.is_empty() || (s[0].is("strat") && names.len() != 1) {
            return Err(err_at(s, "expected one strategy name"));
        }
        Ok(names
            .iter()
            .map(|n| StratDecl { name: sym(&n.text), args: args.clone(), subject: subject.clone() })
            .collect())
    }

    fn strat_def(&self, s: &[Token]) -> Result<StratDef> {
        let conditional = s[0].is("csd");
        let (s, _) = split_attrs(s, &["label", "metadata", "nonexec"]);
        let def = find_top(s, |t| t.is(":=")).ok_or_else(|| err_at(s, "expected `:=` in strategy definition"))?;
        let head = &s[1..def];
        let name = head.first().ok_or_else(|| err_at(s, "missing strategy name"))?;
        let ctx = self.ctx();
        let lhs = match head.len() {
            1 => vec![],
            _ if head[1].is("(") && matching_close(head, 1)? == head.len() - 1 => {
                let inner = &head[2..head.len() - 1];
                if inner.is_empty() {
                    vec![]
                } else {
                    split_top(inner, |t| t.is(",")).into_iter().map(|a| ctx.parse(a)).collect::<Result<Vec<_>>>()?
                }
            }
            _ => return Err(err_at(&head[1..], "malformed strategy definition head")),
        };
        let decl = self
            .m
            .strat_decl(&name.text, lhs.len())
            .ok_or_else(|| Error::Undeclared { kind: "strategy", name: format!("{}/{}", name.text, lhs.len()) })?;
        for (a, sort) in lhs.iter().zip(&decl.args) {
            let ls = ctx.sig.least_sort(a)?;
            if &**sort != ANY_TERM && !ctx.sig.same_kind(&ls, sort) {
                return Err(name.error(format!("argument of sort {ls} does not fit {sort}")));
            }
        }
        let rest = &s[def + 1..];
        let (body, cond) = match (conditional, find_top(rest, |t| t.is("if"))) {
            (true, Some(i)) => (&rest[..i], parse_condition(&rest[i + 1..], &ctx)?),
            (true, None) => return Err(err_at(s, "conditional definition without `if`")),
            (false, _) => (rest, vec![]),
        };
        let body = parse_strategy(body, &self.m, &self.vars, self.store.extended)?;
        Ok(StratDef { name: sym(&name.text), lhs, body, cond })
    }

    fn prop(&self, s: &[Token]) -> Result<PropDef> {
        let def = find_top(s, |t| t.is(":=")).ok_or_else(|| err_at(s, "expected `:=` in proposition"))?;
        let [name] = &s[1..def] else {
            return Err(err_at(s, "expected one proposition name"));
        };
        let mut ctx = self.ctx();
        ctx.placeholder = true;
        let term = ctx.parse(&s[def + 1..])?;
        Ok(PropDef { name: sym(&name.text), term })
    }
}
