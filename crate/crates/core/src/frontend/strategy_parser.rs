//! Strategy expressions. Binding strength from loosest to tightest:
//! `α ? β : γ`, `or-else`, `|`, `;`, postfix `*` and `!`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frontend::lexer::{err_at, find_top, matching_close, split_top, tokenize, Token};
use crate::frontend::parser::parse_condition;
use crate::frontend::term_parser::TermCtx;
use crate::kernel::{sym, Signature, Sym, Term, Var};
use crate::module::{CondFrag, ModuleDef};
use crate::strategy::{StratRef, Strategy};

/// Parses a strategy occupying the whole token slice. `vars` are the
/// variables in scope (those of the enclosing module for definitions);
/// `extended` enables congruence and traversal operators.
pub fn parse_strategy(toks: &[Token], m: &ModuleDef, vars: &HashMap<String, Sym>, extended: bool) -> Result<StratRef> {
    StratParser { m, vars, extended }.strat(toks)
}

/// Parses strategy text with only inline `X:Sort` variables.
pub fn parse_strategy_str(src: &str, m: &ModuleDef, extended: bool) -> Result<StratRef> {
    let vars = HashMap::new();
    parse_strategy(&tokenize(src), m, &vars, extended)
}

/// Whether some declaration of `name`/`arity` is a constructor.
pub fn is_ctor(sig: &Signature, name: &str, arity: usize) -> bool {
    sig.family(name, arity).is_some_and(|f| f.decls.iter().any(|&i| sig.ops()[i].attrs.ctor))
}

const UNARY: &[&str] = &["one", "try", "not", "test", "gt-all", "gt-one", "gt-some"];

struct StratParser<'a> {
    m: &'a ModuleDef,
    vars: &'a HashMap<String, Sym>,
    extended: bool,
}

fn at_depth0(toks: &[Token], mut f: impl FnMut(usize, &Token) -> bool) -> Option<usize> {
    let mut depth = 0i32;
    for (i, t) in toks.iter().enumerate() {
        if depth == 0 && f(i, t) {
            return Some(i);
        }
        match t.text.as_str() {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth -= 1,
            _ => {}
        }
    }
    None
}

impl StratParser<'_> {
    fn ctx(&self) -> TermCtx<'_> {
        TermCtx::new(&self.m.sig, self.vars)
    }

    fn strat(&self, toks: &[Token]) -> Result<StratRef> {
        if toks.is_empty() {
            return Err(Error::Syntax { line: 0, col: 0, msg: "expected a strategy".into() });
        }
        if let Some(q) = find_top(toks, |t| t.is("?")) {
            let rest = &toks[q + 1..];
            let mut nest = 0;
            let colon = at_depth0(rest, |_, t| {
                if t.is("?") {
                    nest += 1;
                } else if t.is(":") {
                    if nest == 0 {
                        return true;
                    }
                    nest -= 1;
                }
                false
            })
            .ok_or_else(|| toks[q].error("conditional strategy is missing `:`"))?;
            let c = self.strat(&toks[..q])?;
            let yes = self.strat(&rest[..colon])?;
            let no = self.strat(&rest[colon + 1..])?;
            return Ok(Arc::new(Strategy::Cond(c, yes, no)));
        }
        for (tok, mk) in [
            ("or-else", Strategy::OrElse as fn(StratRef, StratRef) -> Strategy),
            ("|", Strategy::Choice),
            (";", Strategy::Seq),
        ] {
            if let Some(i) = find_top(toks, |t| t.is(tok)) {
                let a = self.strat(&toks[..i])?;
                let b = self.strat(&toks[i + 1..])?;
                return Ok(Arc::new(mk(a, b)));
            }
        }
        let n = toks.len();
        if n > 1 {
            match toks[n - 1].text.as_str() {
                "*" => return Ok(Arc::new(Strategy::Star(self.strat(&toks[..n - 1])?))),
                "!" => return Ok(Arc::new(Strategy::Bang(self.strat(&toks[..n - 1])?))),
                "+" => {
                    let a = self.strat(&toks[..n - 1])?;
                    return Ok(Arc::new(Strategy::Seq(a.clone(), Arc::new(Strategy::Star(a)))));
                }
                _ => {}
            }
        }
        self.atom(toks)
    }

    /// Contents of `kw ( ... )` when the group spans the rest of the slice.
    fn group<'t>(&self, toks: &'t [Token]) -> Option<&'t [Token]> {
        if toks.len() >= 3 && toks[1].is("(") && matching_close(toks, 1).ok()? == toks.len() - 1 {
            Some(&toks[2..toks.len() - 1])
        } else {
            None
        }
    }

    fn atom(&self, toks: &[Token]) -> Result<StratRef> {
        let first = &toks[0];
        if first.is("(") && matching_close(toks, 0)? == toks.len() - 1 {
            return self.strat(&toks[1..toks.len() - 1]);
        }
        let kw = first.text.as_str();
        if toks.len() == 1 {
            match kw {
                "idle" => return Ok(Arc::new(Strategy::Idle)),
                "fail" => return Ok(Arc::new(Strategy::Fail)),
                "all" => return Ok(Arc::new(Strategy::All)),
                _ => {}
            }
        }
        match kw {
            "match" | "xmatch" | "amatch" => return self.match_(toks),
            "matchrew" | "xmatchrew" | "amatchrew" => return self.matchrew(toks),
            "top" => {
                let inner = self.group(toks).ok_or_else(|| first.error("expected `top(<rule application>)`"))?;
                let s = self.strat(inner)?;
                return match &*s {
                    Strategy::Apply { label, init, .. } => {
                        Ok(Arc::new(Strategy::Apply { label: label.clone(), init: init.clone(), top: true }))
                    }
                    _ => Err(first.error("`top` applies only to a rule application")),
                };
            }
            _ => {}
        }
        if UNARY.contains(&kw) {
            if let Some(inner) = self.group(toks) {
                if kw.starts_with("gt-") && !self.extended {
                    return Err(first.error(format!("`{kw}` needs the extended strategy language")));
                }
                let a = self.strat(inner)?;
                return Ok(Arc::new(match kw {
                    "one" => Strategy::One(a),
                    "try" => Strategy::Try(a),
                    "not" => Strategy::Not(a),
                    "test" => Strategy::Test(a),
                    "gt-all" => Strategy::GtAll(a),
                    "gt-one" => Strategy::GtOne(a),
                    _ => Strategy::GtSome(a),
                }));
            }
        }
        if toks.len() >= 2 && toks[1].is("[") && matching_close(toks, 1)? == toks.len() - 1 {
            return self.apply(first, &toks[2..toks.len() - 1]);
        }
        if let Some(inner) = self.group(toks) {
            return self.call_or_congruence(first, inner);
        }
        if toks.len() == 1 {
            if self.m.strat_decl(kw, 0).is_some() {
                return Ok(Arc::new(Strategy::Call { name: sym(kw), args: vec![] }));
            }
            if self.m.has_label(kw) {
                return Ok(Arc::new(Strategy::Apply { label: sym(kw), init: vec![], top: false }));
            }
            if self.extended && is_ctor(&self.m.sig, kw, 0) {
                return Ok(Arc::new(Strategy::Congruence { op: sym(kw), args: vec![] }));
            }
            return Err(first.error(format!("unknown strategy, rule label or constructor `{kw}`")));
        }
        Err(err_at(&toks[1..], format!("unexpected `{}` in strategy", toks[1].text)))
    }

    fn apply(&self, label: &Token, inner: &[Token]) -> Result<StratRef> {
        if !self.m.has_label(&label.text) {
            return Err(Error::Undeclared { kind: "rule label", name: label.text.clone() });
        }
        let mut init = Vec::new();
        if !inner.is_empty() {
            let ctx = self.ctx();
            for part in split_top(inner, |t| t.is(",")) {
                let arrow = find_top(part, |t| t.is("<-")).ok_or_else(|| err_at(part, "expected `X <- term`"))?;
                let [v] = &part[..arrow] else {
                    return Err(err_at(part, "expected a variable name before `<-`"));
                };
                let name = v.text.split(':').next().unwrap_or_default().to_string();
                let known = self.m.rules_labeled(&label.text).any(|r| r.vars().iter().any(|x| *x.name == *name));
                if !known {
                    return Err(v.error(format!("rule `{}` has no variable `{name}`", label.text)));
                }
                init.push((sym(&name), ctx.parse(&part[arrow + 1..])?));
            }
        }
        Ok(Arc::new(Strategy::Apply { label: sym(&label.text), init, top: false }))
    }

    fn call_or_congruence(&self, head: &Token, inner: &[Token]) -> Result<StratRef> {
        let parts = if inner.is_empty() { vec![] } else { split_top(inner, |t| t.is(",")) };
        let n = parts.len();
        let name = head.text.as_str();
        if self.m.strat_decl(name, n).is_some() {
            let ctx = self.ctx();
            let args = parts.into_iter().map(|p| ctx.parse(p)).collect::<Result<Vec<_>>>()?;
            return Ok(Arc::new(Strategy::Call { name: sym(name), args }));
        }
        if self.extended {
            let candidates = [name.to_string(), format!("{name}_"), format!("_{name}_")];
            if let Some(op) = candidates.iter().find(|c| is_ctor(&self.m.sig, c, n)) {
                let args = parts.into_iter().map(|p| self.strat(p)).collect::<Result<Vec<_>>>()?;
                return Ok(Arc::new(Strategy::Congruence { op: sym(op), args }));
            }
            if self.m.sig.families_named(name).any(|f| f.decls.iter().any(|&i| self.m.sig.ops()[i].attrs.ctor)) {
                return Err(head.error(format!("congruence `{name}` used with {n} arguments")));
            }
        }
        if self.m.has_strat_named(name) {
            return Err(head.error(format!("strategy `{name}` is not declared with {n} arguments")));
        }
        Err(Error::Undeclared { kind: "strategy", name: format!("{name}/{n}") })
    }

    /// Splits `P [s.t. C]` into pattern and condition.
    fn pattern_cond(&self, toks: &[Token]) -> Result<(Term, Vec<CondFrag>)> {
        let ctx = self.ctx();
        match find_top(toks, |t| t.is("s.t.")) {
            Some(i) => Ok((ctx.parse(&toks[..i])?, parse_condition(&toks[i + 1..], &ctx)?)),
            None => Ok((ctx.parse(toks)?, vec![])),
        }
    }

    fn match_(&self, toks: &[Token]) -> Result<StratRef> {
        let (pattern, cond) = self.pattern_cond(&toks[1..])?;
        Ok(Arc::new(Strategy::Match { anywhere: toks[0].is("amatch"), pattern, cond }))
    }

    fn matchrew(&self, toks: &[Token]) -> Result<StratRef> {
        let by = find_top(toks, |t| t.is("by")).ok_or_else(|| toks[0].error("matchrew is missing `by`"))?;
        let (pattern, cond) = self.pattern_cond(&toks[1..by])?;
        let pvars = pattern.vars();
        let mut pieces: Vec<Vec<Token>> = Vec::new();
        for part in split_top(&toks[by + 1..], |t| t.is(",")) {
            let starts_slot = part.len() >= 2 && part[1].is("using");
            match pieces.last_mut() {
                Some(prev) if !starts_slot => {
                    prev.push(Token { text: ",".into(), line: part.first().map_or(0, |t| t.line), col: 0 });
                    prev.extend(part.iter().cloned());
                }
                _ => pieces.push(part.to_vec()),
            }
        }
        let mut slots: Vec<(Var, StratRef)> = Vec::new();
        for p in &pieces {
            if p.len() < 3 || !p[1].is("using") {
                return Err(err_at(p, "expected `X using <strategy>`"));
            }
            let text = &p[0].text;
            let (name, sort) = match text.rfind(':') {
                Some(i) if i > 0 => (&text[..i], Some(&text[i + 1..])),
                _ => (text.as_str(), None),
            };
            let v = pvars
                .iter()
                .find(|v| &*v.name == name && sort.is_none_or(|s| &*v.sort == s))
                .ok_or_else(|| p[0].error(format!("`{text}` is not a variable of the matchrew pattern")))?;
            if slots.iter().any(|(w, _)| w == v) {
                return Err(p[0].error(format!("variable `{text}` used in two slots")));
            }
            slots.push((v.clone(), self.strat(&p[2..])?));
        }
        Ok(Arc::new(Strategy::MatchRew { anywhere: toks[0].is("amatchrew"), pattern, cond, slots }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parser::ModuleStore;
    use crate::frontend::printer;

    const FOO: &str = "mod FOO is
  sort Foo .
  ops a b : -> Foo [ctor] .
  op f : Foo Foo -> Foo [ctor] .
  vars X Y : Foo .
  rl [swap] : f(X, Y) => f(Y, X) .
  rl [next] : a => b .
endm";

    fn foo() -> Arc<ModuleDef> {
        let mut store = ModuleStore::new();
        store.load_str(FOO).unwrap().pop().unwrap()
    }

    #[test]
    fn congruence_with_traversal() {
        let m = foo();
        let s = parse_strategy_str("f(swap, gt-all(next))", &m, true).unwrap();
        let Strategy::Congruence { op, args } = &*s else { panic!("{s:?}") };
        assert_eq!(&**op, "f");
        assert!(matches!(&*args[0], Strategy::Apply { label, .. } if &**label == "swap"));
        assert!(matches!(&*args[1], Strategy::GtAll(_)));
        assert!(parse_strategy_str("f(swap, gt-all(next))", &m, false).is_err());
    }

    #[test]
    fn precedence_and_printing() {
        let m = foo();
        let src = "swap ; next * | idle ? fail : all !";
        let s = parse_strategy_str(src, &m, true).unwrap();
        assert!(matches!(&*s, Strategy::Cond(..)));
        let printed = printer::strategy(&m.sig, &s);
        assert_eq!(parse_strategy_str(&printed, &m, true).unwrap(), s);
    }

    #[test]
    fn matchrew_slots() {
        let m = foo();
        let s = parse_strategy_str(
            "matchrew f(X:Foo, Y:Foo) s.t. X:Foo = a by X:Foo using next, Y:Foo using idle",
            &m,
            true,
        )
        .unwrap();
        let Strategy::MatchRew { slots, cond, .. } = &*s else { panic!() };
        assert_eq!(slots.len(), 2);
        assert_eq!(cond.len(), 1);
        let printed = printer::strategy(&m.sig, &s);
        assert_eq!(parse_strategy_str(&printed, &m, true).unwrap(), s);
    }

    #[test]
    fn unknown_names_are_errors() {
        let m = foo();
        assert!(parse_strategy_str("nope", &m, true).is_err());
        assert!(parse_strategy_str("swap[Z <- a]", &m, true).is_err());
        assert!(parse_strategy_str("top(idle)", &m, true).is_err());
        assert!(parse_strategy_str("f(idle)", &m, true).is_err());
    }
}
