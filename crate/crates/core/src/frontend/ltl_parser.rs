//! Temporal formulas. Unary operators bind tightest, then `/\`, `\/`, `->`
//! and finally `U`/`R`.

use crate::error::{Error, Result};
use crate::frontend::lexer::{err_at, matching_close, tokenize, Token};
use crate::ltl::Ltl;
use crate::module::ModuleDef;

fn binary(tok: &str) -> Option<u32> {
    match tok {
        "/\\" => Some(55),
        "\\/" => Some(59),
        "->" => Some(61),
        "U" | "R" => Some(63),
        _ => None,
    }
}

const UNARY_PREC: u32 = 53;

/// Parses a formula whose propositions are declared in `m`.
pub fn parse_ltl(src: &str, m: &ModuleDef) -> Result<Ltl> {
    parse_ltl_tokens(&tokenize(src), m)
}

pub fn parse_ltl_tokens(toks: &[Token], m: &ModuleDef) -> Result<Ltl> {
    if toks.is_empty() {
        return Err(Error::Syntax { line: 0, col: 0, msg: "expected a formula".into() });
    }
    let mut p = P { toks, pos: 0, m };
    let f = p.expr(u32::MAX)?;
    if p.pos < toks.len() {
        return Err(toks[p.pos].error(format!("unexpected `{}` in formula", toks[p.pos].text)));
    }
    Ok(f)
}

struct P<'a> {
    toks: &'a [Token],
    pos: usize,
    m: &'a ModuleDef,
}

impl P<'_> {
    fn expr(&mut self, max: u32) -> Result<Ltl> {
        let mut left = self.prefix()?;
        while let Some(t) = self.toks.get(self.pos) {
            let Some(p) = binary(&t.text) else { break };
            if p > max {
                break;
            }
            let op = t.text.clone();
            self.pos += 1;
            // right associative
            let right = self.expr(p)?;
            left = match op.as_str() {
                "/\\" => Ltl::and(left, right),
                "\\/" => Ltl::or(left, right),
                "->" => Ltl::implies(left, right),
                "U" => Ltl::until(left, right),
                _ => Ltl::release(left, right),
            };
        }
        Ok(left)
    }

    fn prefix(&mut self) -> Result<Ltl> {
        let Some(t) = self.toks.get(self.pos) else {
            return Err(err_at(&self.toks[self.toks.len() - 1..], "formula ends unexpectedly"));
        };
        self.pos += 1;
        match t.text.as_str() {
            "(" => {
                let close = matching_close(self.toks, self.pos - 1)?;
                let f = parse_ltl_tokens(&self.toks[self.pos..close], self.m)?;
                self.pos = close + 1;
                Ok(f)
            }
            "[" => {
                if !self.toks.get(self.pos).is_some_and(|x| x.is("]")) {
                    return Err(t.error("expected `[]`"));
                }
                self.pos += 1;
                Ok(Ltl::always(self.expr(UNARY_PREC)?))
            }
            "<>" => Ok(Ltl::eventually(self.expr(UNARY_PREC)?)),
            "~" => Ok(Ltl::not(self.expr(UNARY_PREC)?)),
            "O" => Ok(Ltl::next(self.expr(UNARY_PREC)?)),
            "true" | "True" => Ok(Ltl::True),
            "false" | "False" => Ok(Ltl::False),
            name => {
                if self.m.prop(name).is_none() {
                    return Err(Error::Undeclared { kind: "proposition", name: name.to_string() });
                }
                Ok(Ltl::prop(name))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parser::ModuleStore;

    fn module() -> std::sync::Arc<ModuleDef> {
        let mut s = ModuleStore::new();
        let src = "mod M is sort S . op a : -> S . prop Owins := true . prop Xwins := false . endm";
        s.load_str(src).unwrap().pop().unwrap()
    }

    #[test]
    fn fixture_formulas() {
        let m = module();
        let f = parse_ltl("[] (~ Owins /\\ ~ Xwins)", &m).unwrap();
        assert_eq!(f, Ltl::always(Ltl::and(Ltl::not(Ltl::prop("Owins")), Ltl::not(Ltl::prop("Xwins")))));
        assert_eq!(parse_ltl("<> Xwins", &m).unwrap(), Ltl::eventually(Ltl::prop("Xwins")));
        assert_eq!(parse_ltl("true", &m).unwrap(), Ltl::True);
        assert_eq!(parse_ltl("[] ~ Owins", &m).unwrap(), Ltl::always(Ltl::not(Ltl::prop("Owins"))));
    }

    #[test]
    fn precedence() {
        let m = module();
        let f = parse_ltl("Owins /\\ Xwins \\/ Owins -> O Xwins", &m).unwrap();
        let want = Ltl::implies(
            Ltl::or(Ltl::and(Ltl::prop("Owins"), Ltl::prop("Xwins")), Ltl::prop("Owins")),
            Ltl::next(Ltl::prop("Xwins")),
        );
        assert_eq!(f, want);
        assert_eq!(parse_ltl(&f.to_string(), &m).unwrap(), f);
    }

    #[test]
    fn undeclared_props() {
        let m = module();
        assert!(matches!(parse_ltl("[] nope", &m), Err(Error::Undeclared { .. })));
    }
}
