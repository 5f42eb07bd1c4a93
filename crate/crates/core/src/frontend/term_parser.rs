//! Mixfix term parsing for the supported operator shapes: prefix
//! applications and constants, infix `_tok_`, unary prefix `tok_`,
//! juxtaposition `__` and bracket forms such as `[_,_,_]`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::frontend::lexer::{err_at, matching_close, split_top, Token};
use crate::kernel::{sym, Mixfix, Signature, Sym, Term, UNIVERSAL};
use crate::module::PLACEHOLDER;

pub const DEFAULT_PREC: u32 = 41;
const MAX_PREC: u32 = u32::MAX;

/// Names and scoping information needed to read terms of one module.
pub struct TermCtx<'a> {
    pub sig: &'a Signature,
    pub vars: &'a HashMap<String, Sym>,
    pub placeholder: bool,
}

impl<'a> TermCtx<'a> {
    pub fn new(sig: &'a Signature, vars: &'a HashMap<String, Sym>) -> TermCtx<'a> {
        TermCtx { sig, vars, placeholder: false }
    }

    /// Parses and canonicalizes a term occupying the whole token slice.
    pub fn parse(&self, toks: &[Token]) -> Result<Term> {
        let raw = self.parse_raw(toks)?;
        self.sig.canonicalize(&raw).map_err(|e| match e {
            Error::Sort(m) => err_at(toks, format!("sort error: {m}")),
            other => other,
        })
    }

    pub fn parse_raw(&self, toks: &[Token]) -> Result<Term> {
        if toks.is_empty() {
            return Err(Error::Syntax { line: 0, col: 0, msg: "expected a term".into() });
        }
        let mut p = Parser { ctx: self, toks, pos: 0 };
        let (t, _) = p.expr(MAX_PREC)?;
        if p.pos < toks.len() {
            return Err(toks[p.pos].error(format!("unexpected `{}` in term", toks[p.pos].text)));
        }
        Ok(t)
    }

    fn infix(&self, tok: &str) -> Option<u32> {
        let name = format!("_{tok}_");
        let f = self.sig.family(&name, 2)?;
        (f.mixfix == Mixfix::Infix(tok.to_string())).then(|| f.attrs.prec.unwrap_or(DEFAULT_PREC))
    }

    fn unary(&self, tok: &str) -> Option<u32> {
        let name = format!("{tok}_");
        let f = self.sig.family(&name, 1)?;
        (f.mixfix == Mixfix::UnaryPrefix(tok.to_string())).then(|| f.attrs.prec.unwrap_or(DEFAULT_PREC))
    }

    fn juxtaposition(&self) -> Option<u32> {
        self.sig.family("__", 2).map(|f| f.attrs.prec.unwrap_or(DEFAULT_PREC))
    }

    fn inline_var(&self, text: &str) -> Option<Term> {
        let i = text.rfind(':')?;
        let (name, sort) = (&text[..i], &text[i + 1..]);
        if name.is_empty() || sort.is_empty() || name.contains(':') || !self.sig.has_sort(sort) {
            return None;
        }
        Some(Term::new_var(name, sort))
    }
}

struct Parser<'c, 'a> {
    ctx: &'c TermCtx<'a>,
    toks: &'c [Token],
    pos: usize,
}

fn closes(t: &Token) -> bool {
    matches!(t.text.as_str(), ")" | "]" | "}" | ",")
}

impl Parser<'_, '_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    /// Term whose top precedence does not exceed `max`; returns it with its
    /// precedence.
    fn expr(&mut self, max: u32) -> Result<(Term, u32)> {
        let (mut left, mut lp) = self.prefix()?;
        loop {
            let Some(tok) = self.peek() else { break };
            if closes(tok) {
                break;
            }
            if let Some(p) = self.ctx.infix(&tok.text) {
                if p > max {
                    break;
                }
                let name = format!("_{}_", tok.text);
                self.pos += 1;
                if self.peek().is_none() {
                    return Err(err_at(&self.toks[self.pos - 1..], "missing right operand"));
                }
                let (right, _) = self.expr(p)?;
                left = Term::app(sym(&name), vec![left, right]);
                lp = p;
                continue;
            }
            match self.ctx.juxtaposition() {
                Some(p) if p <= max => {
                    let (right, _) = self.expr(p)?;
                    left = Term::app(sym("__"), vec![left, right]);
                    lp = p;
                }
                _ => break,
            }
        }
        Ok((left, lp))
    }

    fn args(&mut self, open: usize) -> Result<Vec<Term>> {
        let close = matching_close(self.toks, open)?;
        let inner = &self.toks[open + 1..close];
        self.pos = close + 1;
        if inner.is_empty() {
            return Ok(vec![]);
        }
        split_top(inner, |t| t.is(",")).into_iter().map(|part| self.ctx.parse_raw(part)).collect()
    }

    fn prefix(&mut self) -> Result<(Term, u32)> {
        let Some(tok) = self.peek().cloned() else {
            return Err(err_at(&self.toks[self.toks.len().saturating_sub(1)..], "unexpected end of term"));
        };
        let sig = self.ctx.sig;
        match tok.text.as_str() {
            "(" => {
                let close = matching_close(self.toks, self.pos)?;
                let t = self.ctx.parse_raw(&self.toks[self.pos + 1..close])?;
                self.pos = close + 1;
                return Ok((t, 0));
            }
            "[" => {
                let args = self.args(self.pos)?;
                let name = format!("[{}]", vec!["_"; args.len()].join(","));
                if sig.family(&name, args.len()).is_none() {
                    return Err(tok.error(format!("no bracket operator `{name}`")));
                }
                return Ok((Term::app(sym(&name), args), 0));
            }
            ")" | "]" | "," | "}" => return Err(tok.error(format!("unexpected `{}`", tok.text))),
            _ => {}
        }
        let text = tok.text.as_str();
        if text.bytes().all(|b| b.is_ascii_digit()) {
            if !sig.has_numerals() {
                return Err(tok.error("numerals need the NAT module"));
            }
            let n: u64 = text.parse().map_err(|_| tok.error("numeral out of range"))?;
            self.pos += 1;
            return Ok((Term::numeral(n), 0));
        }
        if self.ctx.placeholder && text == PLACEHOLDER {
            self.pos += 1;
            return Ok((Term::new_var(PLACEHOLDER, UNIVERSAL), 0));
        }
        if let Some(v) = self.ctx.inline_var(text) {
            self.pos += 1;
            return Ok((v, 0));
        }
        let next_is_paren = self.toks.get(self.pos + 1).is_some_and(|t| t.is("("));
        if next_is_paren {
            let args = self.args(self.pos + 1)?;
            let n = args.len();
            let candidates = [text.to_string(), format!("{text}_"), format!("_{text}_")];
            for name in candidates {
                if sig.family(&name, n).is_some() {
                    return Ok((Term::app(sym(&name), args), 0));
                }
            }
            return Err(Error::Undeclared { kind: "operator", name: format!("{text}/{n}") });
        }
        if let Some(sort) = self.ctx.vars.get(text) {
            self.pos += 1;
            return Ok((Term::var(crate::kernel::Var { name: sym(text), sort: sort.clone() }), 0));
        }
        if let Some(p) = self.ctx.unary(text) {
            self.pos += 1;
            let (arg, _) = self.expr(p)?;
            return Ok((Term::app(sym(&format!("{text}_")), vec![arg]), p));
        }
        if sig.family(text, 0).is_some() {
            self.pos += 1;
            return Ok((Term::constant(text), 0));
        }
        Err(tok.error(format!("unknown identifier `{text}`")))
    }
}
