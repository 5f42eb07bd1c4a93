use crate::frontend::term_parser::DEFAULT_PREC;
use crate::kernel::{Mixfix, Signature, Term, TermKind};
use std::sync::Arc;

use crate::module::{CondFrag, ModuleDef, ModuleKind, PLACEHOLDER};
use crate::strategy::Strategy;

fn shape(sig: &Signature, t: &Term) -> Option<(Mixfix, u32)> {
    let TermKind::App { op, args } = t.kind() else { return None };
    if t.as_numeral().is_some() {
        return None;
    }
    let f = sig.family(op, args.len())?;
    let prec = f.attrs.prec.unwrap_or(DEFAULT_PREC);
    match &f.mixfix {
        Mixfix::Infix(_) | Mixfix::Juxtaposition | Mixfix::UnaryPrefix(_) => Some((f.mixfix.clone(), prec)),
        _ => None,
    }
}

fn prec_of(sig: &Signature, t: &Term) -> u32 {
    shape(sig, t).map(|(_, p)| p).unwrap_or(0)
}

/// Renders a term in mixfix notation.
pub fn term(sig: &Signature, t: &Term) -> String {
    let mut out = String::new();
    write_term(sig, t, u32::MAX, &mut out);
    out
}

fn write_term(sig: &Signature, t: &Term, max: u32, out: &mut String) {
    if prec_of(sig, t) > max {
        out.push('(');
        write_term(sig, t, u32::MAX, out);
        out.push(')');
        return;
    }
    let (op, args) = match t.kind() {
        TermKind::Var(v) => {
            if &*v.name == PLACEHOLDER {
                out.push_str(PLACEHOLDER);
            } else {
                out.push_str(&format!("{}:{}", v.name, v.sort));
            }
            return;
        }
        TermKind::App { op, args } => (op, args),
    };
    if args.is_empty() {
        out.push_str(op);
        return;
    }
    match shape(sig, t) {
        Some((Mixfix::Infix(tok), p)) => {
            let n = args.len();
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                    out.push_str(&tok);
                    out.push(' ');
                }
                let bound = if i + 1 == n && n == 2 { p } else { p.saturating_sub(1) };
                write_term(sig, a, bound, out);
            }
        }
        Some((Mixfix::Juxtaposition, p)) => {
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write_term(sig, a, p.saturating_sub(1), out);
            }
        }
        Some((Mixfix::UnaryPrefix(tok), p)) => {
            out.push_str(&tok);
            out.push(' ');
            write_term(sig, &args[0], p, out);
        }
        _ => {
            let bracket = sig.family(op, args.len()).map(|f| matches!(f.mixfix, Mixfix::Bracket(_))).unwrap_or(false);
            if bracket {
                out.push('[');
            } else {
                out.push_str(op);
                out.push('(');
            }
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_term(sig, a, u32::MAX, out);
            }
            out.push(if bracket { ']' } else { ')' });
        }
    }
}

/// Term as it appears inside strategy syntax: compound mixfix terms are
/// parenthesized so that strategy operators never bind into them.
fn embedded(sig: &Signature, t: &Term) -> String {
    if prec_of(sig, t) > 0 {
        format!("({})", term(sig, t))
    } else {
        term(sig, t)
    }
}

pub fn condition(sig: &Signature, frags: &[CondFrag]) -> String {
    frags
        .iter()
        .map(|f| match f {
            CondFrag::Eq(l, r) => format!("{} = {}", embedded(sig, l), embedded(sig, r)),
            CondFrag::Assign(p, r) => format!("{} := {}", embedded(sig, p), embedded(sig, r)),
            CondFrag::Sort(t, s) => format!("{} : {s}", embedded(sig, t)),
        })
        .collect::<Vec<_>>()
        .join(" /\\ ")
}

fn level(s: &Strategy) -> u8 {
    match s {
        Strategy::Cond(..) => 4,
        Strategy::OrElse(..) => 3,
        Strategy::Choice(..) => 2,
        Strategy::Seq(..) => 1,
        Strategy::MatchRew { .. } => 5,
        _ => 0,
    }
}

/// Renders a strategy expression in concrete syntax.
pub fn strategy(sig: &Signature, s: &Strategy) -> String {
    let mut out = String::new();
    write_strat(sig, s, 5, &mut out);
    out
}

fn write_strat(sig: &Signature, s: &Strategy, max: u8, out: &mut String) {
    if level(s) > max {
        out.push('(');
        write_strat(sig, s, 5, out);
        out.push(')');
        return;
    }
    use Strategy::*;
    match s {
        Idle => out.push_str("idle"),
        Fail => out.push_str("fail"),
        All => out.push_str("all"),
        Apply { label, init, top } => {
            if *top {
                out.push_str("top(");
            }
            out.push_str(label);
            if !init.is_empty() {
                out.push('[');
                let parts: Vec<String> = init.iter().map(|(v, t)| format!("{v} <- {}", term(sig, t))).collect();
                out.push_str(&parts.join(", "));
                out.push(']');
            }
            if *top {
                out.push(')');
            }
        }
        Match { anywhere, pattern, cond } => {
            out.push_str(if *anywhere { "amatch " } else { "match " });
            out.push_str(&embedded(sig, pattern));
            if !cond.is_empty() {
                out.push_str(" s.t. ");
                out.push_str(&condition(sig, cond));
            }
        }
        MatchRew { anywhere, pattern, cond, slots } => {
            out.push_str(if *anywhere { "amatchrew " } else { "matchrew " });
            out.push_str(&embedded(sig, pattern));
            if !cond.is_empty() {
                out.push_str(" s.t. ");
                out.push_str(&condition(sig, cond));
            }
            out.push_str(" by ");
            for (i, (v, st)) in slots.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&format!("{}:{} using ", v.name, v.sort));
                write_strat(sig, st, 0, out);
            }
        }
        Seq(a, b) => bin(sig, a, b, " ; ", 1, out),
        Choice(a, b) => bin(sig, a, b, " | ", 2, out),
        OrElse(a, b) => bin(sig, a, b, " or-else ", 3, out),
        Cond(a, b, c) => {
            write_strat(sig, a, 3, out);
            out.push_str(" ? ");
            write_strat(sig, b, 3, out);
            out.push_str(" : ");
            write_strat(sig, c, 4, out);
        }
        Star(a) => {
            write_strat(sig, a, 0, out);
            out.push_str(" *");
        }
        Bang(a) => {
            write_strat(sig, a, 0, out);
            out.push_str(" !");
        }
        One(a) => unary(sig, "one", a, out),
        Try(a) => unary(sig, "try", a, out),
        Not(a) => unary(sig, "not", a, out),
        Test(a) => unary(sig, "test", a, out),
        GtAll(a) => unary(sig, "gt-all", a, out),
        GtOne(a) => unary(sig, "gt-one", a, out),
        GtSome(a) => unary(sig, "gt-some", a, out),
        Call { name, args } => {
            out.push_str(name);
            if !args.is_empty() {
                let parts: Vec<String> = args.iter().map(|t| term(sig, t)).collect();
                out.push_str(&format!("({})", parts.join(", ")));
            }
        }
        Congruence { op, args } => {
            out.push_str(op);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_strat(sig, a, 4, out);
                }
                out.push(')');
            }
        }
    }
}

fn bin(sig: &Signature, a: &Strategy, b: &Strategy, op: &str, lvl: u8, out: &mut String) {
    write_strat(sig, a, lvl - 1, out);
    out.push_str(op);
    write_strat(sig, b, lvl, out);
}

fn unary(sig: &Signature, kw: &str, a: &Strategy, out: &mut String) {
    out.push_str(kw);
    out.push('(');
    write_strat(sig, a, 5, out);
    out.push(')');
}

fn attrs(sig: &Signature, a: &crate::kernel::OpAttrs) -> String {
    let mut parts = Vec::new();
    if a.ctor {
        parts.push("ctor".to_string());
    }
    if a.assoc {
        parts.push("assoc".to_string());
    }
    if a.comm {
        parts.push("comm".to_string());
    }
    if let Some(id) = &a.identity {
        parts.push(format!("id: {}", term(sig, id)));
    }
    let list = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    if !a.frozen.is_empty() {
        parts.push(format!("frozen ({})", list(&a.frozen)));
    }
    if let Some(s) = &a.strat {
        parts.push(format!("strat ({} 0)", list(s)));
    }
    if let Some(p) = a.prec {
        parts.push(format!("prec {p}"));
    }
    if parts.is_empty() {
        String::new()
    } else {
        format!(" [{}]", parts.join(" "))
    }
}

fn with_cond(sig: &Signature, head: String, cond: &[CondFrag]) -> String {
    if cond.is_empty() {
        head
    } else {
        format!("{head} if {}", condition(sig, cond))
    }
}

/// Renders a module in concrete syntax, leaving out whatever is already
/// declared in one of `hidden`.
pub fn module(m: &ModuleDef, hidden: &[Arc<ModuleDef>]) -> String {
    let sig = &m.sig;
    let (kw, end) = match m.kind {
        ModuleKind::Functional => ("fmod", "endfm"),
        ModuleKind::System => ("mod", "endm"),
        ModuleKind::Strategy => ("smod", "endsm"),
    };
    let mut lines = vec![format!("{kw} {} is", m.name)];
    let sorts: Vec<&str> =
        sig.sorts().iter().filter(|s| !hidden.iter().any(|h| h.sig.has_sort(s))).map(|s| &**s).collect();
    if !sorts.is_empty() {
        lines.push(format!("  sorts {} .", sorts.join(" ")));
    }
    for (a, b) in sig.subsorts() {
        if !hidden.iter().any(|h| h.sig.subsorts().contains(&(a.clone(), b.clone()))) {
            lines.push(format!("  subsort {a} < {b} ."));
        }
    }
    for d in sig.ops() {
        if d.attrs.builtin || hidden.iter().any(|h| h.sig.ops().iter().any(|o| o.name == d.name && o.args == d.args)) {
            continue;
        }
        let args: Vec<&str> = d.args.iter().map(|s| &**s).collect();
        let a = sig.family(&d.name, d.args.len()).map(|f| attrs(sig, &f.attrs)).unwrap_or_default();
        let dom = if args.is_empty() { String::new() } else { format!("{} ", args.join(" ")) };
        lines.push(format!("  op {} : {dom}-> {}{a} .", d.name, d.result));
    }
    for e in &m.eqs {
        if hidden.iter().any(|h| h.eqs.contains(e)) {
            continue;
        }
        let kw = if e.cond.is_empty() { "eq" } else { "ceq" };
        let head = format!("  {kw} {} = {}", term(sig, &e.lhs), term(sig, &e.rhs));
        let owise = if e.owise { " [owise]" } else { "" };
        lines.push(format!("{}{owise} .", with_cond(sig, head, &e.cond)));
    }
    for r in &m.rules {
        let kw = if r.cond.is_empty() { "rl" } else { "crl" };
        let label = r.label.as_ref().map(|l| format!("[{l}] : ")).unwrap_or_default();
        let head = format!("  {kw} {label}{} => {}", term(sig, &r.lhs), term(sig, &r.rhs));
        let nonexec = if r.nonexec { " [nonexec]" } else { "" };
        lines.push(format!("{}{nonexec} .", with_cond(sig, head, &r.cond)));
    }
    for d in &m.strat_decls {
        let args: Vec<&str> = d.args.iter().map(|s| &**s).collect();
        let sig_part = if args.is_empty() { String::new() } else { format!(" : {}", args.join(" ")) };
        lines.push(format!("  strat {}{sig_part} @ {} .", d.name, d.subject));
    }
    for d in &m.strat_defs {
        let kw = if d.cond.is_empty() { "sd" } else { "csd" };
        let mut head = d.name.to_string();
        if !d.lhs.is_empty() {
            let args: Vec<String> = d.lhs.iter().map(|t| term(sig, t)).collect();
            head.push_str(&format!("({})", args.join(", ")));
        }
        let head = format!("  {kw} {head} := {}", strategy(sig, &d.body));
        lines.push(format!("{} .", with_cond(sig, head, &d.cond)));
    }
    for p in &m.props {
        lines.push(format!("  prop {} := {} .", p.name, term(sig, &p.term)));
    }
    lines.push(end.to_string());
    lines.join("\n")
}
