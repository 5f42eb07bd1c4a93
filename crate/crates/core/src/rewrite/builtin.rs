//! Native evaluation of the predefined numeric and comparison operators.

use crate::kernel::{Signature, Sym, Term};

pub fn bool_term(b: bool) -> Term {
    Term::constant(if b { "true" } else { "false" })
}

fn numerals(args: &[Term]) -> Option<Vec<u64>> {
    args.iter().map(Term::as_numeral).collect()
}

/// Folds the numeral arguments of an assoc-comm arithmetic operator.
fn fold_ac(sig: &Signature, op: &Sym, args: &[Term], unit: u64, f: fn(u64, u64) -> Option<u64>) -> Option<Term> {
    let (nums, rest): (Vec<&Term>, Vec<&Term>) = args.iter().partition(|a| a.as_numeral().is_some());
    if nums.len() < 2 {
        return None;
    }
    let mut acc = unit;
    for n in nums {
        acc = f(acc, n.as_numeral().unwrap())?;
    }
    if rest.is_empty() {
        return Some(Term::numeral(acc));
    }
    let mut out: Vec<Term> = rest.into_iter().cloned().collect();
    out.push(Term::numeral(acc));
    Some(sig.make(op, out))
}

/// Result of a builtin operator applied to normalized arguments, if it can
/// be computed.
pub fn eval(sig: &Signature, op: &Sym, args: &[Term]) -> Option<Term> {
    match (&**op, args.len()) {
        ("_==_", 2) => Some(bool_term(args[0] == args[1])),
        ("_=/=_", 2) => Some(bool_term(args[0] != args[1])),
        ("_+_", n) if n >= 2 => fold_ac(sig, op, args, 0, u64::checked_add),
        ("_*_", n) if n >= 2 => fold_ac(sig, op, args, 1, u64::checked_mul),
        _ => {
            let ns = numerals(args)?;
            match (&**op, ns.as_slice()) {
                ("sd", [a, b]) => Some(Term::numeral(a.abs_diff(*b))),
                ("min", [a, b]) => Some(Term::numeral(*a.min(b))),
                ("max", [a, b]) => Some(Term::numeral(*a.max(b))),
                ("_quo_", [a, b]) if *b != 0 => Some(Term::numeral(a / b)),
                ("_rem_", [a, b]) if *b != 0 => Some(Term::numeral(a % b)),
                ("_<_", [a, b]) => Some(bool_term(a < b)),
                ("_<=_", [a, b]) => Some(bool_term(a <= b)),
                ("_>_", [a, b]) => Some(bool_term(a > b)),
                ("_>=_", [a, b]) => Some(bool_term(a >= b)),
                _ => None,
            }
        }
    }
}
