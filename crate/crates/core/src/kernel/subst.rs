use std::collections::BTreeMap;
use std::fmt;

use crate::kernel::signature::Signature;
use crate::kernel::term::{Term, TermKind, Var};

/// Finite map from variables to terms.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subst(BTreeMap<Var, Term>);

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.0.get(v)
    }

    pub fn get_by_name(&self, name: &str) -> Option<&Term> {
        self.0.iter().find(|(v, _)| &*v.name == name).map(|(_, t)| t)
    }

    pub fn insert(&mut self, v: Var, t: Term) {
        self.0.insert(v, t);
    }

    pub fn remove(&mut self, v: &Var) -> Option<Term> {
        self.0.remove(v)
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.0.contains_key(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    /// Right-biased union.
    pub fn extend(&mut self, other: &Subst) {
        for (v, t) in other.iter() {
            self.0.insert(v.clone(), t.clone());
        }
    }

    pub fn restrict(&self, keep: &[Var]) -> Subst {
        Subst(self.0.iter().filter(|(v, _)| keep.contains(v)).map(|(v, t)| (v.clone(), t.clone())).collect())
    }

    /// Applies the substitution, re-canonicalizing modulo axioms.
    pub fn apply(&self, sig: &Signature, t: &Term) -> Term {
        if t.is_ground() || self.is_empty() {
            return t.clone();
        }
        match t.kind() {
            TermKind::Var(v) => self.0.get(v).cloned().unwrap_or_else(|| t.clone()),
            TermKind::App { op, args } => {
                let args = args.iter().map(|a| self.apply(sig, a)).collect();
                sig.make(op, args)
            }
        }
    }
}

impl FromIterator<(Var, Term)> for Subst {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Subst {
        Subst(iter.into_iter().collect())
    }
}

impl fmt::Debug for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v} |-> {t}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::term::sym;

    #[test]
    fn apply_replaces_bound_vars_only() {
        let mut sig = Signature::new();
        sig.finalize().unwrap();
        let x = Var::new("X", "S");
        let t = Term::app(sym("f"), vec![Term::var(x.clone()), Term::new_var("Y", "S")]);
        let mut s = Subst::new();
        s.insert(x, Term::constant("a"));
        let r = s.apply(&sig, &t);
        assert_eq!(r.to_string(), "f(a, Y:S)");
    }
}
