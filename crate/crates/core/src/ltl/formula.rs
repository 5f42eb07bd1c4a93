use std::fmt;
use std::sync::Arc;

use crate::kernel::Sym;

/// Linear temporal logic formula over named propositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl {
    True,
    False,
    Prop(Sym),
    Not(Arc<Ltl>),
    And(Arc<Ltl>, Arc<Ltl>),
    Or(Arc<Ltl>, Arc<Ltl>),
    Implies(Arc<Ltl>, Arc<Ltl>),
    Next(Arc<Ltl>),
    Always(Arc<Ltl>),
    Eventually(Arc<Ltl>),
    Until(Arc<Ltl>, Arc<Ltl>),
    /// Dual of until; produced by negation normal form.
    Release(Arc<Ltl>, Arc<Ltl>),
}

use Ltl::*;

impl Ltl {
    pub fn prop(name: &str) -> Ltl {
        Prop(crate::kernel::sym(name))
    }

    pub fn not(a: Ltl) -> Ltl {
        Not(Arc::new(a))
    }

    pub fn and(a: Ltl, b: Ltl) -> Ltl {
        And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Ltl, b: Ltl) -> Ltl {
        Or(Arc::new(a), Arc::new(b))
    }

    pub fn implies(a: Ltl, b: Ltl) -> Ltl {
        Implies(Arc::new(a), Arc::new(b))
    }

    pub fn next(a: Ltl) -> Ltl {
        Next(Arc::new(a))
    }

    pub fn always(a: Ltl) -> Ltl {
        Always(Arc::new(a))
    }

    pub fn eventually(a: Ltl) -> Ltl {
        Eventually(Arc::new(a))
    }

    pub fn until(a: Ltl, b: Ltl) -> Ltl {
        Until(Arc::new(a), Arc::new(b))
    }

    pub fn release(a: Ltl, b: Ltl) -> Ltl {
        Release(Arc::new(a), Arc::new(b))
    }

    /// Proposition names in order of first occurrence.
    pub fn props(&self) -> Vec<Sym> {
        fn go(f: &Ltl, out: &mut Vec<Sym>) {
            match f {
                True | False => {}
                Prop(p) => {
                    if !out.contains(p) {
                        out.push(p.clone());
                    }
                }
                Not(a) | Next(a) | Always(a) | Eventually(a) => go(a, out),
                And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Negation normal form over True, False, literals, And, Or, Next, Until
    /// and Release.
    pub fn nnf(&self) -> Ltl {
        self.nnf_pol(true)
    }

    fn nnf_pol(&self, pos: bool) -> Ltl {
        match (self, pos) {
            (True, true) | (False, false) => True,
            (True, false) | (False, true) => False,
            (Prop(_), true) => self.clone(),
            (Prop(_), false) => Ltl::not(self.clone()),
            (Not(a), p) => a.nnf_pol(!p),
            (And(a, b), true) => Ltl::and(a.nnf_pol(true), b.nnf_pol(true)),
            (And(a, b), false) => Ltl::or(a.nnf_pol(false), b.nnf_pol(false)),
            (Or(a, b), true) => Ltl::or(a.nnf_pol(true), b.nnf_pol(true)),
            (Or(a, b), false) => Ltl::and(a.nnf_pol(false), b.nnf_pol(false)),
            (Implies(a, b), true) => Ltl::or(a.nnf_pol(false), b.nnf_pol(true)),
            (Implies(a, b), false) => Ltl::and(a.nnf_pol(true), b.nnf_pol(false)),
            (Next(a), p) => Ltl::next(a.nnf_pol(p)),
            (Always(a), true) => Ltl::release(False, a.nnf_pol(true)),
            (Always(a), false) => Ltl::until(True, a.nnf_pol(false)),
            (Eventually(a), true) => Ltl::until(True, a.nnf_pol(true)),
            (Eventually(a), false) => Ltl::release(False, a.nnf_pol(false)),
            (Until(a, b), true) => Ltl::until(a.nnf_pol(true), b.nnf_pol(true)),
            (Until(a, b), false) => Ltl::release(a.nnf_pol(false), b.nnf_pol(false)),
            (Release(a, b), true) => Ltl::release(a.nnf_pol(true), b.nnf_pol(true)),
            (Release(a, b), false) => Ltl::until(a.nnf_pol(false), b.nnf_pol(false)),
        }
    }
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            True => write!(f, "True"),
            False => write!(f, "False"),
            Prop(p) => write!(f, "{p}"),
            Not(a) => write!(f, "~ {}", Paren(a)),
            And(a, b) => write!(f, "{} /\\ {}", Paren(a), Paren(b)),
            Or(a, b) => write!(f, "{} \\/ {}", Paren(a), Paren(b)),
            Implies(a, b) => write!(f, "{} -> {}", Paren(a), Paren(b)),
            Next(a) => write!(f, "O {}", Paren(a)),
            Always(a) => write!(f, "[] {}", Paren(a)),
            Eventually(a) => write!(f, "<> {}", Paren(a)),
            Until(a, b) => write!(f, "{} U {}", Paren(a), Paren(b)),
            Release(a, b) => write!(f, "{} R {}", Paren(a), Paren(b)),
        }
    }
}

struct Paren<'a>(&'a Ltl);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            True | False | Prop(_) => write!(f, "{}", self.0),
            other => write!(f, "({other})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nnf_pushes_negation_inward() {
        let f = Ltl::not(Ltl::always(Ltl::prop("p")));
        assert_eq!(f.nnf(), Ltl::until(True, Ltl::not(Ltl::prop("p"))));
        let g = Ltl::not(Ltl::implies(Ltl::prop("p"), Ltl::next(Ltl::prop("q"))));
        assert_eq!(g.nnf(), Ltl::and(Ltl::prop("p"), Ltl::next(Ltl::not(Ltl::prop("q")))));
    }

    #[test]
    fn display_is_parenthesized() {
        let f = Ltl::always(Ltl::and(Ltl::not(Ltl::prop("Owins")), Ltl::not(Ltl::prop("Xwins"))));
        assert_eq!(f.to_string(), "[] ((~ Owins) /\\ (~ Xwins))");
    }
}
