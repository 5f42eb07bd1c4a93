use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Interned-ish symbol used for operator, sort and variable names.
pub type Sym = Arc<str>;

pub fn sym(s: &str) -> Sym {
    Arc::from(s)
}

/// A sorted variable. Two variables are the same only if name and sort agree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: Sym,
    pub sort: Sym,
}

impl Var {
    pub fn new(name: &str, sort: &str) -> Var {
        Var { name: sym(name), sort: sym(sort) }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.sort)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.sort)
    }
}

#[derive(PartialEq, Eq)]
pub enum TermKind {
    Var(Var),
    App { op: Sym, args: Vec<Term> },
}

struct Node {
    kind: TermKind,
    hash: u64,
    ground: bool,
    numeral: Option<u64>,
}

/// Immutable first-order term with structural sharing.
///
/// Terms built through [`crate::Signature::make`] or
/// [`crate::Signature::canonicalize`] are kept in canonical form modulo the
/// structural axioms of their operators; the raw constructors here do no
/// normalization at all.
#[derive(Clone)]
pub struct Term(Arc<Node>);

impl Term {
    pub fn var(v: Var) -> Term {
        let mut h = DefaultHasher::new();
        0u8.hash(&mut h);
        v.hash(&mut h);
        Term(Arc::new(Node { hash: h.finish(), ground: false, numeral: None, kind: TermKind::Var(v) }))
    }

    pub fn new_var(name: &str, sort: &str) -> Term {
        Term::var(Var::new(name, sort))
    }

    pub fn app(op: Sym, args: Vec<Term>) -> Term {
        let mut h = DefaultHasher::new();
        1u8.hash(&mut h);
        op.hash(&mut h);
        args.len().hash(&mut h);
        for a in &args {
            a.0.hash.hash(&mut h);
        }
        let ground = args.iter().all(|a| a.0.ground);
        let numeral = if args.is_empty() && !op.is_empty() && op.bytes().all(|b| b.is_ascii_digit()) {
            op.parse::<u64>().ok()
        } else {
            None
        };
        Term(Arc::new(Node { hash: h.finish(), ground, numeral, kind: TermKind::App { op, args } }))
    }

    pub fn constant(op: &str) -> Term {
        Term::app(sym(op), Vec::new())
    }

    pub fn numeral(n: u64) -> Term {
        Term::app(sym(&n.to_string()), Vec::new())
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn as_var(&self) -> Option<&Var> {
        match &self.0.kind {
            TermKind::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self.0.kind, TermKind::Var(_))
    }

    pub fn op(&self) -> Option<&Sym> {
        match &self.0.kind {
            TermKind::App { op, .. } => Some(op),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match &self.0.kind {
            TermKind::App { args, .. } => args,
            _ => &[],
        }
    }

    pub fn is_ground(&self) -> bool {
        self.0.ground
    }

    pub fn as_numeral(&self) -> Option<u64> {
        self.0.numeral
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Same term with its children replaced (no canonicalization).
    pub fn with_args(&self, args: Vec<Term>) -> Term {
        match &self.0.kind {
            TermKind::App { op, .. } => Term::app(op.clone(), args),
            TermKind::Var(_) => self.clone(),
        }
    }

    /// Variables occurring in the term, in first-occurrence order.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        if self.is_ground() {
            return;
        }
        match &self.0.kind {
            TermKind::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            TermKind::App { args, .. } => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.args().iter().map(Term::depth).max().unwrap_or(0)
    }

    /// Subterm at a child-index path, if it exists.
    pub fn at_path(&self, path: &[usize]) -> Option<&Term> {
        let mut cur = self;
        for &i in path {
            cur = cur.args().get(i)?;
        }
        Some(cur)
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.kind == other.0.kind)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

/// Total order used for commutative canonical forms: variables before
/// applications, variables by name then sort, numerals by value before other
/// applications, then applications by operator name, arity and children.
impl Ord for Term {
    fn cmp(&self, other: &Term) -> Ordering {
        if self.ptr_eq(other) {
            return Ordering::Equal;
        }
        match (&self.0.kind, &other.0.kind) {
            (TermKind::Var(a), TermKind::Var(b)) => a.cmp(b),
            (TermKind::Var(_), TermKind::App { .. }) => Ordering::Less,
            (TermKind::App { .. }, TermKind::Var(_)) => Ordering::Greater,
            (TermKind::App { op: f, args: xs }, TermKind::App { op: g, args: ys }) => {
                match (self.0.numeral, other.0.numeral) {
                    (Some(a), Some(b)) => return a.cmp(&b),
                    (Some(_), None) => return Ordering::Less,
                    (None, Some(_)) => return Ordering::Greater,
                    (None, None) => {}
                }
                f.cmp(g).then(xs.len().cmp(&ys.len())).then_with(|| {
                    for (x, y) in xs.iter().zip(ys) {
                        let c = x.cmp(y);
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Term) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Plain prefix rendering; the frontend printer does mixfix.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            TermKind::Var(v) => write!(f, "{v}"),
            TermKind::App { op, args } if args.is_empty() => write!(f, "{op}"),
            TermKind::App { op, args } => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerals_order_by_value() {
        let nine = Term::numeral(9);
        let ten = Term::numeral(10);
        assert!(nine < ten);
        assert!(ten < Term::constant("a"));
    }

    #[test]
    fn variables_precede_applications() {
        assert!(Term::new_var("Z", "S") < Term::constant("a"));
        assert!(Term::new_var("A", "S") < Term::new_var("B", "S"));
    }

    #[test]
    fn structural_equality_and_hash() {
        let a = Term::app(sym("f"), vec![Term::constant("a"), Term::new_var("X", "S")]);
        let b = Term::app(sym("f"), vec![Term::constant("a"), Term::new_var("X", "S")]);
        assert_eq!(a, b);
        assert!(!a.is_ground());
        assert_eq!(a.vars(), vec![Var::new("X", "S")]);
        assert_eq!(a.at_path(&[0]), Some(&Term::constant("a")));
    }
}
