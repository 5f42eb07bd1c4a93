use crate::kernel::{Signature, Sym, Term, Var};
use crate::strategy::StratRef;

/// Placeholder variable name standing for the subject term in propositions.
pub const PLACEHOLDER: &str = "@";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleKind {
    Functional,
    System,
    Strategy,
}

/// One fragment of an equational condition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CondFrag {
    /// `l = r`: both sides reduce to the same normal form.
    Eq(Term, Term),
    /// `p := r`: the normal form of `r` matches `p`, binding its variables.
    Assign(Term, Term),
    /// `t : S`: the normal form of `t` has sort `S` or a subsort.
    Sort(Term, Sym),
}

impl CondFrag {
    pub fn vars(&self, out: &mut Vec<Var>) {
        match self {
            CondFrag::Eq(l, r) | CondFrag::Assign(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            CondFrag::Sort(t, _) => t.collect_vars(out),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub cond: Vec<CondFrag>,
    pub owise: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub label: Option<Sym>,
    pub lhs: Term,
    pub rhs: Term,
    pub cond: Vec<CondFrag>,
    pub nonexec: bool,
}

impl Rule {
    pub fn vars(&self) -> Vec<Var> {
        let mut out = self.lhs.vars();
        self.rhs.collect_vars(&mut out);
        for c in &self.cond {
            c.vars(&mut out);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratDecl {
    pub name: Sym,
    pub args: Vec<Sym>,
    pub subject: Sym,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StratDef {
    pub name: Sym,
    pub lhs: Vec<Term>,
    pub body: StratRef,
    pub cond: Vec<CondFrag>,
}

/// Atomic proposition: a Boolean term over the placeholder `@`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropDef {
    pub name: Sym,
    pub term: Term,
}

/// A flattened module: every import has already been inlined.
#[derive(Debug, Clone)]
pub struct ModuleDef {
    pub name: Sym,
    pub kind: ModuleKind,
    pub sig: Signature,
    pub eqs: Vec<Equation>,
    pub rules: Vec<Rule>,
    pub strat_decls: Vec<StratDecl>,
    pub strat_defs: Vec<StratDef>,
    pub props: Vec<PropDef>,
    pub imports: Vec<Sym>,
}

impl ModuleDef {
    pub fn new(name: &str, kind: ModuleKind) -> ModuleDef {
        ModuleDef {
            name: crate::kernel::sym(name),
            kind,
            sig: Signature::new(),
            eqs: Vec::new(),
            rules: Vec::new(),
            strat_decls: Vec::new(),
            strat_defs: Vec::new(),
            props: Vec::new(),
            imports: Vec::new(),
        }
    }

    pub fn has_label(&self, label: &str) -> bool {
        self.rules.iter().any(|r| r.label.as_deref() == Some(label))
    }

    pub fn rules_labeled<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a Rule> + 'a {
        self.rules.iter().filter(move |r| r.label.as_deref() == Some(label))
    }

    pub fn strat_decl(&self, name: &str, arity: usize) -> Option<&StratDecl> {
        self.strat_decls.iter().find(|d| &*d.name == name && d.args.len() == arity)
    }

    pub fn has_strat_named(&self, name: &str) -> bool {
        self.strat_decls.iter().any(|d| &*d.name == name)
    }

    pub fn defs_for<'a>(&'a self, name: &'a str, arity: usize) -> impl Iterator<Item = &'a StratDef> + 'a {
        self.strat_defs.iter().filter(move |d| &*d.name == name && d.lhs.len() == arity)
    }

    pub fn prop(&self, name: &str) -> Option<&PropDef> {
        self.props.iter().find(|p| &*p.name == name)
    }
}
