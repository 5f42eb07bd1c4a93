use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::kernel::term::{sym, Sym, Term, TermKind};

/// Sort that every sort and kind is below; used by polymorphic builtins such
/// as `_==_`.
pub const UNIVERSAL: &str = "Universal";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OpAttrs {
    pub ctor: bool,
    pub assoc: bool,
    pub comm: bool,
    pub identity: Option<Term>,
    /// 1-based argument indices.
    pub frozen: Vec<usize>,
    /// Evaluation order (1-based, zero terminator dropped).
    pub strat: Option<Vec<usize>>,
    pub prec: Option<u32>,
    /// Evaluated natively by the rewriter.
    pub builtin: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpDecl {
    pub name: Sym,
    pub args: Vec<Sym>,
    pub result: Sym,
    pub attrs: OpAttrs,
}

impl OpDecl {
    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

/// How an operator name is written in concrete syntax.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mixfix {
    Prefix,
    Juxtaposition,
    Infix(String),
    UnaryPrefix(String),
    Bracket(usize),
}

impl Mixfix {
    pub fn of(name: &str, arity: usize) -> Mixfix {
        let holes = name.matches('_').count();
        if holes == 0 || holes != arity {
            return Mixfix::Prefix;
        }
        if name == "__" {
            return Mixfix::Juxtaposition;
        }
        if arity == 2 && name.starts_with('_') && name.ends_with('_') && name.len() > 2 {
            let tok = &name[1..name.len() - 1];
            if !tok.contains('_') {
                return Mixfix::Infix(tok.to_string());
            }
        }
        if arity == 1 && name.ends_with('_') && !name.starts_with('_') {
            return Mixfix::UnaryPrefix(name[..name.len() - 1].to_string());
        }
        if name.starts_with('[') && name.ends_with(']') {
            let inner = &name[1..name.len() - 1];
            if inner.split(',').all(|p| p == "_") {
                return Mixfix::Bracket(arity);
            }
        }
        Mixfix::Prefix
    }
}

/// All declarations sharing a name and arity.
#[derive(Debug, Clone)]
pub struct OpFamily {
    pub name: Sym,
    pub arity: usize,
    pub decls: Vec<usize>,
    pub attrs: OpAttrs,
    pub mixfix: Mixfix,
}

/// Order-sorted signature: sorts, subsort preorder, operator declarations.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    sorts: Vec<Sym>,
    sort_index: HashMap<Sym, usize>,
    subsorts: Vec<(Sym, Sym)>,
    ops: Vec<OpDecl>,
    leq: Vec<Vec<bool>>,
    component: Vec<usize>,
    kind_names: Vec<Sym>,
    families: HashMap<(Sym, usize), OpFamily>,
    finalized: bool,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn add_sort(&mut self, name: &str) {
        if !self.sort_index.contains_key(name) {
            let s = sym(name);
            self.sort_index.insert(s.clone(), self.sorts.len());
            self.sorts.push(s);
            self.finalized = false;
        }
    }

    pub fn add_subsort(&mut self, sub: &str, sup: &str) -> Result<()> {
        for s in [sub, sup] {
            if !self.sort_index.contains_key(s) {
                return Err(Error::Undeclared { kind: "sort", name: s.to_string() });
            }
        }
        let pair = (sym(sub), sym(sup));
        if !self.subsorts.contains(&pair) {
            self.subsorts.push(pair);
        }
        self.finalized = false;
        Ok(())
    }

    pub fn add_op(&mut self, decl: OpDecl) -> Result<()> {
        for s in decl.args.iter().chain(std::iter::once(&decl.result)) {
            if !self.has_sort(s) {
                return Err(Error::Undeclared { kind: "sort", name: s.to_string() });
            }
        }
        if !self.ops.contains(&decl) {
            self.ops.push(decl);
        }
        self.finalized = false;
        Ok(())
    }

    pub fn sorts(&self) -> &[Sym] {
        &self.sorts
    }

    pub fn subsorts(&self) -> &[(Sym, Sym)] {
        &self.subsorts
    }

    pub fn ops(&self) -> &[OpDecl] {
        &self.ops
    }

    pub fn ops_mut(&mut self) -> &mut Vec<OpDecl> {
        self.finalized = false;
        &mut self.ops
    }

    pub fn has_sort(&self, s: &str) -> bool {
        s == UNIVERSAL || self.sort_index.contains_key(s)
    }

    /// Computes the subsort closure, kinds and operator families, and checks
    /// the structural well-formedness of declarations.
    pub fn finalize(&mut self) -> Result<()> {
        let n = self.sorts.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in &self.subsorts {
            leq[self.sort_index[a]][self.sort_index[b]] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Sort(format!(
                        "cyclic subsort relation between {} and {}",
                        self.sorts[i], self.sorts[j]
                    )));
                }
            }
        }
        // connected components of the undirected subsort graph
        let mut component: Vec<usize> = (0..n).collect();
        fn find(c: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while c[r] != r {
                r = c[r];
            }
            c[x] = r;
            r
        }
        for (a, b) in &self.subsorts {
            let ra = find(&mut component, self.sort_index[a]);
            let rb = find(&mut component, self.sort_index[b]);
            if ra != rb {
                component[ra.max(rb)] = ra.min(rb);
            }
        }
        for i in 0..n {
            component[i] = find(&mut component, i);
        }
        let mut kind_names = vec![sym(""); n];
        for root in 0..n {
            if component[root] != root {
                continue;
            }
            // name the kind after the first maximal sort of the component
            let top = (0..n)
                .filter(|&i| component[i] == root)
                .find(|&i| (0..n).all(|j| component[j] != root || j == i || !leq[i][j]))
                .unwrap_or(root);
            kind_names[root] = sym(&format!("[{}]", self.sorts[top]));
        }
        self.leq = leq;
        self.component = component;
        self.kind_names = kind_names;

        let mut families: HashMap<(Sym, usize), OpFamily> = HashMap::new();
        for (idx, d) in self.ops.iter().enumerate() {
            let key = (d.name.clone(), d.arity());
            match families.get_mut(&key) {
                Some(f) => {
                    f.decls.push(idx);
                    if f.attrs.assoc != d.attrs.assoc || f.attrs.comm != d.attrs.comm {
                        return Err(Error::Sort(format!(
                            "overloaded declarations of `{}` disagree on structural axioms",
                            d.name
                        )));
                    }
                }
                None => {
                    families.insert(
                        key,
                        OpFamily {
                            name: d.name.clone(),
                            arity: d.arity(),
                            decls: vec![idx],
                            attrs: d.attrs.clone(),
                            mixfix: Mixfix::of(&d.name, d.arity()),
                        },
                    );
                }
            }
        }
        self.families = families;
        self.finalized = true;

        for d in &self.ops {
            let a = &d.attrs;
            if a.assoc {
                if d.arity() != 2 {
                    return Err(Error::Sort(format!("assoc operator `{}` must be binary", d.name)));
                }
                if !self.same_kind(&d.args[0], &d.result) || !self.same_kind(&d.args[1], &d.result) {
                    return Err(Error::Sort(format!(
                        "assoc operator `{}` must have its arguments and result in one kind",
                        d.name
                    )));
                }
            }
            if a.comm && d.arity() != 2 {
                return Err(Error::Sort(format!("comm operator `{}` must be binary", d.name)));
            }
            if let Some(id) = &a.identity {
                if !id.is_ground() {
                    return Err(Error::Sort(format!("identity of `{}` must be ground", d.name)));
                }
                let s = self.least_sort(id)?;
                if !d.args.iter().any(|arg| self.leq(&s, arg)) {
                    return Err(Error::Sort(format!(
                        "identity `{id}` of `{}` does not fit its argument sorts",
                        d.name
                    )));
                }
            }
            for &i in a.frozen.iter().chain(a.strat.iter().flatten()) {
                if i == 0 || i > d.arity() {
                    return Err(Error::Sort(format!("argument index {i} out of range for `{}`", d.name)));
                }
            }
        }
        Ok(())
    }

    pub fn is_finalized(&self) -> bool {
        self.finalized
    }

    fn kind_index(&self, s: &str) -> Option<usize> {
        self.sort_index.get(s).map(|&i| self.component[i])
    }

    /// Name of the kind (connected component) containing a sort.
    pub fn kind_of(&self, s: &str) -> Sym {
        if s.starts_with('[') || s == UNIVERSAL {
            return sym(s);
        }
        match self.kind_index(s) {
            Some(k) => self.kind_names[k].clone(),
            None => sym(&format!("[{s}]")),
        }
    }

    pub fn same_kind(&self, a: &str, b: &str) -> bool {
        a == UNIVERSAL || b == UNIVERSAL || self.kind_of(a) == self.kind_of(b)
    }

    /// Subsort preorder extended with kinds and the universal sort.
    pub fn leq(&self, a: &str, b: &str) -> bool {
        if a == b || b == UNIVERSAL {
            return true;
        }
        if b.starts_with('[') {
            return *self.kind_of(a) == *b;
        }
        match (self.sort_index.get(a), self.sort_index.get(b)) {
            (Some(&i), Some(&j)) => self.leq[i][j],
            _ => false,
        }
    }

    /// Looks up the declarations for an operator applied to `arity`
    /// arguments; flattened applications of assoc operators resolve to the
    /// binary family.
    pub fn family(&self, op: &str, arity: usize) -> Option<&OpFamily> {
        debug_assert!(self.finalized, "signature used before finalize()");
        let key = (sym(op), arity);
        if let Some(f) = self.families.get(&key) {
            return Some(f);
        }
        if arity > 2 {
            let f = self.families.get(&(sym(op), 2))?;
            if f.attrs.assoc {
                return Some(f);
            }
        }
        None
    }

    pub fn families(&self) -> impl Iterator<Item = &OpFamily> {
        self.families.values()
    }

    pub fn families_named<'a>(&'a self, op: &'a str) -> impl Iterator<Item = &'a OpFamily> + 'a {
        self.families.values().filter(move |f| &*f.name == op)
    }

    pub fn attrs(&self, op: &str, arity: usize) -> Option<&OpAttrs> {
        self.family(op, arity).map(|f| &f.attrs)
    }

    pub fn has_numerals(&self) -> bool {
        self.sort_index.contains_key("NzNat") && self.sort_index.contains_key("Zero")
    }

    /// Whether the successor symbol of the builtin naturals is available.
    pub fn has_successor(&self) -> bool {
        self.family("s_", 1).map(|f| f.attrs.builtin).unwrap_or(false)
    }

    /// Least sort of a canonical term, or its kind when no declaration
    /// applies but the arguments sit in the right kinds.
    pub fn least_sort(&self, t: &Term) -> Result<Sym> {
        match t.kind() {
            TermKind::Var(v) => Ok(v.sort.clone()),
            TermKind::App { op, args } => {
                if let Some(n) = t.as_numeral() {
                    if self.has_numerals() {
                        return Ok(sym(if n == 0 { "Zero" } else { "NzNat" }));
                    }
                }
                let fam = self
                    .family(op, args.len())
                    .ok_or_else(|| Error::Undeclared { kind: "operator", name: format!("{op}/{}", args.len()) })?;
                let child_sorts = args.iter().map(|a| self.least_sort(a)).collect::<Result<Vec<_>>>()?;
                if fam.attrs.assoc && args.len() > 2 {
                    let mut acc = child_sorts[0].clone();
                    for s in &child_sorts[1..] {
                        acc = self.result_sort(fam, &[acc, s.clone()], op)?;
                    }
                    Ok(acc)
                } else {
                    self.result_sort(fam, &child_sorts, op)
                }
            }
        }
    }

    fn result_sort(&self, fam: &OpFamily, child_sorts: &[Sym], op: &str) -> Result<Sym> {
        let mut best: Option<Sym> = None;
        for &d in &fam.decls {
            let decl = &self.ops[d];
            if decl.args.iter().zip(child_sorts).all(|(a, c)| self.leq(c, a)) {
                best = Some(match best {
                    Some(b) if self.leq(&b, &decl.result) => b,
                    _ => decl.result.clone(),
                });
            }
        }
        if let Some(b) = best {
            return Ok(b);
        }
        // kind-level fallback
        for &d in &fam.decls {
            let decl = &self.ops[d];
            if decl.args.iter().zip(child_sorts).all(|(a, c)| self.same_kind(c, a)) {
                return Ok(self.kind_of(&decl.result));
            }
        }
        Err(Error::Sort(format!(
            "no declaration of `{op}` accepts arguments of sorts ({})",
            child_sorts.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
        )))
    }

    /// Builds the canonical application of `op` to canonical arguments:
    /// assoc flattening, identity erasure, comm sorting, unit collapse and
    /// successor folding on numerals.
    pub fn make(&self, op: &Sym, mut args: Vec<Term>) -> Term {
        if args.len() == 1 && &**op == "s_" && self.has_successor() {
            if let Some(n) = args[0].as_numeral() {
                return Term::numeral(n + 1);
            }
        }
        let Some(fam) = self.family(op, args.len()) else {
            return Term::app(op.clone(), args);
        };
        let attrs = &fam.attrs;
        if attrs.assoc && args.iter().any(|a| a.op() == Some(op) && a.args().len() >= 2) {
            let mut flat = Vec::with_capacity(args.len() + 2);
            for a in args {
                if a.op() == Some(op) && a.args().len() >= 2 {
                    flat.extend(a.args().iter().cloned());
                } else {
                    flat.push(a);
                }
            }
            args = flat;
        }
        if let Some(id) = &attrs.identity {
            if attrs.assoc || args.len() == 2 {
                args.retain(|a| a != id);
                match args.len() {
                    0 => return id.clone(),
                    1 => return args.pop().unwrap(),
                    _ => {}
                }
            }
        }
        if attrs.comm {
            args.sort();
        }
        if attrs.assoc && args.len() == 1 {
            return args.pop().unwrap();
        }
        Term::app(op.clone(), args)
    }

    /// Canonical form of an arbitrary term, checking that every argument
    /// lies in the kind its operator expects.
    pub fn canonicalize(&self, t: &Term) -> Result<Term> {
        match t.kind() {
            TermKind::Var(_) => Ok(t.clone()),
            TermKind::App { op, args } => {
                let args = args.iter().map(|a| self.canonicalize(a)).collect::<Result<Vec<_>>>()?;
                if t.as_numeral().is_none() {
                    self.least_sort(&Term::app(op.clone(), args.clone()))?;
                }
                Ok(self.make(op, args))
            }
        }
    }

    /// Elements of `t` seen as an argument list of the collection operator
    /// `op` (identity is the empty list, a foreign term a singleton).
    pub fn collection_elems(&self, op: &Sym, t: &Term, identity: Option<&Term>) -> Vec<Term> {
        if t.op() == Some(op) && t.args().len() >= 2 {
            t.args().to_vec()
        } else if identity == Some(t) {
            Vec::new()
        } else {
            vec![t.clone()]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn list_sig(comm: bool) -> Signature {
        let mut sig = Signature::new();
        for s in ["Letter", "List"] {
            sig.add_sort(s);
        }
        sig.add_subsort("Letter", "List").unwrap();
        for c in ["a", "b", "c", "d"] {
            sig.add_op(OpDecl {
                name: sym(c),
                args: vec![],
                result: sym("Letter"),
                attrs: OpAttrs { ctor: true, ..Default::default() },
            })
            .unwrap();
        }
        sig.add_op(OpDecl {
            name: sym("nil"),
            args: vec![],
            result: sym("List"),
            attrs: OpAttrs { ctor: true, ..Default::default() },
        })
        .unwrap();
        sig.add_op(OpDecl {
            name: sym("__"),
            args: vec![sym("List"), sym("List")],
            result: sym("List"),
            attrs: OpAttrs {
                ctor: true,
                assoc: true,
                comm,
                identity: Some(Term::constant("nil")),
                ..Default::default()
            },
        })
        .unwrap();
        sig.finalize().unwrap();
        sig
    }

    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    fn juxt(args: Vec<Term>) -> Term {
        Term::app(sym("__"), args)
    }

    #[test]
    fn flattens_assoc() {
        let sig = list_sig(false);
        let t = juxt(vec![juxt(vec![c("a"), c("b")]), c("c")]);
        assert_eq!(sig.canonicalize(&t).unwrap(), juxt(vec![c("a"), c("b"), c("c")]));
    }

    #[test]
    fn erases_identity() {
        let sig = list_sig(false);
        assert_eq!(sig.canonicalize(&juxt(vec![c("nil"), c("a")])).unwrap(), c("a"));
        assert_eq!(sig.canonicalize(&juxt(vec![c("nil"), c("nil")])).unwrap(), c("nil"));
    }

    #[test]
    fn comm_sorts_children() {
        let sig = list_sig(true);
        let x = sig.canonicalize(&juxt(vec![c("c"), c("a"), c("b")])).unwrap();
        let y = sig.canonicalize(&juxt(vec![c("b"), juxt(vec![c("c"), c("a")])])).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn least_sorts() {
        let sig = list_sig(false);
        assert_eq!(&*sig.least_sort(&c("a")).unwrap(), "Letter");
        assert_eq!(&*sig.least_sort(&juxt(vec![c("a"), c("b")])).unwrap(), "List");
        assert_eq!(&*sig.least_sort(&juxt(vec![c("a"), c("b"), c("c")])).unwrap(), "List");
        assert!(sig.leq("Letter", "[List]"));
        assert!(sig.leq("Letter", UNIVERSAL));
    }

    #[test]
    fn rejects_cyclic_subsorts() {
        let mut sig = Signature::new();
        sig.add_sort("A");
        sig.add_sort("B");
        sig.add_subsort("A", "B").unwrap();
        sig.add_subsort("B", "A").unwrap();
        assert!(matches!(sig.finalize(), Err(Error::Sort(_))));
    }

    #[test]
    fn rejects_non_binary_assoc() {
        let mut sig = Signature::new();
        sig.add_sort("S");
        sig.add_op(OpDecl {
            name: sym("f"),
            args: vec![sym("S")],
            result: sym("S"),
            attrs: OpAttrs { assoc: true, ..Default::default() },
        })
        .unwrap();
        assert!(sig.finalize().is_err());
    }

    #[test]
    fn mixfix_classification() {
        assert_eq!(Mixfix::of("__", 2), Mixfix::Juxtaposition);
        assert_eq!(Mixfix::of("_:_", 2), Mixfix::Infix(":".into()));
        assert_eq!(Mixfix::of("not_", 1), Mixfix::UnaryPrefix("not".into()));
        assert_eq!(Mixfix::of("[_,_,_]", 3), Mixfix::Bracket(3));
        assert_eq!(Mixfix::of("take", 2), Mixfix::Prefix);
    }
}
