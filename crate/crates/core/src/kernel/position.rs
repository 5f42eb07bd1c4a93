use crate::kernel::signature::Signature;
use crate::kernel::term::Term;

/// Part of a flattened assoc or comm argument list that a match covers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    /// Contiguous run of arguments of an assoc operator.
    Span { start: usize, len: usize },
    /// Sorted argument indices of a comm operator.
    Subset(Vec<usize>),
}

/// Path of child indices from the root, optionally narrowed to a slot of
/// the argument list found there.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub path: Vec<usize>,
    pub slot: Option<Slot>,
}

impl Position {
    pub fn root() -> Position {
        Position::default()
    }

    pub fn is_root(&self) -> bool {
        self.path.is_empty() && self.slot.is_none()
    }
}

/// Subterm designated by a position.
pub fn subterm_at(sig: &Signature, t: &Term, pos: &Position) -> Option<Term> {
    let node = t.at_path(&pos.path)?;
    match &pos.slot {
        None => Some(node.clone()),
        Some(Slot::Span { start, len }) => {
            let args = node.args().get(*start..start + len)?.to_vec();
            Some(sig.make(node.op()?, args))
        }
        Some(Slot::Subset(idx)) => {
            let args = idx.iter().map(|&i| node.args().get(i).cloned()).collect::<Option<Vec<_>>>()?;
            Some(sig.make(node.op()?, args))
        }
    }
}

/// Replaces the subterm at `pos` and re-canonicalizes along the path.
pub fn replace_at(sig: &Signature, t: &Term, pos: &Position, r: Term) -> Term {
    fn go(sig: &Signature, t: &Term, path: &[usize], slot: &Option<Slot>, r: Term) -> Term {
        match path.split_first() {
            Some((&i, rest)) => {
                let mut args = t.args().to_vec();
                args[i] = go(sig, &args[i], rest, slot, r);
                sig.make(t.op().expect("path through a variable"), args)
            }
            None => match slot {
                None => r,
                Some(Slot::Span { start, len }) => {
                    let a = t.args();
                    let mut args = a[..*start].to_vec();
                    args.push(r);
                    args.extend_from_slice(&a[start + len..]);
                    sig.make(t.op().unwrap(), args)
                }
                Some(Slot::Subset(idx)) => {
                    let mut args: Vec<Term> =
                        t.args().iter().enumerate().filter(|(i, _)| !idx.contains(i)).map(|(_, a)| a.clone()).collect();
                    args.push(r);
                    sig.make(t.op().unwrap(), args)
                }
            },
        }
    }
    go(sig, t, &pos.path, &pos.slot, r)
}
