pub mod matching;
pub mod position;
pub mod signature;
pub mod subst;
pub mod term;

pub use matching::{match_all, match_anywhere, match_root_slots, match_with, matches};
pub use position::{replace_at, subterm_at, Position, Slot};
pub use signature::{Mixfix, OpAttrs, OpDecl, OpFamily, Signature, UNIVERSAL};
pub use subst::Subst;
pub use term::{sym, Sym, Term, TermKind, Var};
