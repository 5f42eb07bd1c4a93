pub mod csr;
pub mod engine;
pub mod error;
pub mod ext;
pub mod fixtures;
pub mod frontend;
pub mod kernel;
pub mod ltl;
pub mod module;
pub mod multistrat;
pub mod rewrite;
pub mod strategy;

pub use error::{Error, Result};
pub use kernel::*;
pub use module::{CondFrag, Equation, ModuleDef, ModuleKind, PropDef, Rule, StratDecl, StratDef};
pub use rewrite::{EvalOrder, Rewriter};
pub use strategy::{desugar, StratRef, Strategy};
