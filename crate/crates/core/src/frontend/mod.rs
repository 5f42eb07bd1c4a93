//! Surface syntax: modules, terms, strategies, temporal formulas and
//! session commands, plus the pretty printer.

pub mod command;
pub mod lexer;
pub mod ltl_parser;
pub mod parser;
pub mod prelude;
pub mod printer;
pub mod strategy_parser;
pub mod term_parser;

pub use command::{parse_command, Command, GlobalSpec};
pub use ltl_parser::parse_ltl;
pub use parser::{parse_condition, ModuleStore};
pub use strategy_parser::parse_strategy;
pub use term_parser::TermCtx;
