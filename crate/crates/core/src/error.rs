use thiserror::Error;

/// Errors raised while loading modules or executing terms and strategies.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("sort error: {0}")]
    Sort(String),

    #[error("undeclared {kind} `{name}`")]
    Undeclared { kind: &'static str, name: String },

    #[error("unsupported construct: {0}")]
    Unsupported(String),

    #[error("equational reduction exceeded the step limit of {0} rewrites")]
    Nontermination(u64),

    #[error("search exceeded the limit of {0} states")]
    SearchLimit(u64),

    #[error("strategy evaluation does not terminate: {0}")]
    Divergence(String),

    #[error("instantiation error: {0}")]
    Instantiation(String),

    #[error("transformation error: {0}")]
    Transform(String),

    #[error("proposition `{name}` reduced to `{value}`, which is not a Boolean value")]
    Proposition { name: String, value: String },

    #[error("{0}")]
    Module(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
