use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch in {context}: expected {expected}, found {found}")]
    Arity {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid renaming: {0}")]
    Renaming(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("term is not well formed at arity {0}")]
    IllFormed(usize),
    #[error("sort mismatch: {0}")]
    Sort(String),
    #[error("no closure structure available to interpret {0}")]
    MissingClosure(&'static str),
    #[error("no assignment for symbol `{0}`")]
    MissingSymbol(String),
    #[error("operation requires cartesian mode")]
    Mode,
    #[error("{structure}: {law} fails at {witness}")]
    LawViolation {
        structure: String,
        law: &'static str,
        witness: String,
    },
    #[error("invalid model: {0}")]
    Model(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_arity(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Arity {
            context,
            expected,
            found,
        })
    }
}
