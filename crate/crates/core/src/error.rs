use thiserror::Error;

/// Errors produced by the census library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("word is not freely reduced at position {position}")]
    NotReduced { position: usize },

    #[error("budget exceeded: {what} needs {needed}, cap is {cap}")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        cap: String,
    },

    #[error("word is a proper power")]
    ProperPower,

    #[error("relator does not satisfy C'({0})")]
    SmallCancellation(String),

    #[error("code is not prefix-free: {shorter:?} is a prefix of {longer:?}")]
    NotPrefixFree { shorter: String, longer: String },

    #[error("density series below resolution: {0}")]
    BelowResolution(String),

    #[error("presentation has a square relator; pass the no-2-torsion assertion to eliminate it")]
    TwoTorsionUnasserted,

    #[error("ambiguous recovery: {0} candidates share the prefix")]
    Ambiguous(usize),

    #[error("not found within budget")]
    NotFound,
}

pub type Result<T> = std::result::Result<T, Error>;
