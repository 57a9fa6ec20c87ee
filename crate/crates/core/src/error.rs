use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("axiom violated: {0}")]
    Axiom(String),
    #[error("missing data: {0}")]
    Missing(String),
    #[error("arity {requested} exceeds the available window {available}")]
    Window { requested: usize, available: usize },
    #[error("infinite sum: {0}")]
    NotFinite(String),
    #[error("no solution: {0}")]
    Unsolvable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
