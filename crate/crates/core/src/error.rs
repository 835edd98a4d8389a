use thiserror::Error;

use crate::poly::GroupKind;
use crate::scalars::FieldSpec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("division by zero")]
    DivisionByZero,

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("{0}! is not invertible in characteristic {1}")]
    FactorialNotInvertible(u64, u32),

    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("operation requires group {expected}, found {found}")]
    WrongGroup { expected: GroupKind, found: GroupKind },

    /// A hypothesis of a construction failed; the message names the identity.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid search configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
