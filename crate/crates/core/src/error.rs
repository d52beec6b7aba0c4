use thiserror::Error;

/// Errors raised by the arithmetic kernel and the pipelines built on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("not a monomial unit: {0}")]
    NotAUnit(String),
    #[error("matrix is not invertible: no unit pivot in column {column}")]
    Singular { column: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("operator is reducible: {0}")]
    Reducible(String),
    #[error("no polynomial gauge up to hbar^{cap}: {detail}")]
    GaugeCapExceeded { cap: i32, detail: String },
    #[error("inconsistent gauge equations at q^{order}: {residue}")]
    Inconsistent { order: String, residue: String },
    #[error("gauge not determined at q^{order}: {free} free unknown(s)")]
    Underdetermined { order: String, free: usize },
    #[error("no block-constant hbar-shift makes the dual degrees symmetric: {0}")]
    NoGamma(String),
    #[error("outside expected small cell: {0}")]
    OutsideSmallCell(String),
    #[error("hbar exponent {exponent} outside the allowed window [-{window}, {window}]")]
    HbarWindow { exponent: i32, window: i32 },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
