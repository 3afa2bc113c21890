//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by a series that is zero modulo its order")]
    DivisionByIndeterminate,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("integral of a series with a nonzero x^-1 term")]
    ResidueObstruction,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("convention mismatch: {0}")]
    ConventionMismatch(String),
    #[error("unbounded principal part: {0}")]
    UnboundedPrincipalPart(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("product escapes the degree cap: {0}")]
    OverflowBeyondCap(String),
    #[error("generated family exceeds the size cap ({0})")]
    BasisExplosion(usize),
    #[error("incompatible pair: {0}")]
    IncompatiblePair(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("validation failed: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn exhausted(msg: impl Into<String>) -> Error {
    Error::PrecisionExhausted(msg.into())
}
