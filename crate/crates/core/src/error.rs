//! Crate-wide error type.
//!
//! Numerical edge cases that have a well-defined extended-real answer (an
//! infinite divergence, say) are returned as values, not errors; the variants
//! here cover genuinely invalid inputs and operations whose result would be
//! meaningless.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability vector is empty")]
    EmptyVector,

    #[error("entry {value} at index {index} is negative or not finite")]
    NegativeEntry { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, outside tolerance {tol} around 1")]
    SumOutOfTolerance { sum: f64, tol: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("count vector mismatch: {detail}")]
    CountMismatch { detail: String },

    #[error("every channel row assigns probability zero to the observed counts")]
    AllLikelihoodsZero,

    #[error("alpha must lie strictly between 1 and infinity, got {alpha}")]
    AlphaOutOfRange { alpha: f64 },

    #[error("value outside function domain: {detail}")]
    DomainError { detail: String },

    #[error("gain matrix is invalid: {detail}")]
    InvalidGainMatrix { detail: String },

    #[error("realisation {index} has zero prior probability")]
    ZeroPriorRealisation { index: usize },

    #[error("enumeration of {size} type classes exceeds the limit of {limit}")]
    SizeLimit { size: u128, limit: u128 },

    #[error("pointwise leakage is not finite on a positive-probability event: {detail}")]
    InfiniteLeakage { detail: String },

    #[error("operation needs at least two distinct channel rows")]
    SingleClass,

    #[error("need at least {needed} usable points in the fit window, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("gap at n={n} is {value}; a log-scale fit needs positive gaps")]
    NonPositiveGap { n: u32, value: f64 },

    #[error("could not parse document: {detail}")]
    Parse { detail: String },
}
