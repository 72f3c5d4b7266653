//! Error taxonomy shared by the whole crate.
//!
//! The CLI maps these onto exit codes: parameter errors → 2, precision
//! exhaustion → 3, domain errors → 4.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input: bad polynomial, rank-deficient
    /// generators, zero element, delta outside (0,1), non-orthonormal
    /// sweep directions, unparsable JSON.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The working precision was not enough to complete an operation
    /// (root refinement did not converge, Gram-Schmidt norm collapsed).
    /// Retrying with higher `precision_bits` usually helps.
    #[error("precision exhausted: {0}")]
    Precision(String),

    /// Structurally valid input outside an operation's domain: divisor of
    /// nonzero degree where degree 0 is required, magnitude guard
    /// violations, reduction norm bounds not satisfied.
    #[error("domain error: {0}")]
    Domain(String),

    /// An internal consistency check failed. This is a bug, not a user error.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
