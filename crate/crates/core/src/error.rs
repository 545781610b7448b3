//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by state algebra, protocol execution, and attack simulation.
#[derive(Debug, Error)]
pub enum Error {
    /// Two objects that must share a Hilbert-space dimension do not.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A dimension outside the supported set was requested.
    #[error("unsupported dimension {dim}; supported: {supported}")]
    UnsupportedDimension { dim: usize, supported: &'static str },

    /// A value failed a type invariant (norm, modulus, probability mass, ...).
    #[error("invalid value: {0}")]
    InvalidValue(String),

    /// An input was rejected before execution.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// State identification matched more than one family member.
    #[error("ambiguous state match at tolerance {tol}: indices {first:?} and {second:?}")]
    AmbiguousMatch {
        tol: f64,
        first: (usize, usize),
        second: (usize, usize),
    },

    /// Fewer verification runs were supplied than the protocol requires.
    #[error("insufficient data: {required} sifted runs required, {available} available")]
    InsufficientData { required: usize, available: usize },

    /// A record from an unmatched-basis run was used where a sifted run is required.
    #[error("run not sifted: sender basis {sent} != receiver basis {received}")]
    NotSifted { sent: usize, received: usize },

    /// Infrastructure establishment gave up.
    #[error("infrastructure establishment aborted after {attempts} attempts")]
    MaxAttemptsExceeded { attempts: usize },

    /// No usable voting run was found in an untrusted-mode execution.
    #[error("inconclusive: no sifted run with all trits equal to 2 among {runs} runs")]
    Inconclusive { runs: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
