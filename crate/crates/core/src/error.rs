//! Error type shared across the library.

use thiserror::Error;

/// Errors produced by exact and certified-numeric operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// `k` was required to divide `n`.
    #[error("{k} does not divide {n}")]
    Divisibility { k: u64, n: u64 },

    /// Characteristic 2 is outside the supported theory.
    #[error("characteristic 2 is not supported")]
    CharTwo,

    /// A supplied finite-field modulus is reducible.
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u64 },

    /// Squarefreeness was required.
    #[error("polynomial is not squarefree")]
    NotSquarefree,

    /// Hyperelliptic curves need genus >= 2, i.e. deg f >= 5.
    #[error("degree {deg} gives genus < 2")]
    GenusTooSmall { deg: usize },

    /// Group closure exceeded its bound; the generated group is
    /// infinite or larger than the configured limit.
    #[error("group closure exceeded bound {bound}")]
    InfiniteOrUnbounded { bound: usize },

    /// An exact value (square root, fixed point) does not live in the
    /// working field; retry over the suggested larger one.
    #[error("value not in working field; suggested extension parameter {suggestion}")]
    NeedsExtension { suggestion: u64 },

    /// Certification failed at the requested precision; the caller
    /// should retry with more bits.
    #[error("certification failed at {prec} bits")]
    Precision { prec: u32 },

    /// A numeric survivor could not be pinned to an exact value. Never
    /// dropped silently; carries the ball data for the report.
    #[error("ambiguous candidate at {prec} bits: {detail}")]
    AmbiguousCandidate { prec: u32, detail: String },

    /// A counterexample specification violated one of its clauses.
    #[error("specification violated: {clause}")]
    SpecViolation { clause: String },

    /// A verification clause failed; names the clause.
    #[error("verification failed: {clause}")]
    VerificationFailure { clause: String },

    /// No averaging matrix in the deterministic sequence produced an
    /// invertible coordinate change.
    #[error("averaging failed after {attempts} attempts")]
    AveragingFailure { attempts: usize },

    /// The cocycle normalization constant is not a norm in the field.
    #[error("cocycle constant admits no field square root")]
    NormalizationFailure,

    /// The requested case is not covered by an explicit construction.
    #[error("unsupported case: {what}")]
    UnsupportedCase { what: String },

    /// Two operands belong to different fields.
    #[error("field mismatch")]
    FieldMismatch,

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Violated operation precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
