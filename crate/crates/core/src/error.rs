use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("values belong to different fields")]
    FieldMismatch,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid scalar literal `{0}`")]
    BadScalar(String),

    #[error("matrix shape {rows}x{cols} does not match {len} entries")]
    BadShape { rows: usize, cols: usize, len: usize },

    #[error("columns are not linearly independent")]
    DependentColumns,

    #[error("basis is singular: rank {rank} < dimension {dim}")]
    SingularBasis { rank: usize, dim: usize },

    #[error("an avoided subspace contains the whole search space")]
    CoverageImpossible,

    #[error("field has too few elements for the witness search")]
    FieldTooSmall,

    #[error("layer references must name distinct flags")]
    DuplicateFlag,

    #[error("layers lie in the same column")]
    SameColumn,

    #[error("cycles cross; no height order exists")]
    NotComparable,

    #[error("flag tuple is not transverse")]
    NotTransverse,

    #[error("instance too large for the exact solver ({0} layer slots)")]
    InstanceTooLarge(usize),

    #[error("retry limit exhausted while sampling")]
    RetriesExhausted,

    #[error("cannot reduce mod {p}: denominator divisible by {p}")]
    ReductionFailure { p: u64 },

    #[error("certificate assertion failed: {0}")]
    CertificateViolation(String),

    #[error("internal consistency failure: {0}")]
    InternalInconsistency(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
