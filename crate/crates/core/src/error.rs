//! Error type shared by all modules of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A membership matrix violates the column-stochastic contract.
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    /// Operands do not share the same cluster capacity and point count.
    #[error("dimension mismatch: expected {expected_ell}x{expected_m}, got {got_ell}x{got_m}")]
    DimensionMismatch {
        expected_ell: usize,
        expected_m: usize,
        got_ell: usize,
        got_m: usize,
    },

    /// A data-point index is outside `0..m`.
    #[error("point index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    /// An exhaustive enumeration would exceed the configured budget.
    #[error("enumeration of {required} configurations exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    /// Full enumeration of optimal permutations needs `ell!` candidates,
    /// which the configured cap forbids.
    #[error("cluster capacity {ell} exceeds the enumeration cap {cap}")]
    EllTooLarge { ell: usize, cap: usize },

    /// An operation that needs an asymmetric center was given a symmetric one.
    #[error("center partition is symmetric (degree of asymmetry is zero)")]
    SymmetricCenter,

    /// Ball-rejection sampling failed to produce an accepted draw.
    #[error("rejection sampling exhausted {retries} retries")]
    RejectionExhausted { retries: u32 },

    /// An operation requires hard partitions but was given soft ones.
    #[error("hard partitions required: {0}")]
    HardPartitionRequired(&'static str),

    /// A nonempty collection was required.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// A scalar argument is outside its documented range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable tag for reports and CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidMatrix(_) => "invalid-matrix",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::EllTooLarge { .. } => "ell-too-large",
            Error::SymmetricCenter => "symmetric-center",
            Error::RejectionExhausted { .. } => "rejection-exhausted",
            Error::HardPartitionRequired(_) => "hard-partition-required",
            Error::EmptyInput(_) => "empty-input",
            Error::InvalidArgument(_) => "invalid-argument",
        }
    }
}
