//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by matrix kernels, map constructions and Hill machinery.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Operand shapes are incompatible with the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A constructor was handed a NaN or infinite entry.
    #[error("non-finite entry at index {0}")]
    NonFiniteEntry(usize),

    /// Requested Choi rank is outside 1..=n*q.
    #[error("invalid rank {rank}: must lie in 1..={max}")]
    InvalidRank { rank: usize, max: usize },

    /// The map fails the *-linearity criteria within the given tolerance.
    #[error("map is not *-linear: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotStarLinear { deviation: f64, tol: f64 },

    /// Supplied matrices do not span the block span of the matricization.
    #[error("span deficient: {0}")]
    SpanDeficient(String),

    /// Basis coefficients fail the biorthogonality relations.
    #[error("biorthogonality violation: {0}")]
    BiorthogonalityViolation(String),

    /// The kernel of a supplied row stack does not match the Choi kernel.
    #[error("kernel mismatch: {0}")]
    KernelMismatch(String),

    /// Two representations reconstruct different maps.
    #[error("representations reconstruct different maps: relative residual {residual:.3e}")]
    DifferentMaps { residual: f64 },

    /// A representation lacks the basis provenance needed for comparison.
    #[error("representation carries no basis provenance")]
    MissingProvenance,

    /// A numerical routine failed to converge or produced no result.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
