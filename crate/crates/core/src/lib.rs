//! Minimal Hill representations of *-linear matrix maps.
//!
//! A linear matrix map ℒ: F^{q×q} → F^{n×n} (F = ℝ or ℂ) is *-linear when
//! ℒ(V*) = ℒ(V)* for all V. Such maps admit representations
//!
//! ```text
//! ℒ(V) = Σ_{k,l} H_kl · A_l V A_k*
//! ```
//!
//! with a Hermitian, invertible coefficient matrix H once the number m of
//! matrices A_k is minimal. This crate builds, evaluates, verifies and
//! compares these representations, working from either of two equivalent
//! encodings of ℒ: the matricization L (acting on vectorized arguments) and
//! the Choi matrix 𝕃 (the block matrix of images of basis elements), which
//! are linked by an entry-permuting block reordering.
//!
//! Module map:
//! - [`matrix`]: dense complex matrices/vectors, the universal carrier;
//! - [`tensorops`]: vec/unvec, Kronecker/Hadamard products, trace inner
//!   product, canonical shuffle;
//! - [`reorder`]: the block reordering Λ, its inverse and Hermiticity
//!   characterization;
//! - [`linmap`]: matricization/Choi representations, evaluation and
//!   *-linearity checks;
//! - [`hill`]: minimal Hill representations: basis selection, construction,
//!   verification and comparison;
//! - [`structure`]: block-level vs entry-level structural dualities and the
//!   entry-read Hill matrix;
//! - [`numeric`]: decomposition-backed helpers (rank, null space, least
//!   squares, Hermitian eigenvalues).

pub mod error;
pub mod hill;
pub mod linmap;
pub mod matrix;
pub mod numeric;
pub mod reorder;
pub mod samples;
pub mod structure;
pub mod tensorops;

pub use error::{Error, Result};
pub use hill::{BasisSelection, BasisSource, BasisStrategy, HillRepresentation, RepresentationBridge};
pub use linmap::{ChoiMatrix, Field, LinearMatrixMap, random_star_linear};
pub use matrix::{C64, ComplexMatrix, ComplexVector, c64};
