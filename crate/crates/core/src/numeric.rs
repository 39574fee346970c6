//! Decomposition-backed numerics: singular values, numerical rank, null
//! spaces, least squares and Hermitian eigenvalues.
//!
//! Everything here delegates to nalgebra on small dense matrices; the rest of
//! the crate works with [`ComplexMatrix`] and converts at this boundary. All
//! solves go through orthogonal factorizations, never explicit inverses.

use crate::error::{Error, Result};
use crate::matrix::{C64, ComplexMatrix};
use nalgebra::DMatrix;

pub(crate) fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<C64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j))
}

pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let svd = to_nalgebra(m).svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Count of singular values exceeding `tol_rel * sigma_max`.
pub fn numerical_rank(m: &ComplexMatrix, tol_rel: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        None => 0,
        Some(&smax) if smax == 0.0 => 0,
        Some(&smax) => s.iter().filter(|&&x| x > tol_rel * smax).count(),
    }
}

/// Orthonormal basis of the null space as matrix columns; the result has
/// zero columns when the matrix has full column rank.
pub fn nullspace(m: &ComplexMatrix, tol_rel: f64) -> ComplexMatrix {
    let cols = m.cols();
    if m.is_empty() {
        // Empty row stack: the kernel is everything.
        return ComplexMatrix::identity(cols);
    }
    // The SVD below is thin; pad with zero rows so V is complete and the
    // kernel directions beyond min(rows, cols) are not truncated.
    let padded = if m.rows() < cols {
        let mut p = ComplexMatrix::zeros(cols, cols);
        for i in 0..m.rows() {
            for j in 0..cols {
                p.set(i, j, m.get(i, j));
            }
        }
        p
    } else {
        m.clone()
    };
    let svd = to_nalgebra(&padded).svd(false, true);
    let v_t = svd.v_t.expect("SVD with v requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let rank = if smax == 0.0 {
        0
    } else {
        svd.singular_values.iter().filter(|&&x| x > tol_rel * smax).count()
    };
    // Rows rank.. of V* span the kernel; conjugate-transpose them to columns.
    let k = cols - rank;
    ComplexMatrix::from_fn(cols, k, |i, j| v_t[(rank + j, i)].conj())
}

/// The right factor of a rank-revealing factorization: the top `rank` rows
/// of V* from the SVD, so that the row space matches the row space of `m`
/// and the kernels coincide.
pub fn row_space_basis(m: &ComplexMatrix, tol_rel: f64) -> ComplexMatrix {
    if m.is_empty() {
        return ComplexMatrix::zeros(0, m.cols());
    }
    let svd = to_nalgebra(m).svd(false, true);
    let v_t = svd.v_t.expect("SVD with v requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let rank = if smax == 0.0 {
        0
    } else {
        svd.singular_values.iter().filter(|&&x| x > tol_rel * smax).count()
    };
    ComplexMatrix::from_fn(rank, m.cols(), |i, j| v_t[(i, j)])
}

/// Minimum-norm least-squares solution of `A X = B` via the SVD
/// pseudo-inverse with relative cutoff `tol_rel`.
pub fn lstsq(a: &ComplexMatrix, b: &ComplexMatrix, tol_rel: f64) -> Result<ComplexMatrix> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "lstsq: {}x{} system with {}x{} right-hand side",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if a.cols() == 0 || a.rows() == 0 {
        return Ok(ComplexMatrix::zeros(a.cols(), b.cols()));
    }
    let svd = to_nalgebra(a).svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = if smax == 0.0 { f64::EPSILON } else { tol_rel * smax };
    let x = svd
        .solve(&to_nalgebra(b), eps)
        .map_err(|e| Error::Numerical(format!("SVD solve failed: {e}")))?;
    Ok(from_nalgebra(&x))
}

/// Solves the square system `A X = B` through a QR factorization.
pub fn solve_square(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() || a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "solve: {}x{} system with {}x{} right-hand side",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if a.rows() == 0 {
        return Ok(ComplexMatrix::zeros(0, b.cols()));
    }
    let qr = to_nalgebra(a).qr();
    let x = qr
        .solve(&to_nalgebra(b))
        .ok_or_else(|| Error::Numerical("QR solve on a singular system".into()))?;
    Ok(from_nalgebra(&x))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigenvalues of non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let eig = nalgebra::SymmetricEigen::new(to_nalgebra(m));
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

/// Smallest and largest singular values as a pair `(sigma_min, sigma_max)`;
/// `(0, 0)` for an empty matrix.
pub fn sigma_extremes(m: &ComplexMatrix) -> (f64, f64) {
    let s = singular_values(m);
    match (s.last(), s.first()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0.0, 0.0),
    }
}
