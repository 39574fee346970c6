//! Elementary matrix/tensor kernels: vectorization, Kronecker and Hadamard
//! products, the trace inner product, the canonical shuffle and the
//! Hadamard-sandwich block sum.
//!
//! Vectorization is column-stacking throughout: `vec(T)[j*rows + i] = T[i, j]`
//! (0-based). Serialization layers must state this explicitly since the
//! row-stacking convention is equally common.

use crate::error::{Error, Result};
use crate::matrix::{C64, ComplexMatrix, ComplexVector};

/// Column-stacking vectorization of a matrix.
pub fn vec(t: &ComplexMatrix) -> ComplexVector {
    let (rows, cols) = t.shape();
    let mut out = Vec::with_capacity(rows * cols);
    for j in 0..cols {
        for i in 0..rows {
            out.push(t.get(i, j));
        }
    }
    ComplexVector::new(out).expect("finite entries")
}

/// Inverse of [`vec`]: reshapes a length `rows*cols` vector into a matrix,
/// reading column by column.
pub fn unvec(x: &ComplexVector, rows: usize, cols: usize) -> Result<ComplexMatrix> {
    if x.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "cannot reshape vector of length {} into {}x{}",
            x.len(),
            rows,
            cols
        )));
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| x.get(j * rows + i)))
}

/// Kronecker product `A ⊗ B = [a_ij B]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a.get(i / br, j / bc) * b.get(i % br, j % bc)
    })
}

/// Entrywise (Hadamard) product of equal-shape matrices.
pub fn hadamard(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "hadamard product of {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(ComplexMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) * b.get(i, j)))
}

/// Trace inner product ⟨A, B⟩ = trace(A B*) = Σ a_ij conj(b_ij).
///
/// Equal to the Euclidean inner product of the vectorizations and to
/// 1ᵀ(A ∘ conj(B))1; all routes expand to the same entrywise sum.
pub fn trace_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "trace inner product of {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            acc += a.get(i, j) * b.get(i, j).conj();
        }
    }
    Ok(acc)
}

/// Canonical shuffle: the n²×n² permutation matrix sending z ⊗ x to x ⊗ z.
///
/// Symmetric, orthogonal and self-inverse.
pub fn shuffle(n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            // e_j ⊗ e_i ↦ e_i ⊗ e_j
            m.set(i * n + j, j * n + i, C64::new(1.0, 0.0));
        }
    }
    m
}

/// Weighted block sum Σ_{i,j} c_ij V_ij for an m×m coefficient matrix `c` and
/// an (mr)×(mr) matrix `v` viewed as an m×m grid of r×r blocks, computed via
/// the Hadamard sandwich (1_m ⊗ I_r)* ((C ⊗ 𝟙_r) ∘ V) (1_m ⊗ I_r).
pub fn sum_circ(c: &ComplexMatrix, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !c.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "coefficient matrix must be square, got {}x{}",
            c.rows(),
            c.cols()
        )));
    }
    let m = c.rows();
    if !v.is_square() || m == 0 || v.rows() % m != 0 {
        return Err(Error::DimensionMismatch(format!(
            "block matrix {}x{} does not tile into an {}x{} grid",
            v.rows(),
            v.cols(),
            m,
            m
        )));
    }
    let r = v.rows() / m;
    let weighted = hadamard(&kron(c, &ComplexMatrix::ones(r, r)), v)?;
    // (1_m ⊗ I_r)* W (1_m ⊗ I_r) sums the r×r blocks of W.
    let mut out = ComplexMatrix::zeros(r, r);
    for bi in 0..m {
        for bj in 0..m {
            for i in 0..r {
                for j in 0..r {
                    let val = out.get(i, j) + weighted.get(bi * r + i, bj * r + j);
                    out.set(i, j, val);
                }
            }
        }
    }
    Ok(out)
}
