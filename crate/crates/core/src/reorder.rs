//! The block reordering Λ between block layouts of a matrix.
//!
//! For S ∈ F^{np×qr} viewed as a p×r grid of n×q blocks S_ij, the reordering
//! Λ places vec(S_ij) into column (j−1)p+i of the image R ∈ F^{nq×pr}. It is
//! a pure permutation of entries, so round-trips are bit-exact; this is the
//! map that links the matricization of a linear matrix map with its Choi
//! matrix. Its inverse is the reordering of the same family with the roles
//! of the inner column count and the grid row count exchanged.

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tensorops::shuffle;

/// Shape data for the reordering: the source S ∈ F^{np×qr} is a p×r grid of
/// n×q blocks; the image lives in F^{nq×pr}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockShape {
    pub n: usize,
    pub q: usize,
    pub p: usize,
    pub r: usize,
}

impl BlockShape {
    pub fn new(n: usize, q: usize, p: usize, r: usize) -> Result<Self> {
        if n == 0 || q == 0 || p == 0 || r == 0 {
            return Err(Error::DimensionMismatch(
                "block shape dimensions must be positive".into(),
            ));
        }
        Ok(Self { n, q, p, r })
    }

    /// Square-map shape: matricization in F^{n²×q²}, Choi matrix in F^{nq×nq}.
    pub fn square(n: usize, q: usize) -> Self {
        Self { n, q, p: n, r: q }
    }

    /// Dimensions of the source matrix (np, qr).
    pub fn source_dims(&self) -> (usize, usize) {
        (self.n * self.p, self.q * self.r)
    }

    /// Dimensions of the image matrix (nq, pr).
    pub fn image_dims(&self) -> (usize, usize) {
        (self.n * self.q, self.p * self.r)
    }

    /// The shape under which `lambda` inverts this one: q and p trade places.
    pub fn inverse(&self) -> Self {
        Self { n: self.n, q: self.p, p: self.q, r: self.r }
    }
}

/// Applies the reordering: column (j−1)p+i of the result is vec(S_ij).
///
/// Implemented as an index permutation with no arithmetic. In entry terms
/// (1-based, with S_ij = [v_kl^{ij}] and R_lj = [w_ki^{lj}]):
/// `R[(l−1)n+k, (j−1)p+i] = S[(i−1)n+k, (j−1)q+l]`.
pub fn lambda(s: &ComplexMatrix, shape: BlockShape) -> Result<ComplexMatrix> {
    if s.shape() != shape.source_dims() {
        return Err(Error::DimensionMismatch(format!(
            "reordering expects a {}x{} source, got {}x{}",
            shape.n * shape.p,
            shape.q * shape.r,
            s.rows(),
            s.cols()
        )));
    }
    let BlockShape { n, q, p, r } = shape;
    let mut out = ComplexMatrix::zeros(n * q, p * r);
    for i in 0..p {
        for j in 0..r {
            for k in 0..n {
                for l in 0..q {
                    out.set(l * n + k, j * p + i, s.get(i * n + k, j * q + l));
                }
            }
        }
    }
    Ok(out)
}

/// Inverse reordering: recovers S from R = Λ(S). `shape` describes the
/// original source S, exactly as passed to [`lambda`].
pub fn lambda_inverse(r: &ComplexMatrix, shape: BlockShape) -> Result<ComplexMatrix> {
    if r.shape() != shape.image_dims() {
        return Err(Error::DimensionMismatch(format!(
            "inverse reordering expects a {}x{} image, got {}x{}",
            shape.n * shape.q,
            shape.p * shape.r,
            r.rows(),
            r.cols()
        )));
    }
    lambda(r, shape.inverse())
}

/// Independent entrywise test for R = Λ(S): checks v_kl^{ij} = w_ki^{lj} for
/// every index quadruple. Exact comparison; used as the oracle for [`lambda`].
pub fn lambda_entrywise_oracle(
    s: &ComplexMatrix,
    r: &ComplexMatrix,
    shape: BlockShape,
) -> Result<bool> {
    if s.shape() != shape.source_dims() || r.shape() != shape.image_dims() {
        return Err(Error::DimensionMismatch(
            "oracle operands do not match the block shape".into(),
        ));
    }
    let BlockShape { n, q, p, r: rr } = shape;
    for i in 0..p {
        for j in 0..rr {
            for k in 0..n {
                for l in 0..q {
                    if s.get(i * n + k, j * q + l) != r.get(l * n + k, j * p + i) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// True when Λ(S) is Hermitian for S ∈ F^{n²×q²}, checked two ways: the
/// shuffle identity conj(S) = 𝔠_n S 𝔠_q and the entrywise condition
/// v_kl^{ij} = conj(v_ij^{kl}); both deviations must stay within `tol`
/// (absolute max-norm).
pub fn is_lambda_image_hermitian(
    s: &ComplexMatrix,
    n: usize,
    q: usize,
    tol: f64,
) -> Result<bool> {
    if s.shape() != (n * n, q * q) {
        return Err(Error::DimensionMismatch(format!(
            "expected a {}x{} matrix, got {}x{}",
            n * n,
            q * q,
            s.rows(),
            s.cols()
        )));
    }
    // Route 1: conj(S) = 𝔠_n S 𝔠_q. Shuffle products permute entries, so this
    // is exact arithmetic.
    let shuffled = shuffle(n).matmul(s)?.matmul(&shuffle(q))?;
    let dev_shuffle = s.conjugate().max_abs_diff(&shuffled)?;

    // Route 2: v_kl^{ij} = conj(v_ij^{kl}) over all quadruples.
    let mut dev_entry: f64 = 0.0;
    for i in 0..n {
        for j in 0..q {
            for k in 0..n {
                for l in 0..q {
                    let lhs = s.get(i * n + k, j * q + l);
                    let rhs = s.get(k * n + i, l * q + j).conj();
                    dev_entry = dev_entry.max((lhs - rhs).norm());
                }
            }
        }
    }

    Ok(dev_shuffle <= tol && dev_entry <= tol)
}
