//! Dense complex matrices and vectors: the universal carrier for every
//! operation in this crate.
//!
//! Entries are `Complex64` stored row-major. Real-field data is represented
//! as complex values with zero imaginary parts; the field is a runtime
//! property, not a compile-time mode. Matrices are small (the dimensions of
//! interest are products of map dimensions), so all kernels are plain loops.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

/// Shorthand used throughout the crate.
pub type C64 = Complex64;

/// Complex scalar from real and imaginary parts.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense rectangular matrix over the complex numbers, row-major storage.
///
/// Values are immutable after construction; every operation returns a new
/// matrix. Degenerate shapes with zero rows or columns are permitted so that
/// the empty representation of the zero map stays representable.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting length mismatches
    /// and non-finite values.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        for (idx, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFiniteEntry(idx));
            }
        }
        Ok(Self { rows, cols, entries })
    }

    /// Internal constructor for entries already known to be finite.
    pub(crate) fn from_parts(rows: usize, cols: usize, entries: Vec<C64>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Self { rows, cols, entries }
    }

    /// Zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_parts(rows, cols, vec![C64::new(0.0, 0.0); rows * cols])
    }

    /// Identity matrix I_n.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    /// All-one matrix.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_parts(rows, cols, vec![C64::new(1.0, 0.0); rows * cols])
    }

    /// Standard basis matrix with a single 1 at `(i, j)` (0-based).
    pub fn elementary(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        assert!(i < rows && j < cols, "elementary index out of range");
        let mut m = Self::zeros(rows, cols);
        m.entries[i * cols + j] = C64::new(1.0, 0.0);
        m
    }

    /// Permutation matrix of size n interchanging rows/columns `i` and `j`
    /// (0-based); the identity when `i == j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        assert!(i < n && j < n, "transposition index out of range");
        let mut m = Self::identity(n);
        if i != j {
            m.entries[i * n + i] = C64::new(0.0, 0.0);
            m.entries[j * n + j] = C64::new(0.0, 0.0);
            m.entries[i * n + j] = C64::new(1.0, 0.0);
            m.entries[j * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix by evaluating `f(i, j)` at every position.
    pub fn from_fn<F: FnMut(usize, usize) -> C64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::from_parts(rows, cols, entries)
    }

    /// Convenience constructor from rows of real values.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| C64::new(x, 0.0)));
        }
        Self::from_parts(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: C64) {
        self.entries[i * self.cols + j] = v;
    }

    /// Row-major view of the entries.
    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conjugate(&self) -> Self {
        Self::from_parts(self.rows, self.cols, self.entries.iter().map(|z| z.conj()).collect())
    }

    /// Conjugate transpose A*.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_parts(self.rows, self.cols, self.entries.iter().map(|z| z * s).collect())
    }

    /// Matrix product, checking inner dimensions.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<C64> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "trace of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm of the difference; shapes must match.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compare {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// True when every entry difference is at most `tol` in modulus.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.shape() == other.shape() && self.max_abs_diff(other).unwrap() <= tol
    }

    /// Max-norm deviation from Hermitian symmetry, max |A - A*|.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols.min(self.rows) {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermitian_deviation() <= tol
    }

    /// Extracts the `(bi, bj)` block (0-based) of size `br x bc` from a
    /// matrix partitioned into a grid of equally sized blocks.
    pub fn block(&self, br: usize, bc: usize, bi: usize, bj: usize) -> Result<Self> {
        if self.rows % br != 0 || self.cols % bc != 0 {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix does not tile into {}x{} blocks",
                self.rows, self.cols, br, bc
            )));
        }
        if (bi + 1) * br > self.rows || (bj + 1) * bc > self.cols {
            return Err(Error::DimensionMismatch(format!(
                "block ({}, {}) out of range",
                bi, bj
            )));
        }
        Ok(Self::from_fn(br, bc, |i, j| self.get(bi * br + i, bj * bc + j)))
    }

    /// The matrix (A + A*)/2; exact entrywise symmetrization.
    pub fn hermitian_part(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("hermitian part of non-square matrix".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        }))
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::from_parts((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn mul_vector(&self, x: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} to vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self.get(i, j) * x.get(j);
            }
            out[i] = acc;
        }
        Ok(ComplexVector::from_parts(out))
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        ComplexMatrix::from_parts(
            self.rows,
            self.cols,
            self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        ComplexMatrix::from_parts(
            self.rows,
            self.cols,
            self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        )
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, other: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(other).expect("shape mismatch in mul")
    }
}

/// Dense complex column vector.
#[derive(Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<C64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        for (idx, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFiniteEntry(idx));
            }
        }
        Ok(Self { entries })
    }

    pub(crate) fn from_parts(entries: Vec<C64>) -> Self {
        Self { entries }
    }

    pub fn zeros(len: usize) -> Self {
        Self::from_parts(vec![C64::new(0.0, 0.0); len])
    }

    /// Standard basis vector e_j (0-based) of the given length.
    pub fn basis(len: usize, j: usize) -> Self {
        assert!(j < len, "basis index out of range");
        let mut v = Self::zeros(len);
        v.entries[j] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::from_parts(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> C64 {
        self.entries[i]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn conjugate(&self) -> Self {
        Self::from_parts(self.entries.iter().map(|z| z.conj()).collect())
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hermitian inner product ⟨self, other⟩ = Σ self_i · conj(other_i).
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "inner product of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    /// Kronecker (tensor) product of vectors: (a ⊗ b)_{(i-1)m+j} = a_i b_j.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.entries {
            for b in &other.entries {
                out.push(a * b);
            }
        }
        Self::from_parts(out)
    }

    /// Outer product a bᵀ (no conjugation).
    pub fn outer(&self, other: &Self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.len(), other.len(), |i, j| self.get(i) * other.get(j))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch("vector length mismatch".into()));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexVector [")?;
        for z in &self.entries {
            write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
        }
        write!(f, "]")
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.entries[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_rejects_bad_length() {
        let res = ComplexMatrix::new(2, 2, vec![c64(1.0, 0.0); 3]);
        assert!(matches!(res, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn new_rejects_non_finite() {
        let res = ComplexMatrix::new(1, 2, vec![c64(1.0, 0.0), c64(f64::NAN, 0.0)]);
        assert!(matches!(res, Err(Error::NonFiniteEntry(1))));
        let res = ComplexVector::new(vec![c64(0.0, f64::INFINITY)]);
        assert!(matches!(res, Err(Error::NonFiniteEntry(0))));
    }

    #[test]
    fn elementary_and_transposition() {
        let e = ComplexMatrix::elementary(2, 3, 0, 2);
        assert_eq!(e.get(0, 2), c64(1.0, 0.0));
        assert_eq!(e.frobenius_norm(), 1.0);

        let p = ComplexMatrix::transposition(3, 0, 2);
        let x = ComplexVector::from_real(&[1.0, 2.0, 3.0]);
        let y = p.mul_vector(&x).unwrap();
        assert_eq!(y.entries(), &[c64(3.0, 0.0), c64(2.0, 0.0), c64(1.0, 0.0)]);
        // involution
        assert!(p.matmul(&p).unwrap().approx_eq(&ComplexMatrix::identity(3), 0.0));
    }

    #[test]
    fn adjoint_is_conjugate_transpose() {
        let a = ComplexMatrix::from_parts(1, 2, vec![c64(1.0, 2.0), c64(3.0, -4.0)]);
        let s = a.adjoint();
        assert_eq!(s.shape(), (2, 1));
        assert_eq!(s.get(0, 0), c64(1.0, -2.0));
        assert_eq!(s.get(1, 0), c64(3.0, 4.0));
    }

    #[test]
    fn block_extraction() {
        let m = ComplexMatrix::from_fn(4, 6, |i, j| c64((i * 6 + j) as f64, 0.0));
        let b = m.block(2, 3, 1, 1).unwrap();
        assert_eq!(b.get(0, 0), c64(15.0, 0.0));
        assert_eq!(b.get(1, 2), c64(23.0, 0.0));
        assert!(m.block(3, 3, 0, 0).is_err());
    }

    #[test]
    fn hermitian_part_is_exactly_hermitian() {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| c64((i + 2 * j) as f64, (i as f64) - (j as f64)));
        let h = m.hermitian_part().unwrap();
        assert_eq!(h.hermitian_deviation(), 0.0);
    }

    #[test]
    fn empty_matrix_is_representable() {
        let m = ComplexMatrix::zeros(0, 4);
        assert!(m.is_empty());
        assert_eq!(m.shape(), (0, 4));
    }
}
