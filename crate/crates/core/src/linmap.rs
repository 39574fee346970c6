//! Linear matrix maps ℒ: F^{q×q} → F^{n×n} through their two canonical
//! matrix encodings.
//!
//! The *matricization* L ∈ F^{n²×q²} acts on vectorized arguments,
//! `L·vec(V) = vec(ℒ(V))`, and is the stored form since evaluation is the
//! hot path. The *Choi matrix* 𝕃 ∈ F^{nq×nq} collects the images of the
//! standard basis, 𝕃_ij = ℒ(ℰ_ij), and is derived on demand: the two are
//! linked by the entry-permuting reordering of [`crate::reorder`].
//!
//! ℒ is *-linear (ℒ(V*) = ℒ(V)* for all V) exactly when 𝕃 is Hermitian,
//! equivalently when conj(L) = 𝔠_n L 𝔠_q for the canonical shuffles. Over ℂ
//! this coincides with mapping Hermitian matrices to Hermitian matrices;
//! over ℝ preserving symmetric matrices is strictly weaker.
//!
//! Rectangular maps F^{q×r} → F^{n×p} are supported only at the level of the
//! L ↔ 𝕃 conversion, which is plain [`crate::reorder::lambda`] with the
//! appropriate shape; everything else here assumes square input/output.

use crate::error::{Error, Result};
use crate::matrix::{C64, ComplexMatrix, c64};
use crate::reorder::{BlockShape, lambda, lambda_inverse};
use crate::tensorops::{shuffle, sum_circ, unvec, vec};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Scalar field of a map's data. Real-field values are complex entries with
/// zero imaginary part; the field is a runtime property.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

/// A linear matrix map ℒ: F^{q×q} → F^{n×n}, stored as its matricization.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMatrixMap {
    n: usize,
    q: usize,
    l: ComplexMatrix,
}

/// The Choi matrix of a map: the nq×nq block matrix with 𝕃_ij = ℒ(ℰ_ij).
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    n: usize,
    q: usize,
    m: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn new(m: ComplexMatrix, n: usize, q: usize) -> Result<Self> {
        if m.shape() != (n * q, n * q) {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix for ({n}, {q}) must be {0}x{0}, got {1}x{2}",
                n * q,
                m.rows(),
                m.cols()
            )));
        }
        Ok(Self { n, q, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    /// Block 𝕃_ij = ℒ(ℰ_ij), 0-based, each n×n.
    pub fn block(&self, i: usize, j: usize) -> Result<ComplexMatrix> {
        self.m.block(self.n, self.n, i, j)
    }
}

impl LinearMatrixMap {
    /// Wraps a matricization L ∈ F^{n²×q²}.
    pub fn from_matricization(l: ComplexMatrix, n: usize, q: usize) -> Result<Self> {
        if n == 0 || q == 0 {
            return Err(Error::DimensionMismatch("map dimensions must be positive".into()));
        }
        if l.shape() != (n * n, q * q) {
            return Err(Error::DimensionMismatch(format!(
                "matricization for ({n}, {q}) must be {}x{}, got {}x{}",
                n * n,
                q * q,
                l.rows(),
                l.cols()
            )));
        }
        Ok(Self { n, q, l })
    }

    /// Builds the map with the given Choi matrix; the stored matricization is
    /// recovered by the inverse reordering, an exact entry permutation.
    pub fn from_choi(choi: &ChoiMatrix) -> Result<Self> {
        let l = lambda_inverse(&choi.m, BlockShape::square(choi.n, choi.q))?;
        Self::from_matricization(l, choi.n, choi.q)
    }

    /// Builds the map by applying a closure to every basis element ℰ_ij;
    /// the closure must return n×n matrices.
    pub fn from_action<F>(n: usize, q: usize, mut action: F) -> Result<Self>
    where
        F: FnMut(&ComplexMatrix) -> ComplexMatrix,
    {
        let mut l = ComplexMatrix::zeros(n * n, q * q);
        for i in 0..q {
            for j in 0..q {
                let image = action(&ComplexMatrix::elementary(q, q, i, j));
                if image.shape() != (n, n) {
                    return Err(Error::DimensionMismatch(format!(
                        "action must produce {n}x{n} images, got {}x{}",
                        image.rows(),
                        image.cols()
                    )));
                }
                // column vec(E_ij) = e_{j·q+i} of L is vec(ℒ(E_ij))
                let col = vec(&image);
                for row in 0..n * n {
                    l.set(row, j * q + i, col.get(row));
                }
            }
        }
        Self::from_matricization(l, n, q)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn matricization(&self) -> &ComplexMatrix {
        &self.l
    }

    /// Block L_ij ∈ F^{n×q} of the matricization (0-based, grid is n×q).
    pub fn block(&self, i: usize, j: usize) -> Result<ComplexMatrix> {
        self.l.block(self.n, self.q, i, j)
    }

    /// The Choi matrix, computed by the reordering; equal to the blockwise
    /// assembly of ℒ(ℰ_ij) entry for entry.
    pub fn choi(&self) -> ChoiMatrix {
        let m = lambda(&self.l, BlockShape::square(self.n, self.q)).expect("stored shape is valid");
        ChoiMatrix { n: self.n, q: self.q, m }
    }

    /// Evaluates ℒ(V) = unvec(L · vec(V)).
    pub fn apply(&self, v: &ComplexMatrix) -> Result<ComplexMatrix> {
        if v.shape() != (self.q, self.q) {
            return Err(Error::DimensionMismatch(format!(
                "argument must be {0}x{0}, got {1}x{2}",
                self.q,
                v.rows(),
                v.cols()
            )));
        }
        unvec(&self.l.mul_vector(&vec(v))?, self.n, self.n)
    }

    /// Evaluates ℒ(V) = Σ_ij v_ij 𝕃_ij by direct block summation.
    pub fn apply_via_choi_sum(&self, v: &ComplexMatrix) -> Result<ComplexMatrix> {
        if v.shape() != (self.q, self.q) {
            return Err(Error::DimensionMismatch(format!(
                "argument must be {0}x{0}, got {1}x{2}",
                self.q,
                v.rows(),
                v.cols()
            )));
        }
        let choi = self.choi();
        let mut out = ComplexMatrix::zeros(self.n, self.n);
        for i in 0..self.q {
            for j in 0..self.q {
                out = &out + &choi.block(i, j)?.scale(v.get(i, j));
            }
        }
        Ok(out)
    }

    /// Evaluates ℒ(V) through the Hadamard sandwich over the Choi matrix.
    pub fn apply_via_hadamard(&self, v: &ComplexMatrix) -> Result<ComplexMatrix> {
        if v.shape() != (self.q, self.q) {
            return Err(Error::DimensionMismatch(format!(
                "argument must be {0}x{0}, got {1}x{2}",
                self.q,
                v.rows(),
                v.cols()
            )));
        }
        sum_circ(v, self.choi().matrix())
    }

    /// Max-norm deviation of the Choi matrix from Hermitian symmetry.
    pub fn choi_hermitian_deviation(&self) -> f64 {
        self.choi().matrix().hermitian_deviation()
    }

    /// Max-norm deviation from the shuffle identity conj(L) = 𝔠_n L 𝔠_q.
    pub fn shuffle_identity_deviation(&self) -> f64 {
        let shuffled = shuffle(self.n)
            .matmul(&self.l)
            .and_then(|m| m.matmul(&shuffle(self.q)))
            .expect("stored shape is valid");
        self.l
            .conjugate()
            .max_abs_diff(&shuffled)
            .expect("same shape")
    }

    /// Max-norm deviation from the *-linearity criteria: the larger of
    /// |𝕃 − 𝕃*| and |conj(L) − 𝔠_n L 𝔠_q| (the two are entry permutations of
    /// each other and agree exactly).
    pub fn star_linear_deviation(&self) -> f64 {
        self.choi_hermitian_deviation()
            .max(self.shuffle_identity_deviation())
    }

    /// True when both *-linearity criteria hold within `tol` (absolute).
    pub fn is_star_linear(&self, tol: f64) -> bool {
        self.star_linear_deviation() <= tol
    }

    /// Errors with [`Error::NotStarLinear`] when the map fails the criteria.
    pub fn require_star_linear(&self, tol: f64) -> Result<()> {
        let deviation = self.star_linear_deviation();
        if deviation <= tol {
            Ok(())
        } else {
            Err(Error::NotStarLinear { deviation, tol })
        }
    }

    /// Checks that ℒ maps Hermitian (resp. symmetric, over the real field)
    /// matrices to Hermitian matrices.
    ///
    /// The check evaluates ℒ on a deterministic certificate basis of the
    /// Hermitian (or symmetric) matrices — which by linearity is a sufficient
    /// set — plus `trials` seeded random Hermitian arguments. Over ℂ this
    /// property is equivalent to *-linearity; over ℝ it is strictly weaker.
    pub fn is_hermitian_preserving(&self, field: Field, trials: usize, seed: u64, tol: f64) -> bool {
        let q = self.q;
        let mut witnesses: Vec<ComplexMatrix> = Vec::new();
        for i in 0..q {
            witnesses.push(ComplexMatrix::elementary(q, q, i, i));
        }
        for i in 0..q {
            for j in (i + 1)..q {
                let sym = &ComplexMatrix::elementary(q, q, i, j) + &ComplexMatrix::elementary(q, q, j, i);
                witnesses.push(sym);
                if field == Field::Complex {
                    let skew = (&ComplexMatrix::elementary(q, q, i, j)
                        - &ComplexMatrix::elementary(q, q, j, i))
                        .scale(c64(0.0, 1.0));
                    witnesses.push(skew);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let g = random_matrix(&mut rng, q, q, field);
            witnesses.push(g.hermitian_part().expect("square"));
        }
        witnesses.iter().all(|v| {
            let image = self.apply(v).expect("shape checked");
            image.hermitian_deviation() <= tol * image.max_abs().max(1.0)
        })
    }

    /// Row stack of the vectorized blocks vec(L_ij)ᵀ in row-major (i, j)
    /// order; its row space is the block span, computed independently of the
    /// Choi matrix.
    pub fn block_vec_stack(&self) -> ComplexMatrix {
        let (n, q) = (self.n, self.q);
        ComplexMatrix::from_fn(n * q, n * q, |row, col| {
            let (i, j) = (row / q, row % q);
            // entry `col` of vec(L_ij): column-major within the block
            let (bl, bk) = (col / n, col % n);
            self.l.get(i * n + bk, j * q + bl)
        })
    }
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, field: Field) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = match field {
            Field::Real => 0.0,
            Field::Complex => rng.sample(StandardNormal),
        };
        c64(re, im)
    })
}

/// Deterministic pseudo-random *-linear map whose Choi matrix is Hermitian
/// with numerical rank exactly `rank`.
///
/// The Choi matrix is assembled as G*DG with D a real diagonal of `rank`
/// entries of magnitude in [0.5, 2] and random sign, and G a `rank`×nq matrix
/// with orthonormal rows, then symmetrized entrywise so Hermiticity is exact
/// in floating point.
pub fn random_star_linear(n: usize, q: usize, rank: usize, seed: u64) -> Result<LinearMatrixMap> {
    let dim = n * q;
    if rank == 0 || rank > dim {
        return Err(Error::InvalidRank { rank, max: dim });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = orthonormal_rows(&mut rng, rank, dim, Field::Complex);
    let mut weighted = ComplexMatrix::zeros(rank, dim);
    for k in 0..rank {
        let mag = 0.5 + 1.5 * rng.gen::<f64>();
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        for j in 0..dim {
            weighted.set(k, j, g.get(k, j).scale(sign * mag));
        }
    }
    let choi_raw = g.adjoint().matmul(&weighted)?;
    let choi = ChoiMatrix::new(choi_raw.hermitian_part()?, n, q)?;
    LinearMatrixMap::from_choi(&choi)
}

/// Rows of a random matrix orthonormalized by modified Gram-Schmidt.
fn orthonormal_rows<R: Rng>(rng: &mut R, rows: usize, cols: usize, field: Field) -> ComplexMatrix {
    assert!(rows <= cols);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(rows);
    while basis.len() < rows {
        let candidate = random_matrix(rng, 1, cols, field);
        let mut v: Vec<C64> = candidate.entries().to_vec();
        for b in &basis {
            let coeff: C64 = v.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum();
            for (x, y) in v.iter_mut().zip(b.iter()) {
                *x -= coeff * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for x in v.iter_mut() {
                *x = x.scale(1.0 / norm);
            }
            basis.push(v);
        }
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| basis[i][j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric;
    use crate::samples;
    use crate::tensorops::kron;

    fn random_map(n: usize, q: usize, seed: u64) -> LinearMatrixMap {
        random_star_linear(n, q, n * q, seed).unwrap()
    }

    #[test]
    fn identity_map_round_trips() {
        let map = samples::identity_map(3);
        let v = ComplexMatrix::from_fn(3, 3, |i, j| c64(i as f64, j as f64));
        assert_eq!(map.apply(&v).unwrap(), v);

        let choi = map.choi();
        let back = LinearMatrixMap::from_choi(&choi).unwrap();
        assert_eq!(back, map);
    }

    #[test]
    fn zero_map_behaves() {
        let map = LinearMatrixMap::from_matricization(ComplexMatrix::zeros(4, 4), 2, 2).unwrap();
        let v = ComplexMatrix::ones(2, 2);
        assert_eq!(map.apply(&v).unwrap(), ComplexMatrix::zeros(2, 2));
        assert_eq!(map.choi().matrix(), &ComplexMatrix::zeros(4, 4));
        assert!(map.is_star_linear(0.0));
    }

    #[test]
    fn shuffle_matricization_is_transpose_map() {
        let map = samples::transpose_map(2);
        for i in 0..2 {
            for j in 0..2 {
                let image = map.apply(&ComplexMatrix::elementary(2, 2, i, j)).unwrap();
                assert_eq!(image, ComplexMatrix::elementary(2, 2, j, i));
            }
        }
        let v = ComplexMatrix::from_fn(2, 2, |i, j| c64((2 * i + j) as f64, 1.0));
        assert_eq!(map.apply(&v).unwrap(), v.transpose());
    }

    #[test]
    fn choi_matches_definitional_assembly_exactly() {
        let map = random_map(3, 2, 11);
        let choi = map.choi();
        for i in 0..2 {
            for j in 0..2 {
                let block = choi.block(i, j).unwrap();
                let image = map.apply(&ComplexMatrix::elementary(2, 2, i, j)).unwrap();
                assert_eq!(block, image);
            }
        }
    }

    #[test]
    fn choi_of_identity_map() {
        let map = samples::identity_map(2);
        let expected = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(map.choi().matrix(), &expected);
        // rank-one structure: vec(I) vec(I)ᵀ
        let v = vec(&ComplexMatrix::identity(2));
        assert_eq!(map.choi().matrix(), &v.outer(&v));
    }

    #[test]
    fn rank_one_choi_gives_identity_map() {
        let v = vec(&ComplexMatrix::identity(2));
        let choi = ChoiMatrix::new(v.outer(&v), 2, 2).unwrap();
        let map = LinearMatrixMap::from_choi(&choi).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let e = ComplexMatrix::elementary(2, 2, i, j);
                assert!(map.apply(&e).unwrap().approx_eq(&e, 1e-14));
            }
        }
    }

    #[test]
    fn symmetric_output_map_fixture() {
        let map = samples::symmetric_output_map();
        // evaluation matches the defining formula
        let v = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let image = map.apply(&v).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[
            &[3.0, 0.0, 0.0],
            &[0.0, 7.0, 0.0],
            &[0.0, 0.0, 0.0],
        ]);
        assert_eq!(image, expected);

        // Choi matrix equals the known 6x6 pattern, which is not symmetric
        let choi = map.choi();
        assert_eq!(choi.matrix(), &samples::symmetric_output_map_choi());
        assert!(!map.is_star_linear(1e-10));

        // first Choi block is the image of E_11
        assert_eq!(
            choi.block(0, 0).unwrap(),
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]])
        );

        // ...yet it maps symmetric matrices to symmetric matrices
        assert!(map.is_hermitian_preserving(Field::Real, 25, 7, 1e-12));
        // over the complex field the gap closes: not Hermitian-preserving
        assert!(!map.is_hermitian_preserving(Field::Complex, 25, 7, 1e-12));

        // diagonal Choi blocks are still Hermitian for symmetric-preserving
        // real maps
        for i in 0..2 {
            assert!(choi.block(i, i).unwrap().is_hermitian(0.0));
        }
    }

    #[test]
    fn evaluation_routes_agree() {
        let map = random_map(3, 2, 23);
        for t in 0..10 {
            let v = ComplexMatrix::from_fn(2, 2, |i, j| {
                c64(
                    ((i + 2 * j + t) as f64).sin(),
                    ((3 * i + j) as f64 - t as f64).cos(),
                )
            });
            let direct = map.apply(&v).unwrap();
            let via_sum = map.apply_via_choi_sum(&v).unwrap();
            let via_had = map.apply_via_hadamard(&v).unwrap();
            let scale = direct.max_abs().max(1.0);
            assert!(direct.approx_eq(&via_sum, 1e-12 * scale));
            assert!(direct.approx_eq(&via_had, 1e-12 * scale));
        }
    }

    #[test]
    fn star_linear_maps_respect_adjoints() {
        let map = random_map(2, 3, 5);
        assert!(map.is_star_linear(1e-10));
        let v = ComplexMatrix::from_fn(3, 3, |i, j| c64(0.3 * i as f64 - j as f64, (i * j) as f64));
        let lhs = map.apply(&v.adjoint()).unwrap();
        let rhs = map.apply(&v).unwrap().adjoint();
        assert!(lhs.approx_eq(&rhs, 1e-12 * rhs.max_abs().max(1.0)));
        assert!(map.is_hermitian_preserving(Field::Complex, 10, 3, 1e-10));
    }

    #[test]
    fn non_hermitian_perturbation_detected() {
        let mut choi_m = ComplexMatrix::identity(4);
        choi_m.set(0, 1, c64(0.1, 0.05));
        let choi = ChoiMatrix::new(choi_m, 2, 2).unwrap();
        let map = LinearMatrixMap::from_choi(&choi).unwrap();
        assert!(!map.is_star_linear(1e-10));
        assert!(!map.is_hermitian_preserving(Field::Complex, 5, 1, 1e-10));
        // E_11 already witnesses the violation
        let image = map.apply(&ComplexMatrix::elementary(2, 2, 0, 0)).unwrap();
        assert!(image.hermitian_deviation() > 1e-3);
    }

    #[test]
    fn random_star_linear_has_requested_rank() {
        for rank in 1..=6 {
            let map = random_star_linear(3, 2, rank, 40 + rank as u64).unwrap();
            assert!(map.is_star_linear(1e-12));
            assert_eq!(map.choi().matrix().hermitian_deviation(), 0.0);
            assert_eq!(numeric::numerical_rank(map.choi().matrix(), 1e-9), rank);
        }
        assert!(matches!(
            random_star_linear(2, 2, 5, 1),
            Err(Error::InvalidRank { .. })
        ));
        assert!(matches!(
            random_star_linear(2, 2, 0, 1),
            Err(Error::InvalidRank { .. })
        ));
    }

    #[test]
    fn random_star_linear_is_deterministic() {
        let a = random_star_linear(3, 2, 4, 99).unwrap();
        let b = random_star_linear(3, 2, 4, 99).unwrap();
        assert_eq!(a, b);
        let c = random_star_linear(3, 2, 4, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn block_vec_stack_matches_blocks() {
        let map = random_map(3, 2, 77);
        let stack = map.block_vec_stack();
        assert_eq!(stack.shape(), (6, 6));
        for i in 0..3 {
            for j in 0..2 {
                let row = i * 2 + j;
                let block_vec = vec(&map.block(i, j).unwrap());
                for col in 0..6 {
                    assert_eq!(stack.get(row, col), block_vec.get(col));
                }
            }
        }
        // same singular values as the Choi matrix (columns are the same
        // vectors up to arrangement)
        let s1 = numeric::singular_values(&stack);
        let s2 = numeric::singular_values(map.choi().matrix());
        for (a, b) in s1.iter().zip(s2.iter()) {
            assert!((a - b).abs() <= 1e-10 * b.max(1.0));
        }
    }

    #[test]
    fn kron_map_matricization() {
        // the map V ↦ W V W* has matricization conj(W) ⊗ W
        let w = ComplexMatrix::from_fn(3, 2, |i, j| c64((i + j) as f64, (i as f64) - 0.5 * j as f64));
        let map = LinearMatrixMap::from_action(3, 2, |e| {
            w.matmul(e).unwrap().matmul(&w.adjoint()).unwrap()
        })
        .unwrap();
        let expected = kron(&w.conjugate(), &w);
        assert!(map.matricization().approx_eq(&expected, 1e-12 * expected.max_abs()));
        assert!(map.is_star_linear(1e-12));
        assert_eq!(numeric::numerical_rank(map.choi().matrix(), 1e-9), 1);
    }

    #[test]
    fn dimension_errors() {
        assert!(LinearMatrixMap::from_matricization(ComplexMatrix::zeros(4, 4), 2, 3).is_err());
        assert!(ChoiMatrix::new(ComplexMatrix::zeros(5, 5), 2, 2).is_err());
        let map = samples::identity_map(2);
        assert!(map.apply(&ComplexMatrix::zeros(3, 3)).is_err());
    }
}
