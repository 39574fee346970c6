//! Construction, evaluation, verification and comparison of minimal Hill
//! representations ℒ(V) = Σ_{k,l} H_kl A_l V A_k*.
//!
//! The minimal number m of matrices A_k equals the rank of the Choi matrix,
//! which is also the dimension of the span of the blocks L_ij of the
//! matricization. A representation is built from any matrices L_1..L_m
//! spanning that block span: with the unique expansion L_ij = Σ_k α_k^{ij} L_k
//! and any expansion L_k = Σ_ij β_ij^k L_ij one sets
//!
//! ```text
//! A_k = [conj(α_k^{ij})],   B_k = [β_ij^k],   H_kl = ⟨B_k, L_l⟩,
//! ```
//!
//! where ⟨·,·⟩ is the trace inner product. For *-linear maps H is Hermitian
//! and invertible, the Choi matrix factors as 𝕃 = Â* Hᵀ Â through the row
//! stack Â of the vec(conj(A_k))ᵀ, and any two minimal representations are
//! linked by an invertible change of basis (Φ, Ξ).

use crate::error::{Error, Result};
use crate::linmap::LinearMatrixMap;
use crate::matrix::{C64, ComplexMatrix, c64};
use crate::numeric;
use crate::tensorops::{kron, sum_circ, trace_inner, unvec, vec};

/// How the spanning matrices L_1..L_m are chosen.
#[derive(Debug, Clone)]
pub enum BasisStrategy {
    /// Greedy scan over the blocks L_ij in row-major order, keeping each
    /// block that is independent of those already kept. The dual matrices
    /// are then exact basis elements: B_k = ℰ_{i_k j_k}.
    Blocks,
    /// Orthonormal basis of the block span from a pivoted orthogonalization
    /// of the vectorized blocks; β is the minimum-norm expansion.
    Qr,
    /// Caller-provided L_1..L_m; must span the block span exactly.
    UserSupplied(Vec<ComplexMatrix>),
}

/// Provenance tag of a [`BasisSelection`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisSource {
    /// Picked block positions (i_k, j_k), 0-based.
    Blocks(Vec<(usize, usize)>),
    Qr,
    UserSupplied,
}

/// A choice of spanning matrices L_1..L_m for the block span of a map,
/// together with both expansion coefficient families.
///
/// `alpha[k][i*q + j]` holds α_k^{ij} from L_ij = Σ_k α_k^{ij} L_k (unique);
/// `beta[k][i*q + j]` holds β_ij^k from L_k = Σ_ij β_ij^k L_ij (one choice).
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSelection {
    n: usize,
    q: usize,
    ls: Vec<ComplexMatrix>,
    alpha: Vec<Vec<C64>>,
    beta: Vec<Vec<C64>>,
    source: BasisSource,
}

impl BasisSelection {
    /// Assembles a selection from parts, checking shapes only; use
    /// [`BasisSelection::validate`] for the span and biorthogonality
    /// invariants.
    pub fn new(
        n: usize,
        q: usize,
        ls: Vec<ComplexMatrix>,
        alpha: Vec<Vec<C64>>,
        beta: Vec<Vec<C64>>,
        source: BasisSource,
    ) -> Result<Self> {
        let m = ls.len();
        if alpha.len() != m || beta.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "expected {m} coefficient rows, got {} alpha and {} beta",
                alpha.len(),
                beta.len()
            )));
        }
        for l in &ls {
            if l.shape() != (n, q) {
                return Err(Error::DimensionMismatch(format!(
                    "basis matrices must be {n}x{q}, got {}x{}",
                    l.rows(),
                    l.cols()
                )));
            }
        }
        for row in alpha.iter().chain(beta.iter()) {
            if row.len() != n * q {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient rows must have length {}, got {}",
                    n * q,
                    row.len()
                )));
            }
        }
        Ok(Self { n, q, ls, alpha, beta, source })
    }

    pub fn m(&self) -> usize {
        self.ls.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn ls(&self) -> &[ComplexMatrix] {
        &self.ls
    }

    pub fn source(&self) -> &BasisSource {
        &self.source
    }

    pub fn alpha(&self) -> &[Vec<C64>] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Vec<C64>] {
        &self.beta
    }

    /// A_k = [conj(α_k^{ij})] as an n×q matrix.
    pub fn a_matrix(&self, k: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.q, |i, j| self.alpha[k][i * self.q + j].conj())
    }

    /// B_k = [β_ij^k] as an n×q matrix.
    pub fn b_matrix(&self, k: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.q, |i, j| self.beta[k][i * self.q + j])
    }

    pub fn a_matrices(&self) -> Vec<ComplexMatrix> {
        (0..self.m()).map(|k| self.a_matrix(k)).collect()
    }

    pub fn b_matrices(&self) -> Vec<ComplexMatrix> {
        (0..self.m()).map(|k| self.b_matrix(k)).collect()
    }

    /// Checks the selection invariants against a map: the L_k are linearly
    /// independent, they span exactly the block span of the matricization,
    /// both coefficient families reproduce their expansions, and the
    /// biorthogonality ⟨B_k, A_l⟩ = δ_kl holds.
    pub fn validate(&self, map: &LinearMatrixMap, tol: f64) -> Result<()> {
        if (map.n(), map.q()) != (self.n, self.q) {
            return Err(Error::DimensionMismatch(format!(
                "basis is for a ({}, {}) map, got ({}, {})",
                self.n,
                self.q,
                map.n(),
                map.q()
            )));
        }
        let m = self.m();
        let blocks = map.block_vec_stack();
        let block_scale = block_row_scale(&blocks);

        if m == 0 {
            if block_scale > tol {
                return Err(Error::SpanDeficient(
                    "empty selection for a map with nonzero blocks".into(),
                ));
            }
            return Ok(());
        }

        // independence of the L_k
        let lhat = stack_vec_rows(&self.ls);
        let (smin, smax) = numeric::sigma_extremes(&lhat);
        if smax == 0.0 || smin <= tol * smax {
            return Err(Error::SpanDeficient(format!(
                "selected matrices are numerically dependent (sigma ratio {:.3e})",
                if smax == 0.0 { 0.0 } else { smin / smax }
            )));
        }

        // span{L_k} ⊇ blocks and span{L_k} ⊆ span{blocks}
        let residual_blocks = projection_residual(&lhat, &blocks);
        if residual_blocks > tol * block_scale.max(1.0) {
            return Err(Error::SpanDeficient(format!(
                "blocks leave the selected span (residual {residual_blocks:.3e})"
            )));
        }
        let residual_ls = projection_residual(&blocks, &lhat);
        if residual_ls > tol * lhat_scale(&lhat).max(1.0) {
            return Err(Error::SpanDeficient(format!(
                "selected matrices leave the block span (residual {residual_ls:.3e})"
            )));
        }

        // alpha reproduces each block
        for i in 0..self.n {
            for j in 0..self.q {
                let mut acc = ComplexMatrix::zeros(self.n, self.q);
                for k in 0..m {
                    acc = &acc + &self.ls[k].scale(self.alpha[k][i * self.q + j]);
                }
                let block = map.block(i, j)?;
                if acc.max_abs_diff(&block)? > tol * block_scale.max(1.0) {
                    return Err(Error::SpanDeficient(format!(
                        "alpha coefficients fail to reproduce block ({i}, {j})"
                    )));
                }
            }
        }

        // beta reproduces each L_k
        for k in 0..m {
            let mut acc = ComplexMatrix::zeros(self.n, self.q);
            for i in 0..self.n {
                for j in 0..self.q {
                    acc = &acc + &map.block(i, j)?.scale(self.beta[k][i * self.q + j]);
                }
            }
            if acc.max_abs_diff(&self.ls[k])? > tol * block_scale.max(1.0) {
                return Err(Error::BiorthogonalityViolation(format!(
                    "beta coefficients fail to reproduce basis matrix {k}"
                )));
            }
        }

        // ⟨B_k, A_l⟩ = δ_kl
        for k in 0..m {
            let bk = self.b_matrix(k);
            for l in 0..m {
                let inner = trace_inner(&bk, &self.a_matrix(l))?;
                let target = if k == l { c64(1.0, 0.0) } else { c64(0.0, 0.0) };
                if (inner - target).norm() > tol.max(1e-14) {
                    return Err(Error::BiorthogonalityViolation(format!(
                        "⟨B_{k}, A_{l}⟩ = {inner} deviates from {}",
                        if k == l { 1 } else { 0 }
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Row stack of vec(M_k)ᵀ for a family of equal-shape matrices.
fn stack_vec_rows(mats: &[ComplexMatrix]) -> ComplexMatrix {
    if mats.is_empty() {
        return ComplexMatrix::zeros(0, 0);
    }
    let len = mats[0].rows() * mats[0].cols();
    ComplexMatrix::from_fn(mats.len(), len, |k, col| vec(&mats[k]).get(col))
}

fn block_row_scale(stack: &ComplexMatrix) -> f64 {
    let mut scale: f64 = 0.0;
    for i in 0..stack.rows() {
        let mut norm2 = 0.0;
        for j in 0..stack.cols() {
            norm2 += stack.get(i, j).norm_sqr();
        }
        scale = scale.max(norm2.sqrt());
    }
    scale
}

fn lhat_scale(stack: &ComplexMatrix) -> f64 {
    block_row_scale(stack)
}

/// Largest row-wise residual of projecting the rows of `targets` onto the
/// row space of `basis`.
fn projection_residual(basis: &ComplexMatrix, targets: &ComplexMatrix) -> f64 {
    let ortho = numeric::row_space_basis(basis, 1e-13);
    let mut worst: f64 = 0.0;
    for i in 0..targets.rows() {
        let row = ComplexMatrix::from_fn(1, targets.cols(), |_, j| targets.get(i, j));
        // residual = row − (row Q*) Q for orthonormal rows Q
        let coeff = row.matmul(&ortho.adjoint()).expect("shapes agree");
        let projected = coeff.matmul(&ortho).expect("shapes agree");
        worst = worst.max((&row - &projected).frobenius_norm());
    }
    worst
}

/// Minimal number m of matrices in a Hill representation: the numerical rank
/// of the Choi matrix with relative threshold `tol`.
pub fn minimal_rank(map: &LinearMatrixMap, tol: f64) -> usize {
    numeric::numerical_rank(map.choi().matrix(), tol)
}

/// Selects spanning matrices L_1..L_m for the block span of `map`.
///
/// `Blocks` and `Qr` require the map to be *-linear within `tol`;
/// `UserSupplied` skips that check (so a certification run can probe a
/// non-*-linear map) but enforces the span condition. A zero map yields an
/// empty selection.
pub fn select_basis(
    map: &LinearMatrixMap,
    strategy: BasisStrategy,
    tol: f64,
) -> Result<BasisSelection> {
    let (n, q) = (map.n(), map.q());
    let m_rank = minimal_rank(map, tol);
    let blocks = map.block_vec_stack();
    let scale = block_row_scale(&blocks);

    match strategy {
        BasisStrategy::Blocks => {
            map.require_star_linear(tol)?;
            let mut picks: Vec<(usize, usize)> = Vec::new();
            let mut ortho: Vec<Vec<C64>> = Vec::new();
            for i in 0..n {
                for j in 0..q {
                    let row: Vec<C64> =
                        (0..n * q).map(|c| blocks.get(i * q + j, c)).collect();
                    if let Some(unit) = residual_direction(&row, &ortho, tol * scale.max(1.0)) {
                        picks.push((i, j));
                        ortho.push(unit);
                    }
                }
            }
            if picks.len() != m_rank {
                return Err(Error::SpanDeficient(format!(
                    "greedy block selection found {} pivots but the Choi rank is {m_rank}",
                    picks.len()
                )));
            }
            let ls: Vec<ComplexMatrix> = picks
                .iter()
                .map(|&(i, j)| map.block(i, j))
                .collect::<Result<_>>()?;
            let beta: Vec<Vec<C64>> = picks
                .iter()
                .map(|&(i, j)| {
                    let mut row = vec![c64(0.0, 0.0); n * q];
                    row[i * q + j] = c64(1.0, 0.0);
                    row
                })
                .collect();
            let alpha = expand_blocks(map, &ls, tol)?;
            BasisSelection::new(n, q, ls, alpha, beta, BasisSource::Blocks(picks))
        }
        BasisStrategy::Qr => {
            map.require_star_linear(tol)?;
            let ls = pivoted_orthonormal_basis(map, &blocks, tol * scale.max(1.0))?;
            if ls.len() != m_rank {
                return Err(Error::SpanDeficient(format!(
                    "pivoted orthogonalization found {} directions but the Choi rank is {m_rank}",
                    ls.len()
                )));
            }
            let beta = minimum_norm_beta(map, &ls, tol)?;
            let alpha = expand_blocks(map, &ls, tol)?;
            BasisSelection::new(n, q, ls, alpha, beta, BasisSource::Qr)
        }
        BasisStrategy::UserSupplied(ls) => {
            for l in &ls {
                if l.shape() != (n, q) {
                    return Err(Error::DimensionMismatch(format!(
                        "supplied matrices must be {n}x{q}, got {}x{}",
                        l.rows(),
                        l.cols()
                    )));
                }
            }
            if ls.len() != m_rank {
                return Err(Error::SpanDeficient(format!(
                    "{} matrices supplied but the block span has dimension {m_rank}",
                    ls.len()
                )));
            }
            if m_rank > 0 {
                let lhat = stack_vec_rows(&ls);
                let (smin, smax) = numeric::sigma_extremes(&lhat);
                if smax == 0.0 || smin <= tol * smax {
                    return Err(Error::SpanDeficient(
                        "supplied matrices are linearly dependent".into(),
                    ));
                }
                let resid = projection_residual(&blocks, &lhat);
                if resid > tol * lhat_scale(&lhat).max(1.0) {
                    return Err(Error::SpanDeficient(format!(
                        "supplied matrices leave the block span (residual {resid:.3e})"
                    )));
                }
            }
            let beta = minimum_norm_beta(map, &ls, tol)?;
            let alpha = expand_blocks(map, &ls, tol)?;
            BasisSelection::new(n, q, ls, alpha, beta, BasisSource::UserSupplied)
        }
    }
}

/// Component of `candidate` orthogonal to the span of `ortho`, normalized;
/// `None` when the residual norm is at most `threshold`.
fn residual_direction(
    candidate: &[C64],
    ortho: &[Vec<C64>],
    threshold: f64,
) -> Option<Vec<C64>> {
    let mut v = candidate.to_vec();
    for b in ortho {
        let coeff: C64 = v.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum();
        for (x, y) in v.iter_mut().zip(b.iter()) {
            *x -= coeff * y;
        }
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > threshold {
        for x in v.iter_mut() {
            *x = x.scale(1.0 / norm);
        }
        Some(v)
    } else {
        None
    }
}

/// Pivoted modified Gram-Schmidt over the vectorized blocks: repeatedly
/// orthonormalizes the block with the largest residual until all residuals
/// fall below `threshold`. Deterministic; ties break on scan order.
fn pivoted_orthonormal_basis(
    map: &LinearMatrixMap,
    blocks: &ComplexMatrix,
    threshold: f64,
) -> Result<Vec<ComplexMatrix>> {
    let (n, q) = (map.n(), map.q());
    let count = n * q;
    let mut residuals: Vec<Vec<C64>> = (0..count)
        .map(|r| (0..count).map(|c| blocks.get(r, c)).collect())
        .collect();
    let mut basis: Vec<ComplexMatrix> = Vec::new();
    loop {
        let mut best = 0usize;
        let mut best_norm = -1.0;
        for (idx, v) in residuals.iter().enumerate() {
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > best_norm {
                best_norm = norm;
                best = idx;
            }
        }
        if best_norm <= threshold {
            break;
        }
        let unit: Vec<C64> = residuals[best]
            .iter()
            .map(|z| z.scale(1.0 / best_norm))
            .collect();
        for v in residuals.iter_mut() {
            let coeff: C64 = v.iter().zip(unit.iter()).map(|(x, y)| x * y.conj()).sum();
            for (x, y) in v.iter_mut().zip(unit.iter()) {
                *x -= coeff * y;
            }
        }
        let vector = crate::matrix::ComplexVector::new(unit)?;
        basis.push(unvec(&vector, n, q)?);
    }
    Ok(basis)
}

/// Unique least-squares coefficients α with L_ij = Σ_k α_k^{ij} L_k.
fn expand_blocks(
    map: &LinearMatrixMap,
    ls: &[ComplexMatrix],
    tol: f64,
) -> Result<Vec<Vec<C64>>> {
    let (n, q) = (map.n(), map.q());
    let m = ls.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    // columns of K are vec(L_k); columns of RHS are vec(L_ij) in scan order
    let k = stack_vec_rows(ls).transpose();
    let rhs = map.block_vec_stack().transpose();
    let x = numeric::lstsq(&k, &rhs, tol.min(1e-12))?;
    // residual check: blocks must lie in the span
    let err = (&k.matmul(&x)? - &rhs).max_abs();
    let scale = rhs.max_abs().max(1.0);
    if err > tol * scale {
        return Err(Error::SpanDeficient(format!(
            "block expansion residual {err:.3e} exceeds tolerance"
        )));
    }
    Ok((0..m)
        .map(|kk| (0..n * q).map(|c| x.get(kk, c)).collect())
        .collect())
}

/// Minimum-norm coefficients β with L_k = Σ_ij β_ij^k L_ij.
fn minimum_norm_beta(
    map: &LinearMatrixMap,
    ls: &[ComplexMatrix],
    tol: f64,
) -> Result<Vec<Vec<C64>>> {
    let (n, q) = (map.n(), map.q());
    let m = ls.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let blocks_cols = map.block_vec_stack().transpose();
    let rhs = stack_vec_rows(ls).transpose();
    let x = numeric::lstsq(&blocks_cols, &rhs, tol.min(1e-12))?;
    let err = (&blocks_cols.matmul(&x)? - &rhs).max_abs();
    if err > tol * rhs.max_abs().max(1.0) {
        return Err(Error::SpanDeficient(format!(
            "dual expansion residual {err:.3e} exceeds tolerance"
        )));
    }
    Ok((0..m)
        .map(|kk| (0..n * q).map(|c| x.get(c, kk)).collect())
        .collect())
}

/// A Hill representation (m, A_1..A_m, H), optionally carrying the basis it
/// was constructed from.
#[derive(Debug, Clone, PartialEq)]
pub struct HillRepresentation {
    n: usize,
    q: usize,
    h: ComplexMatrix,
    a: Vec<ComplexMatrix>,
    basis: Option<BasisSelection>,
}

impl HillRepresentation {
    /// Assembles a representation from parts, checking shapes only.
    pub fn new(
        n: usize,
        q: usize,
        h: ComplexMatrix,
        a: Vec<ComplexMatrix>,
        basis: Option<BasisSelection>,
    ) -> Result<Self> {
        let m = a.len();
        if h.shape() != (m, m) {
            return Err(Error::DimensionMismatch(format!(
                "Hill matrix must be {m}x{m}, got {}x{}",
                h.rows(),
                h.cols()
            )));
        }
        for mat in &a {
            if mat.shape() != (n, q) {
                return Err(Error::DimensionMismatch(format!(
                    "representation matrices must be {n}x{q}, got {}x{}",
                    mat.rows(),
                    mat.cols()
                )));
            }
        }
        if let Some(b) = &basis {
            if b.m() != m || (b.n(), b.q()) != (n, q) {
                return Err(Error::DimensionMismatch(
                    "basis provenance does not match the representation".into(),
                ));
            }
        }
        Ok(Self { n, q, h, a, basis })
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn h(&self) -> &ComplexMatrix {
        &self.h
    }

    pub fn a(&self) -> &[ComplexMatrix] {
        &self.a
    }

    pub fn basis(&self) -> Option<&BasisSelection> {
        self.basis.as_ref()
    }

    /// Evaluates Σ_{k,l} H_kl A_l V A_k*; the zero-term representation maps
    /// everything to the zero matrix.
    pub fn apply(&self, v: &ComplexMatrix) -> Result<ComplexMatrix> {
        if v.shape() != (self.q, self.q) {
            return Err(Error::DimensionMismatch(format!(
                "argument must be {0}x{0}, got {1}x{2}",
                self.q,
                v.rows(),
                v.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.n, self.n);
        for k in 0..self.m() {
            let ak_star = self.a[k].adjoint();
            for l in 0..self.m() {
                let term = self.a[l].matmul(v)?.matmul(&ak_star)?;
                out = &out + &term.scale(self.h.get(k, l));
            }
        }
        Ok(out)
    }

    /// Same value through the Hadamard sandwich over the grid [A_l V A_k*].
    pub fn apply_via_sum_circ(&self, v: &ComplexMatrix) -> Result<ComplexMatrix> {
        if v.shape() != (self.q, self.q) {
            return Err(Error::DimensionMismatch(format!(
                "argument must be {0}x{0}, got {1}x{2}",
                self.q,
                v.rows(),
                v.cols()
            )));
        }
        let m = self.m();
        if m == 0 {
            return Ok(ComplexMatrix::zeros(self.n, self.n));
        }
        let mut grid = ComplexMatrix::zeros(m * self.n, m * self.n);
        for k in 0..m {
            let ak_star = self.a[k].adjoint();
            for l in 0..m {
                let term = self.a[l].matmul(v)?.matmul(&ak_star)?;
                for i in 0..self.n {
                    for j in 0..self.n {
                        grid.set(k * self.n + i, l * self.n + j, term.get(i, j));
                    }
                }
            }
        }
        sum_circ(&self.h, &grid)
    }

    /// Rebuilds the represented map: L = Σ_{k,l} H_kl conj(A_k) ⊗ A_l.
    pub fn reconstruct(&self) -> LinearMatrixMap {
        let mut l = ComplexMatrix::zeros(self.n * self.n, self.q * self.q);
        for k in 0..self.m() {
            let conj_ak = self.a[k].conjugate();
            for ll in 0..self.m() {
                let term = kron(&conj_ak, &self.a[ll]).scale(self.h.get(k, ll));
                l = &l + &term;
            }
        }
        LinearMatrixMap::from_matricization(l, self.n, self.q).expect("shape by construction")
    }

    /// The stacked forms (Â, Ã): Â ∈ F^{m×nq} has rows vec(conj(A_k))ᵀ and
    /// full row rank with Ker Â = Ker 𝕃; Ã ∈ F^{mn×q} stacks the A_k
    /// vertically.
    pub fn stacked_forms(&self) -> (ComplexMatrix, ComplexMatrix) {
        let m = self.m();
        let ahat = ComplexMatrix::from_fn(m, self.n * self.q, |k, col| {
            vec(&self.a[k]).get(col).conj()
        });
        let atilde = ComplexMatrix::from_fn(m * self.n, self.q, |row, j| {
            self.a[row / self.n].get(row % self.n, j)
        });
        (ahat, atilde)
    }

    /// Checks the representation invariants: H Hermitian within
    /// `tol`·‖H‖_F, σ_min(H) > `tol`·σ_max(H), and A_1..A_m linearly
    /// independent.
    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.m() == 0 {
            return Ok(());
        }
        let hnorm = self.h.frobenius_norm();
        if self.h.hermitian_deviation() > tol * hnorm.max(f64::MIN_POSITIVE) {
            return Err(Error::BiorthogonalityViolation(format!(
                "Hill matrix deviates from Hermitian by {:.3e}",
                self.h.hermitian_deviation()
            )));
        }
        let (smin, smax) = numeric::sigma_extremes(&self.h);
        if smax == 0.0 || smin <= tol * smax {
            return Err(Error::BiorthogonalityViolation(format!(
                "Hill matrix is numerically singular (sigma ratio {:.3e})",
                if smax == 0.0 { 0.0 } else { smin / smax }
            )));
        }
        let (ahat, _) = self.stacked_forms();
        let (amin, amax) = numeric::sigma_extremes(&ahat);
        if amax == 0.0 || amin <= tol * amax {
            return Err(Error::SpanDeficient(
                "representation matrices are linearly dependent".into(),
            ));
        }
        Ok(())
    }
}

/// Builds the minimal Hill representation determined by a basis selection:
/// A_k from the unique α expansion and H_kl = ⟨B_k, L_l⟩.
///
/// The basis invariants are re-checked; any failure reports as
/// [`Error::BiorthogonalityViolation`].
pub fn build_hill(
    map: &LinearMatrixMap,
    basis: &BasisSelection,
    tol: f64,
) -> Result<HillRepresentation> {
    basis.validate(map, tol).map_err(|e| match e {
        Error::BiorthogonalityViolation(msg) => Error::BiorthogonalityViolation(msg),
        other => Error::BiorthogonalityViolation(format!("basis invariants fail: {other}")),
    })?;
    let m = basis.m();
    let a = basis.a_matrices();
    let mut h = ComplexMatrix::zeros(m, m);
    for k in 0..m {
        let bk = basis.b_matrix(k);
        for l in 0..m {
            h.set(k, l, trace_inner(&bk, &basis.ls()[l])?);
        }
    }
    HillRepresentation::new(map.n(), map.q(), h, a, Some(basis.clone()))
}

/// Builds the minimal Hill representation with prescribed matrices A_1..A_m
/// spanning the block span: derives the L_k from the unique expansion
/// L_ij = Σ_k λ_k^{ij} A_k as L_k = [conj(λ_k^{ij})] and solves the stacked
/// relation L̃ = (H ⊗ I_n) Ã for the Hill matrix.
pub fn hill_from_a(
    map: &LinearMatrixMap,
    a: &[ComplexMatrix],
    tol: f64,
) -> Result<HillRepresentation> {
    map.require_star_linear(tol)?;
    let (n, q) = (map.n(), map.q());
    for mat in a {
        if mat.shape() != (n, q) {
            return Err(Error::DimensionMismatch(format!(
                "prescribed matrices must be {n}x{q}, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
    }
    let m_rank = minimal_rank(map, tol);
    if a.len() != m_rank {
        return Err(Error::SpanDeficient(format!(
            "{} matrices prescribed but the block span has dimension {m_rank}",
            a.len()
        )));
    }
    if m_rank == 0 {
        return HillRepresentation::new(n, q, ComplexMatrix::zeros(0, 0), Vec::new(), None);
    }

    let ahat = stack_vec_rows(a);
    let (smin, smax) = numeric::sigma_extremes(&ahat);
    if smax == 0.0 || smin <= tol * smax {
        return Err(Error::SpanDeficient(
            "prescribed matrices are linearly dependent".into(),
        ));
    }
    let blocks = map.block_vec_stack();
    let resid = projection_residual(&blocks, &ahat);
    if resid > tol * lhat_scale(&ahat).max(1.0) {
        return Err(Error::SpanDeficient(format!(
            "prescribed matrices leave the block span (residual {resid:.3e})"
        )));
    }
    let resid_blocks = projection_residual(&ahat, &blocks);
    if resid_blocks > tol * block_row_scale(&blocks).max(1.0) {
        return Err(Error::SpanDeficient(format!(
            "blocks leave the prescribed span (residual {resid_blocks:.3e})"
        )));
    }

    // λ: unique expansion of the blocks in the A_k
    let m = a.len();
    let k_cols = ahat.transpose();
    let rhs = blocks.transpose();
    let lambda_coef = numeric::lstsq(&k_cols, &rhs, tol.min(1e-12))?;
    let ls: Vec<ComplexMatrix> = (0..m)
        .map(|k| {
            ComplexMatrix::from_fn(n, q, |i, j| lambda_coef.get(k, i * q + j).conj())
        })
        .collect();

    // solve vec(L_k) = Σ_l H_kl vec(A_l) for each k
    let ls_cols = stack_vec_rows(&ls).transpose();
    let x = numeric::lstsq(&k_cols, &ls_cols, tol.min(1e-12))?;
    let h = x.transpose();

    // basis provenance so the representation can be compared
    let beta = minimum_norm_beta(map, &ls, tol)?;
    let alpha = expand_blocks(map, &ls, tol)?;
    let basis = BasisSelection::new(n, q, ls, alpha, beta, BasisSource::UserSupplied)?;
    HillRepresentation::new(n, q, h, a.to_vec(), Some(basis))
}

/// Builds a minimal Hill representation from any row stack Â with
/// Ker Â = Ker 𝕃, through the projection sandwich
/// Hᵀ = (ÂÂ*)⁻¹ Â 𝕃 Â* (ÂÂ*)⁻¹ (two QR solves, no explicit inverse) and
/// A_k = unvec(conj(â_k)) for the rows â_k.
pub fn hill_from_kernel_matched(
    map: &LinearMatrixMap,
    ahat: &ComplexMatrix,
    tol: f64,
) -> Result<HillRepresentation> {
    map.require_star_linear(tol)?;
    let (n, q) = (map.n(), map.q());
    if ahat.cols() != n * q {
        return Err(Error::DimensionMismatch(format!(
            "row stack must have {} columns, got {}",
            n * q,
            ahat.cols()
        )));
    }
    let choi = map.choi();
    let m_rank = numeric::numerical_rank(choi.matrix(), tol);
    let m = ahat.rows();
    if m != m_rank {
        return Err(Error::KernelMismatch(format!(
            "row stack has {m} rows but the Choi matrix has rank {m_rank}"
        )));
    }
    if m == 0 {
        return HillRepresentation::new(n, q, ComplexMatrix::zeros(0, 0), Vec::new(), None);
    }
    if numeric::numerical_rank(ahat, tol) != m {
        return Err(Error::KernelMismatch(
            "row stack does not have full row rank".into(),
        ));
    }
    let scale = ahat.max_abs().max(1.0) * choi.matrix().max_abs().max(1.0);
    // Â annihilates Ker 𝕃 ...
    let choi_null = numeric::nullspace(choi.matrix(), tol);
    if !choi_null.is_empty() {
        let image = ahat.matmul(&choi_null)?;
        if image.max_abs() > tol.max(1e-12) * scale {
            return Err(Error::KernelMismatch(format!(
                "row stack does not annihilate the Choi kernel (residual {:.3e})",
                image.max_abs()
            )));
        }
    }
    // ... and 𝕃 annihilates Ker Â
    let ahat_null = numeric::nullspace(ahat, tol);
    if !ahat_null.is_empty() {
        let image = choi.matrix().matmul(&ahat_null)?;
        if image.max_abs() > tol.max(1e-12) * scale {
            return Err(Error::KernelMismatch(format!(
                "Choi matrix does not annihilate the row-stack kernel (residual {:.3e})",
                image.max_abs()
            )));
        }
    }

    let gram = ahat.matmul(&ahat.adjoint())?;
    let mid = ahat.matmul(choi.matrix())?.matmul(&ahat.adjoint())?;
    // H^T = G^{-1} T G^{-1} via two solves with the Hermitian Gram matrix
    let x = numeric::solve_square(&gram, &mid)?;
    let z = numeric::solve_square(&gram, &x.adjoint())?;
    let h = z.conjugate();

    let a: Vec<ComplexMatrix> = (0..m)
        .map(|k| {
            let row = crate::matrix::ComplexVector::new(
                (0..n * q).map(|c| ahat.get(k, c).conj()).collect(),
            )?;
            unvec(&row, n, q)
        })
        .collect::<Result<_>>()?;
    HillRepresentation::new(n, q, h, a, None)
}

/// Certifies *-linearity through the basis: checks L = Σ_k conj(L_k) ⊗ A_k,
/// the projection identity L_k = Σ_l ⟨B_k, L_l⟩ A_l, and the conjugate
/// symmetry ⟨B_k, L_l⟩ = conj(⟨B_l, L_k⟩), all within `tol` (relative to the
/// matricization scale). Coincides with the direct *-linearity test.
pub fn star_linear_cert(
    map: &LinearMatrixMap,
    basis: &BasisSelection,
    tol: f64,
) -> Result<bool> {
    basis.validate(map, tol)?;
    let m = basis.m();
    if m == 0 {
        return Ok(true);
    }
    let scale = map.matricization().max_abs().max(1.0);

    // (ii) L = Σ_k conj(L_k) ⊗ A_k
    let mut l_sum = ComplexMatrix::zeros(map.n() * map.n(), map.q() * map.q());
    for k in 0..m {
        l_sum = &l_sum + &kron(&basis.ls()[k].conjugate(), &basis.a_matrix(k));
    }
    if l_sum.max_abs_diff(map.matricization())? > tol * scale {
        return Ok(false);
    }

    // (iii) L_k = Σ_l ⟨B_k, L_l⟩ A_l
    for k in 0..m {
        let bk = basis.b_matrix(k);
        let mut acc = ComplexMatrix::zeros(map.n(), map.q());
        for l in 0..m {
            acc = &acc + &basis.a_matrix(l).scale(trace_inner(&bk, &basis.ls()[l])?);
        }
        if acc.max_abs_diff(&basis.ls()[k])? > tol * scale {
            return Ok(false);
        }
    }

    // conjugate symmetry of the would-be Hill matrix
    for k in 0..m {
        let bk = basis.b_matrix(k);
        for l in 0..m {
            let bl = basis.b_matrix(l);
            let h_kl = trace_inner(&bk, &basis.ls()[l])?;
            let h_lk = trace_inner(&bl, &basis.ls()[k])?;
            if (h_kl - h_lk.conj()).norm() > tol * scale {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The invertible pair (Φ, Ξ) linking two minimal representations of one
/// map: Φ_kl = ⟨B_k, A'_l⟩ and Ξ_kl = ⟨B_k, L'_l⟩, satisfying H = Φ H' Φ*,
/// Ξ = Φ H' and H = Φ Ξ*.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationBridge {
    pub phi: ComplexMatrix,
    pub xi: ComplexMatrix,
}

/// Relative residuals of the bridge identities, for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgeResiduals {
    /// ‖H − Φ H' Φ*‖ / ‖H‖
    pub h_phi_hp_phi_star: f64,
    /// ‖Ξ − Φ H'‖ / ‖Ξ‖
    pub xi_phi_hp: f64,
    /// ‖H − Φ Ξ*‖ / ‖H‖
    pub h_phi_xi_star: f64,
    /// ‖L̂ − conj(Φ) L̂'‖ / ‖L̂‖ for the stacked rows L̂_k = vec(conj(L_k))ᵀ
    pub lhat_rel: f64,
    /// ‖Φᵀ Â − Â'‖ / ‖Â'‖
    pub ahat_rel: f64,
}

/// Compares two minimal representations of the same map. Both must carry
/// basis provenance; the maps are matched through reconstruction within
/// `tol` relative Frobenius distance.
pub fn compare(
    rep_a: &HillRepresentation,
    rep_b: &HillRepresentation,
    tol: f64,
) -> Result<RepresentationBridge> {
    let basis_a = rep_a.basis().ok_or(Error::MissingProvenance)?;
    let basis_b = rep_b.basis().ok_or(Error::MissingProvenance)?;
    if (rep_a.n(), rep_a.q()) != (rep_b.n(), rep_b.q()) || rep_a.m() != rep_b.m() {
        return Err(Error::DimensionMismatch(
            "representations have different shapes".into(),
        ));
    }
    let la = rep_a.reconstruct();
    let lb = rep_b.reconstruct();
    let diff = (la.matricization() - lb.matricization()).frobenius_norm();
    let scale = la
        .matricization()
        .frobenius_norm()
        .max(lb.matricization().frobenius_norm())
        .max(f64::MIN_POSITIVE);
    let residual = diff / scale;
    if residual > tol {
        return Err(Error::DifferentMaps { residual });
    }
    let m = rep_a.m();
    let mut phi = ComplexMatrix::zeros(m, m);
    let mut xi = ComplexMatrix::zeros(m, m);
    for k in 0..m {
        let bk = basis_a.b_matrix(k);
        for l in 0..m {
            phi.set(k, l, trace_inner(&bk, &rep_b.a()[l])?);
            xi.set(k, l, trace_inner(&bk, &basis_b.ls()[l])?);
        }
    }
    Ok(RepresentationBridge { phi, xi })
}

/// Evaluates the bridge identities for a computed (Φ, Ξ) pair.
pub fn bridge_residuals(
    rep_a: &HillRepresentation,
    rep_b: &HillRepresentation,
    bridge: &RepresentationBridge,
) -> Result<BridgeResiduals> {
    let basis_a = rep_a.basis().ok_or(Error::MissingProvenance)?;
    let basis_b = rep_b.basis().ok_or(Error::MissingProvenance)?;
    let h = rep_a.h();
    let hp = rep_b.h();
    let phi = &bridge.phi;
    let xi = &bridge.xi;

    let rel = |lhs: &ComplexMatrix, rhs: &ComplexMatrix| -> Result<f64> {
        let denom = lhs.frobenius_norm().max(f64::MIN_POSITIVE);
        Ok((lhs - rhs).frobenius_norm() / denom)
    };

    let h_phi_hp_phi_star = rel(h, &phi.matmul(hp)?.matmul(&phi.adjoint())?)?;
    let xi_phi_hp = rel(xi, &phi.matmul(hp)?)?;
    let h_phi_xi_star = rel(h, &phi.matmul(&xi.adjoint())?)?;

    let lhat_a = stack_vec_rows(&basis_a.ls().iter().map(|l| l.conjugate()).collect::<Vec<_>>());
    let lhat_b = stack_vec_rows(&basis_b.ls().iter().map(|l| l.conjugate()).collect::<Vec<_>>());
    let lhat_rel = rel(&lhat_a, &phi.conjugate().matmul(&lhat_b)?)?;

    let (ahat_a, _) = rep_a.stacked_forms();
    let (ahat_b, _) = rep_b.stacked_forms();
    let denom = ahat_b.frobenius_norm().max(f64::MIN_POSITIVE);
    let ahat_rel = (&phi.transpose().matmul(&ahat_a)? - &ahat_b).frobenius_norm() / denom;

    Ok(BridgeResiduals { h_phi_hp_phi_star, xi_phi_hp, h_phi_xi_star, lhat_rel, ahat_rel })
}
