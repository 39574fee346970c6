//! Small named maps used across tests, documentation and the CLI examples,
//! plus seeded generators for structured *-linear instances.

use crate::matrix::{C64, ComplexMatrix, c64};
use crate::linmap::LinearMatrixMap;
use crate::tensorops::shuffle;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The identity map V ↦ V on n×n matrices; matricization I_{n²}.
pub fn identity_map(n: usize) -> LinearMatrixMap {
    LinearMatrixMap::from_matricization(ComplexMatrix::identity(n * n), n, n).expect("valid shape")
}

/// The transpose map V ↦ Vᵀ on n×n matrices; matricization is the canonical
/// shuffle, a full-rank symmetric permutation.
pub fn transpose_map(n: usize) -> LinearMatrixMap {
    LinearMatrixMap::from_matricization(shuffle(n), n, n).expect("valid shape")
}

/// The real map ℝ^{2×2} → ℝ^{3×3} sending [[a, b], [c, d]] to
/// diag(a+b, c+d, 0). Every image is symmetric, yet the map is not *-linear:
/// its Choi matrix is not symmetric. The standard witness that preserving
/// symmetric matrices over ℝ is weaker than *-linearity.
pub fn symmetric_output_map() -> LinearMatrixMap {
    LinearMatrixMap::from_action(3, 2, |e| {
        let mut out = ComplexMatrix::zeros(3, 3);
        out.set(0, 0, e.get(0, 0) + e.get(0, 1));
        out.set(1, 1, e.get(1, 0) + e.get(1, 1));
        out
    })
    .expect("valid action")
}

/// The Choi matrix of [`symmetric_output_map`], written out entry by entry.
pub fn symmetric_output_map_choi() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0, 1.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    ])
}

/// Random Hermitian, strictly diagonally dominant (hence invertible) m×m
/// matrix; Hermitian symmetry is exact in floating point.
fn hermitian_invertible(m: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let raw = ComplexMatrix::from_fn(m, m, |_, _| {
        c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    ComplexMatrix::from_fn(m, m, |i, j| {
        let sym = raw.get(i, j) + raw.get(j, i).conj();
        if i == j { sym + c64(3.0 * m as f64, 0.0) } else { sym }
    })
}

/// A *-linear map whose matricization has nonzero blocks exactly at `picks`
/// (0-based block positions, which must be pairwise distinct): those blocks
/// are linearly independent and every other block vanishes, so `picks` is a
/// valid spanning selection and the Choi rank is `picks.len()`. Returns the
/// map together with the Hermitian coefficient matrix wired into it, which
/// is also its Hill matrix for this selection.
pub fn sparse_block_star_linear(
    n: usize,
    q: usize,
    picks: &[(usize, usize)],
    seed: u64,
) -> (LinearMatrixMap, ComplexMatrix) {
    let m = picks.len();
    assert!(picks.iter().all(|&(i, j)| i < n && j < q), "pick out of range");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = hermitian_invertible(m, &mut rng);
    let mut l = ComplexMatrix::zeros(n * n, q * q);
    for (k, &(ik, jk)) in picks.iter().enumerate() {
        for (t, &(il, jl)) in picks.iter().enumerate() {
            // entry (i_l, j_l) of block (i_k, j_k)
            l.set(ik * n + il, jk * q + jl, coeffs.get(k, t));
        }
    }
    let map = LinearMatrixMap::from_matricization(l, n, q).expect("valid shape");
    (map, coeffs)
}

/// A *-linear map whose blocks repeat according to a class assignment:
/// L_ij = L_kl exactly when `class_of(i, j) == class_of(k, l)`. The block
/// span has dimension equal to the number of classes. Equality patterns
/// (constant diagonals, antidiagonals, point symmetry, index transposition)
/// are obtained by choosing the class function accordingly.
pub fn class_patterned_star_linear<F>(
    n: usize,
    q: usize,
    class_of: F,
    seed: u64,
) -> LinearMatrixMap
where
    F: Fn(usize, usize) -> usize,
{
    // dense class ids in first-occurrence scan order
    let mut ids: Vec<usize> = Vec::new();
    let mut assign = vec![0usize; n * q];
    for i in 0..n {
        for j in 0..q {
            let raw = class_of(i, j);
            let dense = match ids.iter().position(|&x| x == raw) {
                Some(pos) => pos,
                None => {
                    ids.push(raw);
                    ids.len() - 1
                }
            };
            assign[i * q + j] = dense;
        }
    }
    let m = ids.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = hermitian_invertible(m, &mut rng);
    // ℓ^{ij}_{rs} = conj(coeffs[a(r,s)][a(i,j)])
    let l = ComplexMatrix::from_fn(n * n, q * q, |row, col| {
        let (i, r) = (row / n, row % n);
        let (j, s) = (col / q, col % q);
        coeffs.get(assign[r * q + s], assign[i * q + j]).conj()
    });
    LinearMatrixMap::from_matricization(l, n, q).expect("valid shape")
}

/// A *-linear map on square matrices whose matricization blocks satisfy
/// the conjugate-transpose pattern L_ij = conj(L_ji) exactly.
///
/// Built by assigning one random value per orbit of the entry-index
/// relations and propagating it through the required conjugations, so both
/// the *-linearity symmetry and the pattern hold bit for bit. Entries whose
/// orbit forces them real get a zero imaginary part.
pub fn block_hermitian_star_linear(n: usize, seed: u64) -> LinearMatrixMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idx = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
    let total = n * n * n * n;
    // parity[t]: Some(0) reached plainly, Some(1) reached conjugated,
    // relative to the orbit representative
    let mut values: Vec<Option<C64>> = vec![None; total];
    let mut visited = vec![false; total];
    for start in 0..total {
        if visited[start] {
            continue;
        }
        // BFS over the two relations, tracking conjugation parity
        let mut orbit: Vec<(usize, u8)> = Vec::new();
        let mut parity: Vec<Option<u8>> = vec![None; total];
        let mut forced_real = false;
        let mut queue = std::collections::VecDeque::new();
        parity[start] = Some(0);
        queue.push_back(start);
        while let Some(t) = queue.pop_front() {
            let p = parity[t].unwrap();
            orbit.push((t, p));
            let l0 = t % n;
            let k0 = (t / n) % n;
            let j0 = (t / (n * n)) % n;
            let i0 = t / (n * n * n);
            // star-linearity: value(i,j,k,l) = conj(value(k,l,i,j))
            // block pattern:  value(i,j,k,l) = conj(value(j,i,k,l))
            for next in [idx(k0, l0, i0, j0), idx(j0, i0, k0, l0)] {
                let np = p ^ 1;
                match parity[next] {
                    None => {
                        parity[next] = Some(np);
                        queue.push_back(next);
                    }
                    Some(existing) if existing != np => forced_real = true,
                    _ => {}
                }
            }
        }
        let mut z = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if forced_real {
            z = c64(z.re, 0.0);
        }
        for &(t, p) in &orbit {
            values[t] = Some(if p == 0 { z } else { z.conj() });
            visited[t] = true;
        }
    }
    let l = ComplexMatrix::from_fn(n * n, n * n, |row, col| {
        let (i, k) = (row / n, row % n);
        let (j, ll) = (col / n, col % n);
        values[idx(i, j, k, ll)].unwrap()
    });
    LinearMatrixMap::from_matricization(l, n, n).expect("valid shape")
}
