//! Property-based invariants for the tensor kernels and the reordering.

use hillrep::matrix::{C64, ComplexMatrix, ComplexVector, c64};
use hillrep::reorder::{BlockShape, lambda, lambda_entrywise_oracle, lambda_inverse};
use hillrep::tensorops::{hadamard, kron, shuffle, trace_inner, unvec, vec};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = C64> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| c64(re, im))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec(scalar(), rows * cols)
        .prop_map(move |v| ComplexMatrix::new(rows, cols, v).unwrap())
}

fn vector(len: usize) -> impl Strategy<Value = ComplexVector> {
    proptest::collection::vec(scalar(), len).prop_map(|v| ComplexVector::new(v).unwrap())
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1..=4usize, 1..=4usize)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unvec_vec_roundtrip_is_exact((r, c) in dims(), seeded in 0u64..1000) {
        let t = ComplexMatrix::from_fn(r, c, |i, j| {
            c64((i as f64 + seeded as f64).sin(), (j as f64 - seeded as f64).cos())
        });
        prop_assert_eq!(unvec(&vec(&t), r, c).unwrap(), t);
    }

    #[test]
    fn vec_intertwines_multiplication(
        a in matrix(3, 2), x in matrix(2, 4), b in matrix(3, 4)
    ) {
        // vec(A X Bᵀ) = (B ⊗ A) vec(X)
        let axbt = a.matmul(&x).unwrap().matmul(&b.transpose()).unwrap();
        let lhs = vec(&axbt);
        let rhs = kron(&b, &a).mul_vector(&vec(&x)).unwrap();
        let scale = lhs.norm().max(1.0);
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * scale);
    }

    #[test]
    fn tensor_pairing_reads_entries(w in matrix(3, 2), x in vector(3), z in vector(2)) {
        // (z ⊗ x)ᵀ vec(W) = xᵀ W z
        let pair = z.kron(&x);
        let lhs: C64 = pair
            .entries()
            .iter()
            .zip(vec(&w).entries())
            .map(|(p, v)| p * v)
            .sum();
        let wz = w.mul_vector(&z).unwrap();
        let rhs: C64 = x.entries().iter().zip(wz.entries()).map(|(a, b)| a * b).sum();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn vec_of_outer_product(v in vector(3), w in vector(4)) {
        // vec(v wᵀ) = w ⊗ v
        let outer = v.outer(&w);
        prop_assert_eq!(vec(&outer), w.kron(&v));
    }

    #[test]
    fn kron_is_bilinear(a in matrix(2, 3), b in matrix(2, 3), c in matrix(2, 2), s in scalar()) {
        let sum_left = kron(&(&a + &b), &c);
        let split = &kron(&a, &c) + &kron(&b, &c);
        prop_assert!(sum_left.approx_eq(&split, 1e-12 * split.max_abs().max(1.0)));

        let scaled = kron(&a.scale(s), &c);
        let scaled2 = kron(&a, &c).scale(s);
        prop_assert!(scaled.approx_eq(&scaled2, 1e-12 * scaled2.max_abs().max(1.0)));
    }

    #[test]
    fn kron_mixed_product(
        a in matrix(2, 3), c in matrix(3, 2), b in matrix(2, 2), d in matrix(2, 3)
    ) {
        // (A ⊗ B)(C ⊗ D) = (AC) ⊗ (BD)
        let lhs = kron(&a, &b).matmul(&kron(&c, &d)).unwrap();
        let rhs = kron(&a.matmul(&c).unwrap(), &b.matmul(&d).unwrap());
        prop_assert!(lhs.approx_eq(&rhs, 1e-12 * rhs.max_abs().max(1.0)));
    }

    #[test]
    fn hadamard_distributes_over_kron(
        a in matrix(2, 2), b in matrix(3, 2), c in matrix(2, 2), d in matrix(3, 2)
    ) {
        let lhs = hadamard(&kron(&a, &b), &kron(&c, &d)).unwrap();
        let rhs = kron(&hadamard(&a, &c).unwrap(), &hadamard(&b, &d).unwrap());
        prop_assert!(lhs.approx_eq(&rhs, 1e-12 * rhs.max_abs().max(1.0)));
    }

    #[test]
    fn trace_inner_is_positive_definite(a in matrix(3, 4), b in matrix(3, 4)) {
        let self_inner = trace_inner(&a, &a).unwrap();
        prop_assert!(self_inner.im.abs() <= 1e-12 * self_inner.re.max(1.0));
        prop_assert!(self_inner.re >= 0.0);

        // routes agree
        let primary = trace_inner(&a, &b).unwrap();
        let via_trace = a.matmul(&b.adjoint()).unwrap().trace().unwrap();
        let via_vec = vec(&a).inner(&vec(&b)).unwrap();
        prop_assert!((primary - via_trace).norm() <= 1e-12 * primary.norm().max(1.0));
        prop_assert!((primary - via_vec).norm() <= 1e-12 * primary.norm().max(1.0));
    }

    #[test]
    fn shuffle_properties(n in 1..=4usize, z in vector(4), x in vector(4)) {
        let s = shuffle(n);
        prop_assert_eq!(s.transpose(), s.clone());
        prop_assert_eq!(s.matmul(&s).unwrap(), ComplexMatrix::identity(n * n));

        let zt = ComplexVector::new(z.entries()[..n].to_vec()).unwrap();
        let xt = ComplexVector::new(x.entries()[..n].to_vec()).unwrap();
        let swapped = s.mul_vector(&zt.kron(&xt)).unwrap();
        prop_assert_eq!(swapped, xt.kron(&zt));
    }

    #[test]
    fn lambda_is_an_entry_permutation(
        n in 1..=3usize, q in 1..=3usize, p in 1..=3usize, r in 1..=3usize,
        seed in 0u64..500
    ) {
        let shape = BlockShape::new(n, q, p, r).unwrap();
        let s = ComplexMatrix::from_fn(n * p, q * r, |i, j| {
            c64(
                ((i * 7 + j * 3) as f64 + seed as f64).sin(),
                ((i + j * 11) as f64 - seed as f64).cos(),
            )
        });
        let image = lambda(&s, shape).unwrap();

        // entry multiset is preserved exactly; the two norm accumulations
        // only differ by summation order
        let norm_gap = (image.frobenius_norm() - s.frobenius_norm()).abs();
        prop_assert!(norm_gap <= 1e-12 * s.frobenius_norm().max(1.0));
        let mut a: Vec<(u64, u64)> = s
            .entries()
            .iter()
            .map(|z| (z.re.to_bits(), z.im.to_bits()))
            .collect();
        let mut b: Vec<(u64, u64)> = image
            .entries()
            .iter()
            .map(|z| (z.re.to_bits(), z.im.to_bits()))
            .collect();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);

        // round trip and oracle
        prop_assert!(lambda_entrywise_oracle(&s, &image, shape).unwrap());
        prop_assert_eq!(lambda_inverse(&image, shape).unwrap(), s);
    }
}
