//! Property tests for the eigensolver, exact characteristic polynomials,
//! and the leading eigenvector contract.

mod common;

use common::{char_poly_by_cofactors, signed_graph};
use proptest::prelude::*;
use sgext::{spectra, IntMatrix, IntPolynomial};

/// Random symmetric integer matrix of order 1..=8 with entries in -3..=3.
fn symmetric_int_matrix() -> impl Strategy<Value = (usize, Vec<i64>)> {
    (1usize..=8).prop_flat_map(|n| {
        proptest::collection::vec(-3i64..=3, n * (n + 1) / 2).prop_map(move |upper| {
            let mut data = vec![0i64; n * n];
            let mut idx = 0;
            for i in 0..n {
                for j in i..n {
                    data[i * n + j] = upper[idx];
                    data[j * n + i] = upper[idx];
                    idx += 1;
                }
            }
            (n, data)
        })
    })
}

proptest! {
    #[test]
    fn char_poly_roots_match_eigenvalues((n, data) in symmetric_int_matrix()) {
        let rows: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| data[i * n + j] as i128).collect())
            .collect();
        let m = IntMatrix::from_rows(&rows).unwrap();
        let p = spectra::char_poly(&m).unwrap();
        let floats: Vec<f64> = data.iter().map(|&x| x as f64).collect();
        let eig = spectra::symmetric_eigenvalues(n, &floats).unwrap();
        // multiset agreement via the monic polynomial built from the
        // computed eigenvalues
        let mut rebuilt = vec![0.0f64; n + 1];
        rebuilt[0] = 1.0;
        let mut degree = 0;
        for &lam in eig.values() {
            degree += 1;
            for k in (0..degree).rev() {
                let lower = rebuilt[k];
                rebuilt[k + 1] += -lam * lower;
            }
        }
        // rebuilt[k] is the coefficient of x^(n-k)
        let scale: f64 = p.coeffs().iter().map(|&c| (c as f64).abs()).fold(1.0, f64::max);
        for (k, &coeff) in rebuilt.iter().enumerate() {
            let exact = p.coeffs()[n - k] as f64;
            prop_assert!(
                (coeff - exact).abs() <= 1e-8 * scale,
                "coefficient of x^{} differs: {} vs {}",
                n - k,
                coeff,
                exact
            );
        }
    }

    /// Coefficient-exact agreement with a cofactor-expansion oracle on
    /// arbitrary (not necessarily symmetric) small integer matrices.
    #[test]
    fn char_poly_matches_cofactor_expansion(
        (n, flat) in (1usize..=5).prop_flat_map(|n| {
            (Just(n), proptest::collection::vec(-4i128..=4, n * n))
        })
    ) {
        let rows: Vec<Vec<i128>> = (0..n)
            .map(|i| flat[i * n..(i + 1) * n].to_vec())
            .collect();
        let m = IntMatrix::from_rows(&rows).unwrap();
        let fast = spectra::char_poly(&m).unwrap();
        let oracle = char_poly_by_cofactors(&rows);
        prop_assert_eq!(fast.coeffs(), oracle.as_slice());
    }

    /// The root isolator finds the largest root of polynomials built from
    /// known integer roots with multiplicities, to 1e-12.
    #[test]
    fn largest_real_root_recovers_constructed_roots(
        spec in proptest::collection::btree_map(-5i128..=5, 1usize..=3, 1..=3)
    ) {
        let mut p = IntPolynomial::new(vec![1]);
        for (&root, &mult) in &spec {
            let factor = IntPolynomial::new(vec![-root, 1]);
            for _ in 0..mult {
                p = p.mul(&factor).unwrap();
            }
        }
        let largest = *spec.keys().max().unwrap();
        let lo = *spec.keys().min().unwrap() as f64 - 1.0;
        let hi = largest as f64 + 1.0;
        let found = spectra::largest_real_root(&p, lo, hi).unwrap();
        prop_assert!(
            (found - largest as f64).abs() <= 1e-12,
            "roots {spec:?}: found {found}"
        );
    }

    #[test]
    fn spectrum_is_sorted_with_zero_trace(g in signed_graph(8)) {
        let s = spectra::spectrum(&g);
        let v = s.values();
        prop_assert_eq!(v.len(), g.order());
        for w in v.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        let sum: f64 = v.iter().sum();
        prop_assert!(sum.abs() <= 1e-9 * g.order() as f64);
        prop_assert!(s.spectral_radius() >= s.index());
        prop_assert!(s.index() <= g.order() as f64 - 1.0 + 1e-9);
    }

    #[test]
    fn leading_eigenpair_satisfies_the_eigen_equation(g in signed_graph(8)) {
        let n = g.order();
        let (lambda, x) = spectra::leading_eigenpair(&g);
        let norm: f64 = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() <= 1e-9);
        // per-vertex eigenvalue equation: lambda x_i = sum of sign * x_j
        for i in 0..n {
            let mut ax = 0.0;
            for (j, s) in g.neighbors(i) {
                ax += s as f64 * x[j];
            }
            prop_assert!((ax - lambda * x[i]).abs() <= 1e-8);
        }
    }

    #[test]
    fn nonneg_switch_preserves_index_with_nonnegative_vector(g in signed_graph(8)) {
        let lambda = spectra::index(&g);
        let (switched, x) = sgext::perturb::nonneg_switch(&g);
        prop_assert!(x.iter().all(|&t| t >= -1e-10));
        prop_assert!((spectra::index(&switched) - lambda).abs() <= 1e-9);
    }
}

/// The parts of a complete multipartite graph form an equitable partition;
/// its quotient eigenvalues must appear in the full spectrum.
#[test]
fn turan_part_quotient_is_contained_in_spectrum() {
    for (n, r) in [(6, 3), (7, 2), (9, 4), (10, 3)] {
        let (g, _) = sgext::constructions::turan_graph(n, r).unwrap();
        let q = n / r;
        let rem = n % r;
        let mut blocks = Vec::new();
        let mut next = 0;
        for i in 0..r {
            let size = if i < rem { q + 1 } else { q };
            blocks.push((next..next + size).collect::<Vec<_>>());
            next += size;
        }
        let m = g.adjacency_matrix();
        let partition = sgext::Partition::new(n, blocks).unwrap();
        let quotient = spectra::quotient_spectrum(&m, &partition).unwrap();
        let full = spectra::eigenvalues(&m);
        for &lam in quotient.values() {
            assert!(
                full.values().iter().any(|&mu| (mu - lam).abs() <= 1e-8),
                "n={n} r={r}: quotient eigenvalue {lam} missing from spectrum"
            );
        }
        assert!((quotient.index() - full.index()).abs() <= 1e-8);
    }
}
