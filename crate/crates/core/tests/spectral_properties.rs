mod common;

use proptest::prelude::*;
use spin_energy::bounds::{three_qubit_eigenvalues, three_qubit_operator};
use spin_energy::eigen::sorted_symmetric_eigen;
use spin_energy::operators::full_space_dense;
use spin_energy::spectral::{certify_operator, PencilOptions};
use spin_energy::{certify_inequality, optimal_constant, CertifyOptions, Method, ProjectorSum};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn passing_is_monotone_in_c(g in common::connected_graph(2, 8), c in 0.0f64..40.0, bump in 0.0f64..10.0) {
        let opts = CertifyOptions::default();
        let lo = certify_inequality(&g, c, &opts).unwrap();
        let hi = certify_inequality(&g, c + bump, &opts).unwrap();
        prop_assert!(hi.lambda_min >= lo.lambda_min - 1e-9);
        if lo.pass {
            prop_assert!(hi.pass);
        }
    }

    #[test]
    fn optimal_constant_is_sharp(g in common::connected_graph(2, 9)) {
        let c = optimal_constant(&g, &PencilOptions::default()).unwrap().c_star;
        prop_assert!(c > 0.0);
        let opts = CertifyOptions::default();
        prop_assert!(certify_inequality(&g, c * (1.0 + 1e-9), &opts).unwrap().pass);
        prop_assert!(!certify_inequality(&g, c * (1.0 - 1e-6), &opts).unwrap().pass);
    }

    #[test]
    fn sector_minima_are_palindromic(g in common::connected_graph(2, 10), c in 0.0f64..30.0) {
        let cert = certify_inequality(&g, c, &CertifyOptions::default()).unwrap();
        prop_assert_eq!(cert.flip_symmetric, Some(true));
        let mins = cert.sector_minima();
        let n = mins.len() - 1;
        for m in 0..=n {
            prop_assert!((mins[m] - mins[n - m]).abs() <= 1e-9 * (1.0 + mins[m].abs()));
        }
    }

    #[test]
    fn chain_inequality_holds(k in 2usize..=7, raw in proptest::collection::vec(0.01f64..1.0, 7)) {
        let total: f64 = raw[..k].iter().sum();
        let terms = (0..k)
            .map(|l| (l, l + 1, total / raw[l]))
            .chain(std::iter::once((0, k, -1.0)));
        let sum = ProjectorSum::new(k + 1, terms).unwrap();
        let cert = certify_operator(&sum, &CertifyOptions::default()).unwrap();
        prop_assert!(cert.lambda_min >= -1e-9, "{}", cert.lambda_min);
    }

    #[test]
    fn three_qubit_boundary_is_singular(a in 1.05f64..20.0) {
        let b = a / (a - 1.0);
        let (vals, _) = sorted_symmetric_eigen(full_space_dense(&three_qubit_operator(a, b)));
        prop_assert!(vals[0].abs() <= 1e-10, "{}", vals[0]);
        prop_assert!(three_qubit_eigenvalues(a, b).unwrap().lower.abs() <= 1e-10);
    }

    #[test]
    fn dense_and_iterative_certificates_agree(g in common::connected_graph(6, 10), c in 0.0f64..30.0) {
        let dense = certify_inequality(&g, c, &CertifyOptions { method: Method::Dense, ..CertifyOptions::default() }).unwrap();
        let iter = certify_inequality(&g, c, &CertifyOptions { method: Method::Iterative, ..CertifyOptions::default() }).unwrap();
        prop_assert!((dense.lambda_min - iter.lambda_min).abs() <= 1e-8 * (1.0 + c));
    }
}

#[test]
fn three_qubit_grid_matches_dense() {
    let vals = [1.1, 1.5, 2.0, 3.0, 5.0];
    for &a in &vals {
        for &b in &vals {
            let s = three_qubit_eigenvalues(a, b).unwrap();
            let (dense, _) = sorted_symmetric_eigen(full_space_dense(&three_qubit_operator(a, b)));
            for want in [s.lower, s.upper] {
                let err = dense.iter().map(|d| (d - want).abs()).fold(f64::INFINITY, f64::min);
                assert!(err < 1e-12, "({a}, {b}): {err}");
            }
        }
    }
}
