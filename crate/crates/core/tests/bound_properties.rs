mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use spin_energy::bounds::{
    baerwinkel_bound, gauge_weak_homogeneity, lattice_constant, open_exact, CouplingMatrix,
};
use spin_energy::spectral::{joint_eigenpairs, PencilOptions};
use spin_energy::weights::{assignment_constant, optimize_weights, uniform_assignment, OptimizeParams, PathChoice};
use spin_energy::{certify_inequality, optimal_constant, Boundary, CertifyOptions, Graph, LatticeSpec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gauge_gives_constant_row_sums(n in 2usize..=9, raw in proptest::collection::vec(-2.0f64..2.0, 36)) {
        let mut m = DMatrix::zeros(n, n);
        let mut it = raw.iter();
        for i in 0..n {
            for k in i + 1..n {
                let v = *it.next().unwrap();
                m[(i, k)] = v;
                m[(k, i)] = v;
            }
        }
        let gauged = gauge_weak_homogeneity(&CouplingMatrix::new(m).unwrap());
        prop_assert!(gauged.row_sum_spread() <= 1e-12);
        prop_assert!(gauged.matrix().trace().abs() <= 1e-12);
    }
}

fn lattices_up_to_12() -> Vec<LatticeSpec> {
    let mut out = Vec::new();
    for n in 3..=12 {
        out.push(LatticeSpec::chain(n, Boundary::Periodic).unwrap());
    }
    out.push(LatticeSpec::new(2, 3, Boundary::Periodic).unwrap());
    out.push(LatticeSpec::with_extents(vec![4, 3], Boundary::Periodic).unwrap());
    out
}

#[test]
fn spectral_bound_dominates_every_joint_pair() {
    for spec in lattices_up_to_12() {
        let g = Graph::lattice(&spec).unwrap();
        let b = baerwinkel_bound(&g, 1.0, 0.5).unwrap();
        for m in 0..=g.n_sites() / 2 {
            for p in joint_eigenpairs(&g, m).unwrap() {
                assert!(
                    p.delta_s2 <= b.bound.evaluate(p.delta_h) + 1e-9,
                    "{spec}: ({}, {}) above {}x + {}",
                    p.delta_h,
                    p.delta_s2,
                    b.bound.slope,
                    b.bound.offset
                );
            }
        }
    }
}

#[test]
fn closed_forms_certify_up_to_twelve_sites() {
    let mut specs = Vec::new();
    for bc in [Boundary::Periodic, Boundary::Open] {
        specs.push(LatticeSpec::new(2, 3, bc).unwrap());
        specs.push(LatticeSpec::with_extents(vec![4, 3], bc).unwrap());
        specs.push(LatticeSpec::with_extents(vec![3, 4], bc).unwrap());
        specs.push(LatticeSpec::with_extents(vec![6, 2], Boundary::Open).unwrap());
    }
    for spec in specs {
        let g = Graph::lattice(&spec).unwrap();
        let c = lattice_constant(&spec).unwrap().slope;
        assert!(certify_inequality(&g, c, &CertifyOptions::default()).unwrap().pass, "{spec} at {c}");
    }
}

#[test]
fn constants_are_ordered() {
    let specs = [
        LatticeSpec::chain(5, Boundary::Periodic).unwrap(),
        LatticeSpec::chain(7, Boundary::Periodic).unwrap(),
        LatticeSpec::chain(7, Boundary::Open).unwrap(),
        LatticeSpec::new(2, 3, Boundary::Periodic).unwrap(),
        LatticeSpec::new(2, 3, Boundary::Open).unwrap(),
    ];
    for spec in specs {
        let g = Graph::lattice(&spec).unwrap();
        let c_star = optimal_constant(&g, &PencilOptions::default()).unwrap().c_star;
        let uniform = uniform_assignment(&g, PathChoice::Canonical).unwrap();
        let c_uniform = assignment_constant(&g, &uniform).unwrap().0.max_load;
        let c_opt = optimize_weights(&g, &uniform, &OptimizeParams::default()).unwrap().loads.max_load;
        let c_closed = lattice_constant(&spec).unwrap().slope;
        assert!(c_star <= c_opt * (1.0 + 1e-9), "{spec}: {c_star} > {c_opt}");
        assert!(c_opt <= c_uniform + 1e-9, "{spec}");
        assert!(c_uniform <= c_closed, "{spec}");
        if spec.boundary() == Boundary::Periodic {
            assert_eq!(c_uniform, c_closed, "{spec}");
        }
    }
}

#[test]
fn open_uniform_assignment_below_closed_form() {
    use num_traits::ToPrimitive;
    for dims in 1..=2 {
        for side in 2..=6 {
            let spec = LatticeSpec::new(dims, side, Boundary::Open).unwrap();
            let g = Graph::lattice(&spec).unwrap();
            let wa = uniform_assignment(&g, PathChoice::Canonical).unwrap();
            let (loads, _) = assignment_constant(&g, &wa).unwrap();
            let closed = open_exact(spec.extents()).to_f64().unwrap();
            assert!(loads.max_load <= closed, "{spec}: {} > {closed}", loads.max_load);
        }
    }
}
