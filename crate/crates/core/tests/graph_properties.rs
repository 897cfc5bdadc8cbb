mod common;

use proptest::prelude::*;
use spin_energy::{Boundary, Graph, LatticeSpec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn path_lengths_bounded_by_diameter(g in common::connected_graph(2, 12)) {
        let diam = g.diameter();
        prop_assert!(diam < g.n_sites());
        for i in 0..g.n_sites() {
            for k in 0..g.n_sites() {
                if i == k { continue; }
                let p = g.shortest_path(i, k).unwrap();
                prop_assert!(p.is_valid_in(&g));
                prop_assert!(p.len() <= diam);
                prop_assert_eq!(p.len(), g.shortest_path(k, i).unwrap().len());
                prop_assert_eq!(p.len(), g.distance(i, k).unwrap());
            }
        }
    }

    #[test]
    fn canonical_path_length_is_l1(
        dims in 1usize..=3,
        side in 3usize..=6,
        periodic in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let bc = if periodic { Boundary::Periodic } else { Boundary::Open };
        let spec = LatticeSpec::new(dims, side, bc).unwrap();
        let g = Graph::lattice(&spec).unwrap();
        let n = spec.n_sites() as u64;
        let i = (seed % n) as usize;
        let k = ((seed / n) % n) as usize;
        prop_assume!(i != k);
        let p = g.canonical_path_between(i, k).unwrap();
        prop_assert!(p.is_valid_in(&g));
        prop_assert_eq!(p.source(), i);
        prop_assert_eq!(p.target(), k);
        let (lo, hi) = LatticeSpec::periodic_range(side);
        let (ci, ck) = (spec.coords(i), spec.coords(k));
        let l1: i64 = ci.iter().zip(&ck).map(|(&a, &b)| {
            let mut d = b as i64 - a as i64;
            if periodic {
                let n = side as i64;
                d = d.rem_euclid(n);
                if d > hi { d -= n; }
                debug_assert!(d >= lo);
            }
            d.abs()
        }).sum();
        prop_assert_eq!(p.len() as i64, l1);
    }
}

#[test]
fn periodic_lattices_are_regular() {
    for dims in 1..=3 {
        for side in 3..=6 {
            let g = common::lattice(dims, side, Boundary::Periodic);
            assert!((0..g.n_sites()).all(|s| g.degree(s) == 2 * dims));
            assert_eq!(g.n_edges(), dims * g.n_sites());
        }
    }
}
