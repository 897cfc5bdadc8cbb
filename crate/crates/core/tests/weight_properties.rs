mod common;

use proptest::prelude::*;
use spin_energy::weights::{
    assignment_constant, optimize_weights, uniform_assignment, OptimizeParams, PathChoice, WeightedAssignment,
};
use spin_energy::{certify_inequality, CertifyOptions};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn assignments_are_sound(g in common::connected_graph(2, 9)) {
        let opts = CertifyOptions::default();
        let uniform = uniform_assignment(&g, PathChoice::Bfs).unwrap();
        let (loads, bound) = assignment_constant(&g, &uniform).unwrap();
        prop_assert!(certify_inequality(&g, bound.slope, &opts).unwrap().pass);

        let opt = optimize_weights(&g, &uniform, &OptimizeParams::default()).unwrap();
        opt.assignment.validate(&g).unwrap();
        prop_assert!(opt.loads.max_load <= loads.max_load + 1e-9);
        prop_assert!(opt.lower_bound <= opt.loads.max_load + 1e-9);
        prop_assert!(opt.history.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(certify_inequality(&g, opt.loads.max_load, &opts).unwrap().pass);
    }

    #[test]
    fn saved_assignments_replay(g in common::connected_graph(2, 7)) {
        let uniform = uniform_assignment(&g, PathChoice::Bfs).unwrap();
        let opt = optimize_weights(&g, &uniform, &OptimizeParams::default()).unwrap();
        let back = WeightedAssignment::from_json(&opt.assignment.to_json().unwrap()).unwrap();
        let (loads, _) = assignment_constant(&g, &back).unwrap();
        prop_assert_eq!(loads, opt.loads);
    }
}
