#![allow(dead_code)]

use proptest::prelude::*;
use spin_energy::{Boundary, Graph, LatticeSpec};

/// Random connected graph on `min..=max` sites: a random tree plus each
/// remaining pair with a random density.
pub fn connected_graph(min: usize, max: usize) -> impl Strategy<Value = Graph> {
    (min..=max)
        .prop_flat_map(|n| {
            let parents = (1..n).map(|v| 0..v).collect::<Vec<_>>();
            let draws = proptest::collection::vec(0.0f64..1.0, n * (n - 1) / 2);
            (Just(n), parents, draws, 0.0f64..0.5)
        })
        .prop_map(|(n, parents, draws, density)| {
            let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            edges.extend(pairs.zip(&draws).filter(|(_, &d)| d < density).map(|(e, _)| e));
            Graph::from_edge_list(edges).expect("tree plus extras is connected")
        })
}

pub fn lattice(dims: usize, side: usize, bc: Boundary) -> Graph {
    Graph::lattice(&LatticeSpec::new(dims, side, bc).unwrap()).unwrap()
}

pub fn ring(n: usize) -> Graph {
    lattice(1, n, Boundary::Periodic)
}

pub fn chain(n: usize) -> Graph {
    lattice(1, n, Boundary::Open)
}
