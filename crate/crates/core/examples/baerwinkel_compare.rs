// Our linear bound against the affine spectral bound from a weakly
// homogeneous coupling matrix.

use spin_energy::bounds::{baerwinkel_bound, compare_bounds, default_x_max, lattice_constant};
use spin_energy::{Boundary, Graph, LatticeSpec};

pub fn run_example() -> spin_energy::Result<()> {
    for n in [4, 6, 8] {
        let spec = LatticeSpec::chain(n, Boundary::Periodic)?;
        let g = Graph::lattice(&spec)?;
        let ours = lattice_constant(&spec)?;
        let theirs = baerwinkel_bound(&g, 1.0, 0.5)?;
        let cmp = compare_bounds(&ours, &theirs.bound, default_x_max(&g));
        println!(
            "ring {n}: ours {}x, spectral {:.4}x + {:.4}, crossover at {:?}",
            ours.slope, theirs.bound.slope, theirs.bound.offset, cmp.crossovers
        );
        for s in &cmp.segments {
            println!("    [{:.4}, {:.4}] tighter: {:?}", s.from, s.to, s.tighter);
        }
    }
    Ok(())
}

fn main() -> spin_energy::Result<()> {
    run_example()
}
