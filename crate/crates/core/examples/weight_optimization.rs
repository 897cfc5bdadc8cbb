// Path weights for open chains: uniform loads against optimized ones.

use spin_energy::bounds::lattice_constant;
use spin_energy::weights::{assignment_constant, optimize_weights, uniform_assignment, OptimizeParams, PathChoice};
use spin_energy::{Boundary, Graph, LatticeSpec};

pub fn run_example() -> spin_energy::Result<()> {
    for n in 3..=7 {
        let spec = LatticeSpec::chain(n, Boundary::Open)?;
        let g = Graph::lattice(&spec)?;
        let uniform = uniform_assignment(&g, PathChoice::Canonical)?;
        let (loads, _) = assignment_constant(&g, &uniform)?;
        let opt = optimize_weights(&g, &uniform, &OptimizeParams::default())?;
        println!(
            "N = {n}: closed form {:>4}  uniform {:>4}  optimized {:.6} (dual {:.6}, {} iterations)",
            lattice_constant(&spec)?.slope,
            loads.max_load,
            opt.loads.max_load,
            opt.lower_bound,
            opt.iterations
        );
        let fmt: Vec<String> = opt.loads.loads.iter().map(|l| format!("{l:.3}")).collect();
        println!("        edge loads [{}]", fmt.join(", "));
    }
    Ok(())
}

fn main() -> spin_energy::Result<()> {
    run_example()
}
