// Smallest constant with `dS2 <= c dH/4J`, and the state that attains it.

use spin_energy::spectral::PencilOptions;
use spin_energy::{certify_inequality, optimal_constant, Boundary, CertifyOptions, Graph, LatticeSpec};

pub fn run_example() -> spin_energy::Result<()> {
    let graphs = [
        ("edge", Graph::from_edge_list([(0, 1)])?),
        ("triangle", Graph::complete(3)?),
        ("ring 4", Graph::lattice(&LatticeSpec::chain(4, Boundary::Periodic)?)?),
        ("ring 8", Graph::lattice(&LatticeSpec::chain(8, Boundary::Periodic)?)?),
        ("open 5", Graph::lattice(&LatticeSpec::chain(5, Boundary::Open)?)?),
    ];
    for (name, g) in &graphs {
        let res = optimal_constant(g, &PencilOptions::default())?;
        let w = res.witness;
        let above = certify_inequality(g, res.c_star * (1.0 + 1e-9), &CertifyOptions::default())?;
        let below = certify_inequality(g, res.c_star * (1.0 - 1e-6), &CertifyOptions::default())?;
        println!(
            "{name:<9} c* = {:<12.6} witness sector {} (dH/4J = {:.4}, dS2 = {:.4})  pass above {} below {}",
            res.c_star, w.n_flipped, w.delta_h, w.delta_s2, above.pass, below.pass
        );
    }
    Ok(())
}

fn main() -> spin_energy::Result<()> {
    run_example()
}
