// Closed-form lattice constants, certified sector by sector.

use spin_energy::bounds::lattice_constant;
use spin_energy::{certify_inequality, Boundary, CertifyOptions, Graph, LatticeSpec};

pub fn run_example() -> spin_energy::Result<()> {
    let specs = [
        LatticeSpec::chain(6, Boundary::Periodic)?,
        LatticeSpec::chain(8, Boundary::Open)?,
        LatticeSpec::new(2, 3, Boundary::Periodic)?,
        LatticeSpec::with_extents(vec![4, 3], Boundary::Open)?,
    ];
    for spec in &specs {
        let g = Graph::lattice(spec)?;
        let bound = lattice_constant(spec)?;
        let cert = certify_inequality(&g, bound.slope, &CertifyOptions::default())?;
        println!(
            "{spec:<16} c = {:<8} lambda_min = {:>10.3e} sectors = {:>2} pass = {}",
            bound.exact_slope.as_deref().unwrap_or("?"),
            cert.lambda_min,
            cert.sectors.len(),
            cert.pass
        );
    }
    Ok(())
}

fn main() -> spin_energy::Result<()> {
    run_example()
}
