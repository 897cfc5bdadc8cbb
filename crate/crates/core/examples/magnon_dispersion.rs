// One-magnon plane waves on a ring: exact eigenstates with
// `dH/4J = 1 - cos k`.

use spin_energy::io::mtx::{sector_operator, OperatorKind};
use spin_energy::magnon::{magnon_energy, magnon_state};
use spin_energy::{Boundary, Graph, LatticeSpec};

pub fn run_example() -> spin_energy::Result<()> {
    let spec = LatticeSpec::chain(10, Boundary::Periodic)?;
    let g = Graph::lattice(&spec)?;
    let h = sector_operator(&g, 1, OperatorKind::DeltaH)?;
    let s2 = sector_operator(&g, 1, OperatorKind::DeltaS2)?;
    println!("{:>3} {:>10} {:>10} {:>10} {:>6}", "m", "dH/4J", "1-cos k", "residual", "dS2");
    for m in 0..10 {
        let v = magnon_state(&spec, &[m])?;
        println!(
            "{m:>3} {:>10.6} {:>10.6} {:>10.2e} {:>6.2}",
            v.expectation(&h)?,
            magnon_energy(&spec, &[m]),
            v.eigen_residual(&h)?,
            v.expectation(&s2)?
        );
    }
    Ok(())
}

fn main() -> spin_energy::Result<()> {
    run_example()
}
