// Arbitrary coupling graphs from an edge list.

use spin_energy::bounds::{closed_form_constant, ClosedForm};
use spin_energy::io::parse_edge_list;
use spin_energy::spectral::PencilOptions;
use spin_energy::{certify_inequality, optimal_constant, CertifyOptions};

const HOUSE: &str = "\
# square with a roof
0 1
1 2
2 3
3 0
2 4
3 4
";

pub fn run_example() -> spin_energy::Result<()> {
    let g = parse_edge_list(HOUSE)?;
    let generic = closed_form_constant(ClosedForm::Generic { n_sites: g.n_sites() })?;
    let diameter = closed_form_constant(ClosedForm::Diameter(&g))?;
    let best = optimal_constant(&g, &PencilOptions::default())?;
    println!("{} sites, {} edges, diameter {}", g.n_sites(), g.n_edges(), g.diameter());
    for (name, c) in [("generic", generic.slope), ("diameter", diameter.slope), ("optimal", best.c_star)] {
        let cert = certify_inequality(&g, c * (1.0 + 1e-9), &CertifyOptions::default())?;
        println!("{name:<9} c = {c:<10.4} pass = {}", cert.pass);
    }
    Ok(())
}

fn main() -> spin_energy::Result<()> {
    run_example()
}
