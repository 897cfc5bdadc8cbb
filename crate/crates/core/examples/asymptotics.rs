// Growth of the constants with lattice size: closed forms against their
// leading terms, and the optimal constant on rings.

use spin_energy::bounds::{open_exact, open_leading_coefficient, periodic_exact, periodic_leading_coefficient};
use spin_energy::spectral::PencilOptions;
use spin_energy::{optimal_constant, Boundary, Graph, LatticeSpec};

pub fn run_example() -> spin_energy::Result<()> {
    use num_traits::ToPrimitive;
    let n = 64usize;
    for d in 1..=3 {
        let scale = (n as f64).powi(d as i32 + 2);
        let p = periodic_exact(&vec![n; d]).to_f64().unwrap_or(f64::NAN) / (periodic_leading_coefficient(d) * scale);
        let o = open_exact(&vec![n; d]).to_f64().unwrap_or(f64::NAN) / (open_leading_coefficient(d) * scale);
        println!("D = {d}, N = {n}: periodic ratio {p:.5}, open ratio {o:.5}");
    }
    let mut pts = Vec::new();
    for side in [6, 8, 10, 12] {
        let g = Graph::lattice(&LatticeSpec::chain(side, Boundary::Periodic)?)?;
        let c = optimal_constant(&g, &PencilOptions::default())?.c_star;
        println!("ring {side:>2}: c* = {c:.4}");
        pts.push(((side as f64).ln(), c.ln()));
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    println!("log-log slope of c* over these rings: {slope:.3}");
    Ok(())
}

fn main() -> spin_energy::Result<()> {
    run_example()
}
