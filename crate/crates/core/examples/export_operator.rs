// Writes a sector block to Matrix Market and reads it back.

use spin_energy::io::{export_operator, read_matrix_market, OperatorKind};
use spin_energy::{Boundary, Graph, LatticeSpec};

pub fn run_example() -> spin_energy::Result<()> {
    let g = Graph::lattice(&LatticeSpec::chain(6, Boundary::Periodic)?)?;
    let path = std::env::temp_dir().join(format!("ring6-sector3-{}.mtx", std::process::id()));
    let summary = export_operator(&g, 3, OperatorKind::DeltaH, &path)?;
    println!(
        "{}: {}x{} with {} stored entries",
        summary.path, summary.dim, summary.dim, summary.stored_entries
    );
    let back = read_matrix_market(&path)?;
    let trace: f64 = back.entries.iter().filter(|e| e.0 == e.1).map(|e| e.2).sum();
    println!("read back {} entries, trace {trace}", back.entries.len());
    std::fs::remove_file(&path)?;
    Ok(())
}

fn main() -> spin_energy::Result<()> {
    run_example()
}
