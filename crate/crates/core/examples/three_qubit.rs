// Spectrum of `a P01 + b P12 - P02` and its positivity region `ab >= a + b`.

use spin_energy::bounds::{three_qubit_eigenvalues, three_qubit_operator};
use spin_energy::eigen::sorted_symmetric_eigen;
use spin_energy::operators::full_space_dense;

pub fn run_example() -> spin_energy::Result<()> {
    println!("{:>5} {:>5} {:>10} {:>10} {:>10} psd", "a", "b", "lower", "upper", "dense min");
    for (a, b) in [(1.0, 1.0), (2.0, 2.0), (3.0, 1.5), (4.0, 1.2), (1.5, 2.5), (5.0, 5.0)] {
        let s = three_qubit_eigenvalues(a, b)?;
        let (vals, _) = sorted_symmetric_eigen(full_space_dense(&three_qubit_operator(a, b)));
        println!(
            "{a:>5.2} {b:>5.2} {:>10.6} {:>10.6} {:>10.6} {}",
            s.lower, s.upper, vals[0], s.psd
        );
    }
    Ok(())
}

fn main() -> spin_energy::Result<()> {
    run_example()
}
