//! Closed-form two-qubit entanglement of formation along the Werner family.

use gef_bounds::cli::catalog::werner;
use gef_bounds::measures::{concurrence_two_qubit, eof_two_qubit_mixed};

pub fn run_example() -> gef_bounds::Result<()> {
    println!("   p   concurrence   E_F (bits)");
    for i in 0..=10 {
        let p = i as f64 / 10.0;
        let rho = werner(p)?;
        println!(
            "{p:4.1}   {:11.6}   {:10.6}",
            concurrence_two_qubit(&rho)?,
            eof_two_qubit_mixed(&rho)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gef_bounds::Result<()> {
    run_example()
}
