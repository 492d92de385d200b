//! The exact rational coefficient chains behind the pure-state bounds.

use gef_bounds::bounds::coeffs::derive_coefficients;

pub fn run_example() -> gef_bounds::Result<()> {
    for step in derive_coefficients() {
        println!(
            "{:<5} {}{}",
            step.name,
            step.form,
            if step.sound { "" } else { "   [not a valid bound]" }
        );
        println!(
            "      via {}; matches published: {}",
            step.via.join(", "),
            step.matches
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gef_bounds::Result<()> {
    run_example()
}
