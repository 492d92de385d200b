//! Four-party GEF of GHZ4 and of two Bell pairs, with the triple roofs that
//! enter it and the aggregate γ₂.

use gef_bounds::cli::catalog::{bell, ghz, BellKind};
use gef_bounds::gef::{gamma2_four, gef_pure_four_from_roofs, triple_roofs_pure, TermKind};
use gef_bounds::qmat::{pure_to_density, PureState};
use gef_bounds::roof::RoofConfig;

fn show(name: &str, psi: &PureState, cfg: &RoofConfig) -> gef_bounds::Result<()> {
    let roofs = triple_roofs_pure(psi, cfg)?;
    let b = gef_pure_four_from_roofs(psi, &roofs, cfg)?;
    println!("{name}: GEF {:.6}", b.total);
    for r in &roofs {
        println!("  E_GF({}) = {:.6}", r.triple, r.result.value);
    }
    println!(
        "  ΣS1 {:.4}  ΣS2 {:.4}  ΣE2 {:.4}",
        b.sum(TermKind::Entropy, 1),
        b.sum(TermKind::Entropy, 2),
        b.sum(TermKind::Eof, 2)
    );
    let (_, g) = gamma2_four(&pure_to_density(psi), &roofs, cfg)?;
    match g.value {
        Some(v) => println!("  γ₂ = {v:.4}"),
        None => println!("  γ₂ undefined (no pair entanglement)"),
    }
    Ok(())
}

pub fn run_example() -> gef_bounds::Result<()> {
    let cfg = RoofConfig {
        restarts: 3,
        max_evals: 600,
        ..RoofConfig::default()
    }
    .with_seed(5);
    show("ghz4", &ghz(4)?, &cfg)?;
    let phi = bell(BellKind::PhiPlus);
    show("bell ⊗ bell", &phi.tensor(&phi), &cfg)?;
    println!("expected 1 and 32/21 = {:.6}", 32.0 / 21.0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> gef_bounds::Result<()> {
    run_example()
}
