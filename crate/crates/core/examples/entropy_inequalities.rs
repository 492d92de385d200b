//! Subsystem entropies of a Haar-random three-qubit state and the
//! entropy-only registry entries evaluated on it.

use gef_bounds::bounds::{evaluate_inequality, InequalityId, Tolerances};
use gef_bounds::gef::pure_subset_entropy;
use gef_bounds::qmat::{random_haar_pure, PartyDims, RandomSource, State, Subset};
use gef_bounds::roof::RoofConfig;

pub fn run_example() -> gef_bounds::Result<()> {
    let mut rng = RandomSource::new(7);
    let psi = random_haar_pure(&PartyDims::qubits(3), &mut rng);

    for size in 1..=2 {
        for s in Subset::all_of_size(3, size) {
            println!("S({}) = {:.6} bits", s, pure_subset_entropy(&psi, &s)?);
        }
    }

    let state = State::Pure(psi);
    let cfg = RoofConfig::default();
    let tol = Tolerances::default();
    for id in InequalityId::exact_entries()
        .into_iter()
        .filter(|id| id.applies_to(&state))
    {
        let r = evaluate_inequality(id, &state, &cfg, &tol)?;
        println!("{:<5} {:>9.6} vs {:>9.6}  {}", id, r.lhs, r.rhs, r.verdict);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gef_bounds::Result<()> {
    run_example()
}
