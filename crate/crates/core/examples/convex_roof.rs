//! Numerical convex roof of the entanglement entropy, checked against the
//! two-qubit closed form, and a separable mixture whose roof vanishes.

use gef_bounds::cli::catalog::{ghz, werner};
use gef_bounds::gef::{gef_mixed_tri, pure_subset_entropy};
use gef_bounds::measures::eof_two_qubit_mixed;
use gef_bounds::qmat::{
    pure_to_density, random_density, DensityMatrix, PartyDims, PureState, RandomSource, Subset,
};
use gef_bounds::roof::{minimize_convex_roof, RoofConfig};

pub fn run_example() -> gef_bounds::Result<()> {
    let first = Subset::new(vec![0], 2)?;
    let cfg = RoofConfig::default().with_seed(11);
    let mut rng = RandomSource::new(3);

    let mut states = vec![("werner(0.9)".to_string(), werner(0.9)?)];
    for i in 0..3 {
        states.push((
            format!("ginibre #{i}"),
            random_density(&PartyDims::qubits(2), 3, &mut rng)?,
        ));
    }
    for (name, rho) in &states {
        let roof = minimize_convex_roof(rho, |psi| pure_subset_entropy(psi, &first), &cfg)?;
        let exact = eof_two_qubit_mixed(rho)?;
        println!(
            "{name:<12} roof {:.6}  closed form {:.6}  members {}  restarts {}",
            roof.value,
            exact,
            roof.decomposition.len(),
            roof.restarts_used
        );
    }

    // ½(|000⟩⟨000| + |111⟩⟨111|) is separable
    let dims = PartyDims::qubits(3);
    let zero = pure_to_density(&PureState::basis(&[0, 0, 0], dims.clone())?);
    let one = pure_to_density(&PureState::basis(&[1, 1, 1], dims)?);
    let mix = DensityMatrix::mixture(&[(0.5, &zero), (0.5, &one)])?;
    let r = gef_mixed_tri(&mix, &cfg)?;
    println!("GHZ-diagonal mixture: GEF roof {:.2e}", r.value);
    let r = gef_mixed_tri(&pure_to_density(&ghz(3)?), &cfg)?;
    println!("GHZ as a density matrix: GEF roof {:.6}", r.value);
    Ok(())
}

#[allow(dead_code)]
fn main() -> gef_bounds::Result<()> {
    run_example()
}
