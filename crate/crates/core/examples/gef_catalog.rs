//! GEF of the catalog states under both tri-party definitions, with the
//! weighted terms of one breakdown.

use gef_bounds::cli::catalog::{extended_bell, ghz, product, w3, BellKind, ExtendedBell};
use gef_bounds::gef::{gef_pure_tri, gef_pure_tri_modified};
use gef_bounds::qmat::PureState;

fn show(name: &str, psi: &PureState) -> gef_bounds::Result<()> {
    let original = gef_pure_tri(psi)?.total;
    let modified = gef_pure_tri_modified(psi)?.total;
    println!("{name:<18} original {original:.7}  modified {modified:.7}");
    Ok(())
}

pub fn run_example() -> gef_bounds::Result<()> {
    show("ghz3", &ghz(3)?)?;
    show("w3", &w3())?;
    show("product", &product(&[2, 2, 2])?)?;
    for which in ExtendedBell::ALL {
        // the spectator qubit does not change the value
        for (theta, phi) in [(0.0, 0.0), (0.7, 1.9)] {
            let psi = extended_bell(which, BellKind::PhiPlus, theta, phi);
            show(&format!("{} θ={theta}", which.name()), &psi)?;
        }
    }

    println!("\nW3 breakdown (original):");
    for t in gef_pure_tri(&w3())?.terms {
        println!(
            "  {:<4} {:<8} weight {:>3}  value {:.6}",
            t.subset,
            format!("{:?}", t.kind),
            t.weight,
            t.value
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gef_bounds::Result<()> {
    run_example()
}
