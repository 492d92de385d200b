//! Named special states: GHZ, W, Bell, product, Werner and the four
//! extended-Bell families.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{GefError, Result};
use crate::qmat::{pure_to_density, DensityMatrix, PartyDims, PureState, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl FromStr for BellKind {
    type Err = GefError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi+" => Ok(Self::PhiPlus),
            "phi-" => Ok(Self::PhiMinus),
            "psi+" => Ok(Self::PsiPlus),
            "psi-" => Ok(Self::PsiMinus),
            _ => Err(GefError::Config(format!(
                "unknown Bell state {s:?} (expected phi+, phi-, psi+ or psi-)"
            ))),
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PhiPlus => "phi+",
            Self::PhiMinus => "phi-",
            Self::PsiPlus => "psi+",
            Self::PsiMinus => "psi-",
        })
    }
}

impl BellKind {
    fn sign(self) -> f64 {
        match self {
            Self::PhiPlus | Self::PsiPlus => 1.0,
            Self::PhiMinus | Self::PsiMinus => -1.0,
        }
    }

    fn flips(self) -> bool {
        matches!(self, Self::PsiPlus | Self::PsiMinus)
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The Bell state of the given kind on two qubits.
pub fn bell(kind: BellKind) -> PureState {
    let mut amps = vec![c(0.0); 4];
    if kind.flips() {
        amps[1] = c(FRAC_1_SQRT_2);
        amps[2] = c(kind.sign() * FRAC_1_SQRT_2);
    } else {
        amps[0] = c(FRAC_1_SQRT_2);
        amps[3] = c(kind.sign() * FRAC_1_SQRT_2);
    }
    PureState::normalized(amps, PartyDims::qubits(2)).expect("Bell state")
}

/// (|0…0⟩ + |1…1⟩)/√2 on `n` qubits.
pub fn ghz(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(GefError::Config("GHZ needs at least 2 qubits".into()));
    }
    let dims = PartyDims::qubits(n);
    let mut amps = vec![c(0.0); dims.total()];
    amps[0] = c(FRAC_1_SQRT_2);
    amps[dims.total() - 1] = c(FRAC_1_SQRT_2);
    PureState::normalized(amps, dims)
}

/// (|001⟩ + |010⟩ + |100⟩)/√3.
pub fn w3() -> PureState {
    let mut amps = vec![c(0.0); 8];
    for i in [1, 2, 4] {
        amps[i] = c(1.0);
    }
    PureState::normalized(amps, PartyDims::qubits(3)).expect("W state")
}

/// |0…0⟩ over the given local dimensions.
pub fn product(dims: &[usize]) -> Result<PureState> {
    let dims = PartyDims::new(dims.to_vec())?;
    PureState::basis(&vec![0; dims.parties()], dims)
}

/// p|Φ⁺⟩⟨Φ⁺| + (1 − p) I/4.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GefError::OutOfRange {
            value: p,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let bell = pure_to_density(&bell(BellKind::PhiPlus));
    let noise = DensityMatrix::maximally_mixed(PartyDims::qubits(2));
    DensityMatrix::mixture(&[(p, &bell), (1.0 - p, &noise)])
}

/// Spectator qubit cos θ|0⟩ + e^{iφ} sin θ|1⟩.
pub fn spectator(theta: f64, phi: f64) -> PureState {
    let amps = vec![c(theta.cos()), Complex64::from_polar(theta.sin(), phi)];
    PureState::normalized(amps, PartyDims::qubits(1)).expect("spectator")
}

/// Where the Bell pair of an extended Bell state sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtendedBell {
    /// |φ⟩_AB ⊗ |χ⟩_C
    Ab,
    /// (|0⟩|χ⟩|0⟩ ± |1⟩|χ⟩|1⟩)/√2
    Ac1,
    /// (|0⟩|χ⟩|1⟩ ± |1⟩|χ⟩|0⟩)/√2
    Ac2,
    /// |χ⟩_A ⊗ |φ⟩_BC
    Bc,
}

impl ExtendedBell {
    pub const ALL: [ExtendedBell; 4] = [Self::Ab, Self::Ac1, Self::Ac2, Self::Bc];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ab => "eb_ab",
            Self::Ac1 => "eb_ac1",
            Self::Ac2 => "eb_ac2",
            Self::Bc => "eb_bc",
        }
    }
}

/// Extended Bell state with spectator angles (θ, φ). For `Ac1` and `Ac2`
/// only the sign of `kind` matters; the pairing is fixed by the variant.
pub fn extended_bell(which: ExtendedBell, kind: BellKind, theta: f64, phi: f64) -> PureState {
    let chi = spectator(theta, phi);
    match which {
        ExtendedBell::Ab => bell(kind).tensor(&chi),
        ExtendedBell::Bc => chi.tensor(&bell(kind)),
        ExtendedBell::Ac1 | ExtendedBell::Ac2 => {
            let flip = which == ExtendedBell::Ac2;
            let sign = kind.sign();
            let x = chi.amplitudes();
            let mut amps = vec![c(0.0); 8];
            for (b, xb) in x.iter().enumerate() {
                let (c0, c1) = if flip { (1, 0) } else { (0, 1) };
                amps[b * 2 + c0] += xb * FRAC_1_SQRT_2;
                amps[4 + b * 2 + c1] += xb * (sign * FRAC_1_SQRT_2);
            }
            PureState::normalized(amps, PartyDims::qubits(3)).expect("extended Bell state")
        }
    }
}

/// Parameters accepted by [`build`]; unused ones are ignored.
#[derive(Debug, Clone)]
pub struct CatalogParams {
    pub n: usize,
    pub p: f64,
    pub theta: f64,
    pub phi: f64,
    pub bell: BellKind,
    pub dims: Vec<usize>,
}

impl Default for CatalogParams {
    fn default() -> Self {
        Self {
            n: 3,
            p: 1.0,
            theta: 0.0,
            phi: 0.0,
            bell: BellKind::PhiPlus,
            dims: vec![2, 2, 2],
        }
    }
}

pub const NAMES: [&str; 10] = [
    "ghz",
    "w3",
    "bell",
    "product",
    "werner",
    "eb_ab",
    "eb_ac1",
    "eb_ac2",
    "eb_bc",
    "bell_bell",
];

/// Builds the named catalog state.
pub fn build(name: &str, params: &CatalogParams) -> Result<State> {
    let eb = |which| {
        Ok(State::Pure(extended_bell(
            which,
            params.bell,
            params.theta,
            params.phi,
        )))
    };
    match name {
        "ghz" => Ok(State::Pure(ghz(params.n)?)),
        "w3" => Ok(State::Pure(w3())),
        "bell" => Ok(State::Pure(bell(params.bell))),
        "bell_bell" => Ok(State::Pure(bell(params.bell).tensor(&bell(params.bell)))),
        "product" => Ok(State::Pure(product(&params.dims)?)),
        "werner" => Ok(State::Mixed(werner(params.p)?)),
        "eb_ab" => eb(ExtendedBell::Ab),
        "eb_ac1" => eb(ExtendedBell::Ac1),
        "eb_ac2" => eb(ExtendedBell::Ac2),
        "eb_bc" => eb(ExtendedBell::Bc),
        _ => Err(GefError::Config(format!(
            "unknown catalog state {name:?}; known: {}",
            NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(psi: &PureState, i: usize) -> Complex64 {
        psi.amplitudes()[i]
    }

    #[test]
    fn ghz3_amplitudes() {
        let g = ghz(3).unwrap();
        for (i, a) in g.amplitudes().iter().enumerate() {
            let want = if i == 0 || i == 7 { FRAC_1_SQRT_2 } else { 0.0 };
            assert!((a - c(want)).norm() < 1e-15);
        }
    }

    #[test]
    fn eb_ac1_with_ground_spectator() {
        let s = extended_bell(ExtendedBell::Ac1, BellKind::PhiPlus, 0.0, 0.0);
        // (|000⟩ + |101⟩)/√2
        assert!((amp(&s, 0) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((amp(&s, 5) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        let rest: f64 = (0..8)
            .filter(|i| ![0, 5].contains(i))
            .map(|i| amp(&s, i).norm())
            .sum();
        assert!(rest < 1e-15);
    }

    #[test]
    fn eb_ac2_minus_with_excited_spectator() {
        let s = extended_bell(
            ExtendedBell::Ac2,
            BellKind::PhiMinus,
            std::f64::consts::FRAC_PI_2,
            0.0,
        );
        // (|011⟩ − |110⟩)/√2
        assert!((amp(&s, 3) - c(FRAC_1_SQRT_2)).norm() < 1e-12);
        assert!((amp(&s, 6) + c(FRAC_1_SQRT_2)).norm() < 1e-12);
    }

    #[test]
    fn werner_endpoints() {
        let w = werner(1.0).unwrap();
        let b = pure_to_density(&bell(BellKind::PhiPlus));
        assert!(w.matrix().max_abs_diff(b.matrix()) < 1e-12);
        let w0 = werner(0.0).unwrap();
        assert!((w0.purity() - 0.25).abs() < 1e-12);
        assert!(werner(1.5).is_err());
    }

    #[test]
    fn unknown_name_is_an_error() {
        assert!(build("nope", &CatalogParams::default()).is_err());
        assert!(ghz(1).is_err());
    }
}
