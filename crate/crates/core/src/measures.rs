//! Entropy and two-qubit entanglement measures, all in bits.

use num_complex::Complex64;

use crate::error::{GefError, Result};
use crate::qmat::{hermitian_eig, hermitian_eigenvalues, ComplexMatrix, DensityMatrix, PureState, Subset};
use crate::Bits;

/// Negative eigenvalues of the Wootters product down to this are clipped.
const WOOTTERS_CLIP: f64 = 1e-10;

/// −Σ λ log₂ λ over the clipped spectrum.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<Bits> {
    Ok(entropy_of_spectrum(&rho.spectrum()?))
}

/// Shannon entropy of an (already clipped) probability vector.
pub fn entropy_of_spectrum(spectrum: &[f64]) -> Bits {
    let s: f64 = spectrum
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum();
    s.max(0.0)
}

/// h(x) = −x log₂ x − (1−x) log₂(1−x).
pub fn binary_entropy(x: f64) -> Result<Bits> {
    const SLACK: f64 = 1e-12;
    if !(-SLACK..=1.0 + SLACK).contains(&x) {
        return Err(GefError::OutOfRange {
            value: x,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let x = x.clamp(0.0, 1.0);
    Ok(entropy_of_spectrum(&[x, 1.0 - x]))
}

fn spin_flip() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 3)] = Complex64::new(-1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m[(3, 0)] = Complex64::new(-1.0, 0.0);
    m
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims().as_slice() != [2, 2] {
        return Err(GefError::InvalidDims(format!(
            "two-qubit measure needs dims 2,2, got {}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Eigenvalues of ρ at or below this are left out of the support when
/// forming the Wootters product.
const WOOTTERS_SUPPORT_TOL: f64 = 1e-14;

/// Wootters concurrence of a two-qubit state.
///
/// The μᵢ are the eigenvalues of the Hermitian matrix S†ρ̃S, where
/// ρ = SS† with S = E√Λ over the support of ρ. It shares its nonzero spectrum
/// with √ρ ρ̃ √ρ, and for pure inputs it is 1 × 1, so no square root of
/// eigenvalue noise leaks into C.
pub fn concurrence_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let eig = hermitian_eig(rho.matrix())?;
    let support: Vec<usize> = (0..4).filter(|&i| eig.values[i] > WOOTTERS_SUPPORT_TOL).collect();
    let mut s = ComplexMatrix::zeros(4, support.len());
    for (col, &i) in support.iter().enumerate() {
        let w = eig.values[i].sqrt();
        for r in 0..4 {
            s[(r, col)] = eig.vectors[(r, i)] * w;
        }
    }
    let yy = spin_flip();
    let tilde = yy.matmul(&rho.matrix().conj()).matmul(&yy);
    let product = s.adjoint().matmul(&tilde).matmul(&s).symmetrized();
    let mut mu = hermitian_eigenvalues(&product)?;
    mu.reverse();
    mu.resize(4, 0.0);
    let roots: Vec<f64> = mu
        .iter()
        .map(|&m| {
            if m < -WOOTTERS_CLIP {
                0.0
            } else {
                m.max(0.0).sqrt()
            }
        })
        .collect();
    let c = roots[0] - roots[1] - roots[2] - roots[3];
    Ok(c.clamp(0.0, 1.0))
}

/// E_F(C) = h((1 + √(1 − C²)) / 2).
pub fn eof_from_concurrence(c: f64) -> Result<Bits> {
    const SLACK: f64 = 1e-12;
    if !(-SLACK..=1.0 + SLACK).contains(&c) {
        return Err(GefError::OutOfRange {
            value: c,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let c = c.clamp(0.0, 1.0);
    binary_entropy((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0)
}

/// Entanglement of a pure state across `cut` | rest: the entropy of the
/// reduced state on `cut`.
pub fn eof_pure_bipartite(psi: &PureState, cut: &Subset) -> Result<Bits> {
    let n = psi.parties();
    if cut.is_empty() || cut.len() >= n || cut.indices().iter().any(|&i| i >= n) {
        return Err(GefError::InvalidSubset(format!(
            "cut {cut} is not a proper nonempty subset of {n} parties"
        )));
    }
    // the smaller side has the cheaper spectrum; both sides agree
    let rest = cut.complement(n).expect("proper cut");
    let dims = psi.dims();
    let size = |s: &Subset| dims.select(s).total();
    let side = if size(&rest) < size(cut) { &rest } else { cut };
    von_neumann_entropy(&psi.reduced(side)?)
}

/// Exact two-qubit entanglement of formation via the concurrence.
pub fn eof_two_qubit_mixed(rho: &DensityMatrix) -> Result<Bits> {
    eof_from_concurrence(concurrence_two_qubit(rho)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{
        pure_to_density, random_density, random_haar_pure, random_local_unitary, random_unitary, PartyDims,
        RandomSource,
    };

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn phi_plus() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![c(h), c(0.0), c(0.0), c(h)], PartyDims::qubits(2)).unwrap()
    }

    fn werner(p: f64) -> DensityMatrix {
        let bell = pure_to_density(&phi_plus());
        let mixed = DensityMatrix::maximally_mixed(PartyDims::qubits(2));
        DensityMatrix::mixture(&[(p, &bell), (1.0 - p, &mixed)]).unwrap()
    }

    fn w3() -> PureState {
        let s = 1.0 / 3f64.sqrt();
        let mut a = vec![c(0.0); 8];
        a[1] = c(s);
        a[2] = c(s);
        a[4] = c(s);
        PureState::new(a, PartyDims::qubits(3)).unwrap()
    }

    #[test]
    fn entropy_fixed_points() {
        let pure = pure_to_density(&phi_plus());
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-10);
        let half = DensityMatrix::maximally_mixed(PartyDims::qubits(1));
        assert!((von_neumann_entropy(&half).unwrap() - 1.0).abs() < 1e-14);
        let d = DensityMatrix::new(
            ComplexMatrix::from_real_diagonal(&[1.0 / 3.0, 2.0 / 3.0]),
            PartyDims::qubits(1),
        )
        .unwrap();
        assert!((von_neumann_entropy(&d).unwrap() - 0.918296).abs() < 1e-6);
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((binary_entropy(1.0 / 3.0).unwrap() - 0.918296).abs() < 1e-6);
        assert!((binary_entropy(0.2).unwrap() - binary_entropy(0.8).unwrap()).abs() < 1e-15);
        assert!(binary_entropy(1.1).is_err());
        assert!(binary_entropy(-1e-13).is_ok());
    }

    #[test]
    fn concurrence_fixed_points() {
        let bell = pure_to_density(&phi_plus());
        assert!((concurrence_two_qubit(&bell).unwrap() - 1.0).abs() < 1e-9);
        let diag = DensityMatrix::new(
            ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]),
            PartyDims::qubits(2),
        )
        .unwrap();
        assert!(concurrence_two_qubit(&diag).unwrap().abs() < 1e-9);
        // closed form max(0, (3p − 1)/2)
        assert!((concurrence_two_qubit(&werner(0.5)).unwrap() - 0.25).abs() < 1e-9);
        assert!((concurrence_two_qubit(&werner(0.9)).unwrap() - 0.85).abs() < 1e-9);
        assert!(concurrence_two_qubit(&werner(0.2)).unwrap().abs() < 1e-9);
        let q = DensityMatrix::maximally_mixed(PartyDims::qubits(3));
        assert!(concurrence_two_qubit(&q).is_err());
    }

    #[test]
    fn eof_from_concurrence_values() {
        assert_eq!(eof_from_concurrence(0.0).unwrap(), 0.0);
        assert!((eof_from_concurrence(1.0).unwrap() - 1.0).abs() < 1e-15);
        // h((1 + √5/3)/2) evaluated independently
        assert!((eof_from_concurrence(2.0 / 3.0).unwrap() - 0.550_047_76).abs() < 1e-6);
        assert!(eof_from_concurrence(1.5).is_err());
        let mut prev = -1.0;
        for i in 0..=100 {
            let e = eof_from_concurrence(i as f64 / 100.0).unwrap();
            assert!(e > prev);
            prev = e;
        }
    }

    #[test]
    fn pure_bipartite_eof() {
        let a = Subset::new(vec![0], 2).unwrap();
        assert!((eof_pure_bipartite(&phi_plus(), &a).unwrap() - 1.0).abs() < 1e-12);
        let prod = PureState::basis(&[0, 1, 0], PartyDims::qubits(3)).unwrap();
        for cut in [vec![0], vec![1], vec![0, 2]] {
            let s = Subset::new(cut, 3).unwrap();
            assert!(eof_pure_bipartite(&prod, &s).unwrap().abs() < 1e-12);
        }
        let a3 = Subset::new(vec![0], 3).unwrap();
        assert!((eof_pure_bipartite(&w3(), &a3).unwrap() - 0.918296).abs() < 1e-6);
        let all = Subset::new(vec![0, 1], 2).unwrap();
        assert!(eof_pure_bipartite(&phi_plus(), &all).is_err());
    }

    #[test]
    fn werner_eof() {
        assert!((eof_two_qubit_mixed(&pure_to_density(&phi_plus())).unwrap() - 1.0).abs() < 1e-9);
        // C = 0.85 for p = 0.9; h((1 + √(1 − 0.85²))/2) evaluated independently
        assert!((eof_two_qubit_mixed(&werner(0.9)).unwrap() - 0.789_354_96).abs() < 1e-5);
    }

    #[test]
    fn local_unitary_invariance_of_concurrence() {
        let dims = PartyDims::qubits(2);
        for seed in 0..20 {
            let mut rng = RandomSource::new(seed);
            let rho = random_density(&dims, 1 + (seed as usize % 4), &mut rng).unwrap();
            let u = random_local_unitary(&dims, &mut rng);
            let c0 = concurrence_two_qubit(&rho).unwrap();
            let c1 = concurrence_two_qubit(&rho.conjugate_by(&u).unwrap()).unwrap();
            assert!((c0 - c1).abs() < 1e-8);
        }
    }

    #[test]
    fn entropy_bounds_and_unitary_invariance() {
        let dims = PartyDims::qubits(3);
        for seed in 0..20 {
            let mut rng = RandomSource::new(100 + seed);
            let rho = random_density(&dims, 1 + (seed as usize % 8), &mut rng).unwrap();
            let s = von_neumann_entropy(&rho).unwrap();
            assert!((-1e-9..=3.0 + 1e-9).contains(&s));
            let u = random_unitary(8, &mut rng);
            let s2 = von_neumann_entropy(&rho.conjugate_by(&u).unwrap()).unwrap();
            assert!((s - s2).abs() < 1e-9);
        }
    }

    #[test]
    fn wootters_reduces_to_marginal_entropy_on_pure_states() {
        let dims = PartyDims::qubits(2);
        let a = Subset::new(vec![0], 2).unwrap();
        for seed in 0..50 {
            let psi = random_haar_pure(&dims, &mut RandomSource::new(seed));
            let direct = eof_pure_bipartite(&psi, &a).unwrap();
            let woot = eof_two_qubit_mixed(&pure_to_density(&psi)).unwrap();
            assert!((direct - woot).abs() < 1e-8, "seed {seed}: {direct} vs {woot}");
        }
    }
}
