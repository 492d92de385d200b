//! Seeded sampling of Haar-random states, Ginibre density matrices and Haar
//! unitaries.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::ComplexMatrix;
use super::state::{DensityMatrix, PartyDims, PureState};
use crate::error::{GefError, Result};

/// Splittable random source.
///
/// A source is identified by its seed; `derive(i)` yields the i-th child
/// stream as a pure function of (seed, i), so per-trial and per-restart
/// streams do not depend on how much randomness siblings consumed.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha20Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Stream for work item `index` under master seed `seed`.
    pub fn stream(seed: u64, index: u64) -> Self {
        Self::new(seed).derive(index)
    }

    pub fn derive(&self, index: u64) -> Self {
        Self::new(splitmix64(
            self.seed ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d)),
        ))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rng(&mut self) -> &mut ChaCha20Rng {
        &mut self.rng
    }

    pub fn gaussian(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Standard complex Gaussian with E|z|² = 1.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(self.gaussian() * s, self.gaussian() * s)
    }

    /// Uniform draw in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        rand::Rng::random(&mut self.rng)
    }

    /// Uniform integer in [lo, hi].
    pub fn range_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        rand::Rng::random_range(&mut self.rng, lo..=hi)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Haar-random pure state: normalized i.i.d. complex Gaussian vector.
pub fn random_haar_pure(dims: &PartyDims, rng: &mut RandomSource) -> PureState {
    let amps: Vec<Complex64> = (0..dims.total()).map(|_| rng.complex_gaussian()).collect();
    PureState::normalized(amps, dims.clone()).expect("gaussian vector is nonzero")
}

/// Ginibre density matrix GG†/tr(GG†) with G of shape d × rank.
pub fn random_density(dims: &PartyDims, rank: usize, rng: &mut RandomSource) -> Result<DensityMatrix> {
    let d = dims.total();
    if rank == 0 || rank > d {
        return Err(GefError::RankOutOfRange { rank, dim: d });
    }
    let g = ginibre(d, rank, rng);
    let ggt = g.matmul(&g.adjoint());
    let tr = ggt.trace().re;
    Ok(DensityMatrix::from_parts_unchecked(
        ggt.scale_real(1.0 / tr).symmetrized(),
        dims.clone(),
    ))
}

/// Haar-random d × d unitary from the QR factorization of a Ginibre matrix
/// with R's diagonal made positive.
pub fn random_unitary(d: usize, rng: &mut RandomSource) -> ComplexMatrix {
    let g = ginibre(d, d, rng);
    gram_schmidt_columns(&g)
}

/// Random local unitary U₁ ⊗ U₂ ⊗ … for the given dims.
pub fn random_local_unitary(dims: &PartyDims, rng: &mut RandomSource) -> ComplexMatrix {
    dims.as_slice()
        .iter()
        .map(|&d| random_unitary(d, rng))
        .reduce(|acc, u| super::matrix::kron(&acc, &u))
        .expect("at least one party")
}

fn ginibre(rows: usize, cols: usize, rng: &mut RandomSource) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| rng.complex_gaussian()).collect();
    ComplexMatrix::from_vec(rows, cols, data).expect("finite gaussian entries")
}

/// Modified Gram–Schmidt on the columns. Each R diagonal entry comes out real
/// and positive, which is the phase convention that makes Q Haar-distributed.
fn gram_schmidt_columns(g: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = (g.rows(), g.cols());
    let mut q: Vec<Vec<Complex64>> = (0..cols).map(|j| g.col(j)).collect();
    for j in 0..cols {
        for i in 0..j {
            let (head, tail) = q.split_at_mut(j);
            let proj: Complex64 = head[i].iter().zip(&tail[0]).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in tail[0].iter_mut().zip(&head[i]) {
                *x -= proj * y;
            }
        }
        let n = q[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut q[j] {
            *x /= n;
        }
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for (j, col) in q.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            out[(i, j)] = z;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::Subset;

    #[test]
    fn haar_state_normalized_and_deterministic() {
        let dims = PartyDims::qubits(3);
        for seed in 0..10 {
            let a = random_haar_pure(&dims, &mut RandomSource::new(seed));
            let n: f64 = a.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
            let b = random_haar_pure(&dims, &mut RandomSource::new(seed));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn derived_streams_are_independent_of_consumption() {
        let mut parent = RandomSource::new(7);
        let before = parent.derive(3);
        parent.gaussian();
        let after = parent.derive(3);
        assert_eq!(before.seed(), after.seed());
        assert_ne!(parent.derive(3).seed(), parent.derive(4).seed());
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = RandomSource::new(11);
        let u1 = random_unitary(1, &mut rng);
        assert!((u1[(0, 0)].norm() - 1.0).abs() < 1e-12);
        for _ in 0..20 {
            let u = random_unitary(4, &mut rng);
            let gram = u.adjoint().matmul(&u);
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-10);
            let col0 = u.col(0);
            let n: f64 = col0.iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ginibre_density_rank_and_trace() {
        let dims = PartyDims::qubits(3);
        let mut rng = RandomSource::new(5);
        let pure = random_density(&dims, 1, &mut rng).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-10);
        let full = random_density(&dims, 8, &mut rng).unwrap();
        assert!((full.matrix().trace().re - 1.0).abs() < 1e-12);
        for rank in 1..=8 {
            let rho = random_density(&dims, rank, &mut rng).unwrap();
            assert_eq!(rho.rank(1e-9).unwrap(), rank);
        }
        assert!(matches!(
            random_density(&dims, 9, &mut rng),
            Err(GefError::RankOutOfRange { .. })
        ));
        assert!(random_density(&dims, 0, &mut rng).is_err());
    }

    #[test]
    fn mean_marginal_purity_matches_lubkin() {
        // average purity of a 2-dim marginal of a Haar state in 2⊗4 is
        // (2 + 4) / (2·4 + 1) = 2/3
        let dims = PartyDims::qubits(3);
        let a = Subset::new(vec![0], 3).unwrap();
        let trials = 100_000;
        let mut acc = 0.0;
        for t in 0..trials {
            let mut rng = RandomSource::stream(2024, t);
            acc += random_haar_pure(&dims, &mut rng).reduced(&a).unwrap().purity();
        }
        let mean = acc / trials as f64;
        assert!((mean - 2.0 / 3.0).abs() < 0.01, "mean purity {mean}");
    }
}
