//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{GefError, Result};

/// Maximum number of full sweeps over the off-diagonal pairs.
pub const MAX_SWEEPS: usize = 100;
/// Sweeps stop once the off-diagonal Frobenius mass drops below this
/// fraction of the matrix norm.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
/// Accepted Hermiticity defect, relative to max(1, max |m_ij|).
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in ascending order and matching eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Rebuilds V f(Λ) V†.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.values.len();
        let fvals: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = fvals
                    .iter()
                    .enumerate()
                    .map(|(k, &f)| self.vectors[(i, k)] * f * self.vectors[(j, k)].conj())
                    .sum();
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| Complex64::new(l, 0.0))
    }
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let (values, vectors) = jacobi(m, true)?;
    Ok(HermitianEigen {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

/// Eigenvalues only, ascending. Skips the eigenvector accumulation.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    jacobi(m, false).map(|(values, _)| values)
}

fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    if !m.is_square() {
        return Err(GefError::Shape(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(GefError::NotHermitian(defect));
    }
    let mut a = m.symmetrized();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let scale = a.frobenius_norm();
    if scale == 0.0 || n == 1 {
        let values = (0..n).map(|i| a[(i, i)].re).collect();
        return Ok((values, v));
    }

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= OFF_DIAGONAL_TOL * scale {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, v.as_mut(), p, q, scale);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > OFF_DIAGONAL_TOL * scale {
        return Err(GefError::EigenNoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.map(|v| {
        let mut sorted = ComplexMatrix::zeros(n, n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for r in 0..n {
                sorted[(r, new_col)] = v[(r, old_col)];
            }
        }
        sorted
    });
    Ok((values, vectors))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Annihilates a[p][q] with the unitary J = diag(1, e^{-iφ}) · R(θ) acting on
/// the (p, q) plane, where a_pq = |a_pq| e^{iφ}. Applies A ← J†AJ, V ← VJ.
fn rotate(a: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize, scale: f64) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b <= 1e-300 || b <= f64::EPSILON * 1e-3 * scale {
        return;
    }
    let phase = apq / b; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * b);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let n = a.rows();
    let ph_conj = phase.conj();

    // columns: A ← A J
    for r in 0..n {
        let xp = a[(r, p)];
        let xq = a[(r, q)];
        a[(r, p)] = xp * c - xq * ph_conj * s;
        a[(r, q)] = xp * s + xq * ph_conj * c;
    }
    // rows: A ← J† A
    for col in 0..n {
        let xp = a[(p, col)];
        let xq = a[(q, col)];
        a[(p, col)] = xp * c - xq * phase * s;
        a[(q, col)] = xp * s + xq * phase * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    if let Some(v) = v {
        for r in 0..n {
            let xp = v[(r, p)];
            let xq = v[(r, q)];
            v[(r, p)] = xp * c - xq * ph_conj * s;
            v[(r, q)] = xp * s + xq * ph_conj * c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::random::RandomSource;
    use rand_distr::{Distribution, StandardNormal};

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = RandomSource::new(seed);
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let re: f64 = StandardNormal.sample(rng.rng());
                let im: f64 = StandardNormal.sample(rng.rng());
                m[(i, j)] = Complex64::new(re, im);
            }
        }
        m.symmetrized()
    }

    #[test]
    fn identity_eigenvalues() {
        let e = hermitian_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
    }

    #[test]
    fn pauli_x_eigenvalues() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let x = ComplexMatrix::from_vec(2, 2, vec![zero, one, one, zero]).unwrap();
        let e = hermitian_eig(&x).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        for seed in 0..20 {
            let m = random_hermitian(8, seed);
            let e = hermitian_eig(&m).unwrap();
            assert!(e.reconstruct().max_abs_diff(&m) < 1e-10);
            let gram = e.vectors.adjoint().matmul(&e.vectors);
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(8)) < 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            // M v = λ v column by column
            for k in 0..8 {
                let col = e.vectors.col(k);
                let mv = m.matvec(&col);
                let err = mv
                    .iter()
                    .zip(&col)
                    .map(|(a, b)| (a - b * e.values[k]).norm())
                    .fold(0.0, f64::max);
                assert!(err <= 1e-9 * m.max_abs());
            }
        }
    }

    #[test]
    fn values_only_matches_full() {
        let m = random_hermitian(6, 99);
        let full = hermitian_eig(&m).unwrap().values;
        let only = hermitian_eigenvalues(&m).unwrap();
        for (a, b) in full.iter().zip(&only) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        assert!(matches!(
            hermitian_eig(&ComplexMatrix::zeros(2, 3)),
            Err(GefError::Shape(_))
        ));
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(hermitian_eig(&m), Err(GefError::NotHermitian(_))));
    }
}
