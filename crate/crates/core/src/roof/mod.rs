//! Convex-roof extension of pure-state functionals.
//!
//! Every decomposition {pⱼ, ψⱼ} of ρ = Σ λᵢ|eᵢ⟩⟨eᵢ| with k members arises from
//! a k × r isometry V through ψ̃ⱼ = Σᵢ V*ⱼᵢ √λᵢ |eᵢ⟩, pⱼ = ‖ψ̃ⱼ‖². The search
//! parameterizes V as the first r columns of exp(A) with A anti-Hermitian and
//! runs Nelder–Mead over the k² real generator coordinates. Results are upper
//! estimates of the true roof.

mod simplex;

pub use simplex::{nelder_mead, SimplexOptions, SimplexOutcome};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GefError, Result};
use crate::qmat::{hermitian_eig, ComplexMatrix, DensityMatrix, PartyDims, PureState, RandomSource};
use crate::Bits;

/// Eigenvalues at or below this are outside the support used for
/// decompositions.
pub const RANK_TOL: f64 = 1e-10;
/// Members lighter than this are dropped from a decomposition.
const MIN_WEIGHT: f64 = 1e-14;
const ISOMETRY_TOL: f64 = 1e-8;

/// A pure-state decomposition Σ pᵢ |ψᵢ⟩⟨ψᵢ|.
#[derive(Debug, Clone)]
pub struct Decomposition {
    probabilities: Vec<f64>,
    members: Vec<PureState>,
}

impl Decomposition {
    pub fn new(probabilities: Vec<f64>, members: Vec<PureState>) -> Result<Self> {
        if probabilities.len() != members.len() || members.is_empty() {
            return Err(GefError::Config(
                "decomposition needs one weight per member".into(),
            ));
        }
        if probabilities.iter().any(|&p| p < 0.0) {
            return Err(GefError::Config("negative decomposition weight".into()));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(GefError::Config(format!("weights sum to {total}")));
        }
        let dims = members[0].dims();
        if members.iter().any(|m| m.dims() != dims) {
            return Err(GefError::InvalidDims("members with different dims".into()));
        }
        Ok(Self {
            probabilities,
            members,
        })
    }

    /// One-member decomposition of a pure state.
    pub fn single(psi: PureState) -> Self {
        Self {
            probabilities: vec![1.0],
            members: vec![psi],
        }
    }

    /// Spectral decomposition of `rho` over its support.
    pub fn eigen(rho: &DensityMatrix) -> Result<Self> {
        let spectral = Spectral::new(rho)?;
        spectral.decompose(&ComplexMatrix::identity(spectral.rank()))
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn members(&self) -> &[PureState] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dims(&self) -> &PartyDims {
        self.members[0].dims()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &PureState)> {
        self.probabilities.iter().copied().zip(self.members.iter())
    }

    /// Σ pᵢ |ψᵢ⟩⟨ψᵢ|.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dims().total();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (p, psi) in self.iter() {
            acc = &acc + &ComplexMatrix::outer(psi.amplitudes()).scale_real(p);
        }
        acc
    }

    /// Largest entry deviation between the mixture and `rho`.
    pub fn mixture_defect(&self, rho: &DensityMatrix) -> f64 {
        if self.dims() != rho.dims() {
            return f64::INFINITY;
        }
        self.reconstruct().max_abs_diff(rho.matrix())
    }
}

/// Scaled support vectors √λᵢ|eᵢ⟩ of a density matrix.
#[derive(Debug, Clone)]
pub struct Spectral {
    dims: PartyDims,
    scaled: Vec<Vec<Complex64>>,
}

impl Spectral {
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        let eig = hermitian_eig(rho.matrix())?;
        let d = rho.dim();
        // largest eigenvalues first so the identity isometry lists the
        // dominant member first
        let scaled = (0..d)
            .rev()
            .filter(|&i| eig.values[i] > RANK_TOL)
            .map(|i| {
                let w = eig.values[i].sqrt();
                (0..d).map(|r| eig.vectors[(r, i)] * w).collect()
            })
            .collect();
        Ok(Self {
            dims: rho.dims().clone(),
            scaled,
        })
    }

    pub fn rank(&self) -> usize {
        self.scaled.len()
    }

    /// Decomposition induced by the k × r isometry `v` (no isometry check).
    fn decompose_unchecked(&self, v: &ComplexMatrix) -> Result<Decomposition> {
        let d = self.dims.total();
        let mut probabilities = Vec::with_capacity(v.rows());
        let mut members = Vec::with_capacity(v.rows());
        for j in 0..v.rows() {
            let mut amps = vec![Complex64::new(0.0, 0.0); d];
            for (i, s) in self.scaled.iter().enumerate() {
                let coeff = v[(j, i)].conj();
                if coeff.re == 0.0 && coeff.im == 0.0 {
                    continue;
                }
                for (a, x) in amps.iter_mut().zip(s) {
                    *a += coeff * x;
                }
            }
            let p: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
            if p > MIN_WEIGHT {
                probabilities.push(p);
                members.push(PureState::normalized(amps, self.dims.clone())?);
            }
        }
        let total: f64 = probabilities.iter().sum();
        for p in &mut probabilities {
            *p /= total;
        }
        Ok(Decomposition {
            probabilities,
            members,
        })
    }

    /// Decomposition induced by the k × r isometry `v`.
    pub fn decompose(&self, v: &ComplexMatrix) -> Result<Decomposition> {
        let r = self.rank();
        if v.cols() != r || v.rows() < r {
            return Err(GefError::Shape(format!(
                "isometry must be k x {r} with k >= {r}, got {}x{}",
                v.rows(),
                v.cols()
            )));
        }
        let gram = v.adjoint().matmul(v);
        let defect = gram.max_abs_diff(&ComplexMatrix::identity(r));
        if defect > ISOMETRY_TOL {
            return Err(GefError::NotIsometry(defect));
        }
        self.decompose_unchecked(v)
    }
}

/// Decomposition of `rho` induced by the isometry `v` (k × rank).
pub fn decomposition_from_isometry(rho: &DensityMatrix, v: &ComplexMatrix) -> Result<Decomposition> {
    Spectral::new(rho)?.decompose(v)
}

/// First `r` columns of exp(iH), where H is the k × k Hermitian matrix whose
/// diagonal and upper-triangle real/imaginary parts are read from `params`
/// (k² entries).
pub fn isometry_from_generator(params: &[f64], k: usize, r: usize) -> Result<ComplexMatrix> {
    if params.len() != k * k || r > k {
        return Err(GefError::Shape(format!(
            "generator needs {} parameters for k = {k}, got {}",
            k * k,
            params.len()
        )));
    }
    let mut h = ComplexMatrix::zeros(k, k);
    let mut it = params.iter().copied();
    for i in 0..k {
        h[(i, i)] = Complex64::new(it.next().expect("len checked"), 0.0);
    }
    for i in 0..k {
        for j in i + 1..k {
            let re = it.next().expect("len checked");
            let im = it.next().expect("len checked");
            h[(i, j)] = Complex64::new(re, im);
            h[(j, i)] = Complex64::new(re, -im);
        }
    }
    let u = hermitian_eig(&h)?.map_spectrum(|l| Complex64::from_polar(1.0, l));
    let mut v = ComplexMatrix::zeros(k, r);
    for i in 0..k {
        for j in 0..r {
            v[(i, j)] = u[(i, j)];
        }
    }
    Ok(v)
}

/// Σ pᵢ f(ψᵢ).
pub fn roof_average<F>(d: &Decomposition, f: F) -> Result<Bits>
where
    F: Fn(&PureState) -> Result<Bits>,
{
    d.iter().map(|(p, psi)| Ok(p * f(psi)?)).sum()
}

/// Search budget for [`minimize_convex_roof`].
#[derive(Debug, Clone, Serialize)]
pub struct RoofConfig {
    /// Members per decomposition; `None` means rank + 2.
    pub cardinality: Option<usize>,
    pub restarts: usize,
    /// Objective evaluations per restart.
    pub max_evals: usize,
    /// Simplex value spread that counts as converged.
    pub tolerance: f64,
    pub seed: u64,
    /// Initial simplex edge in generator coordinates.
    pub initial_step: f64,
    /// Restarts for roofs nested inside another roof's functional.
    pub inner_restarts: usize,
    /// Evaluations per restart for nested roofs.
    pub inner_max_evals: usize,
    /// A known lower bound of the functional; the search stops once a
    /// decomposition reaches it within `tolerance`.
    pub known_floor: Option<f64>,
}

impl Default for RoofConfig {
    fn default() -> Self {
        Self {
            cardinality: None,
            restarts: 8,
            max_evals: 2000,
            tolerance: 1e-7,
            seed: 0,
            initial_step: 0.6,
            inner_restarts: 2,
            inner_max_evals: 300,
            known_floor: None,
        }
    }
}

impl RoofConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(GefError::Config("roof restarts must be at least 1".into()));
        }
        if self.max_evals == 0 || self.inner_max_evals == 0 || self.inner_restarts == 0 {
            return Err(GefError::Config("roof budgets must be positive".into()));
        }
        Ok(())
    }

    /// Configuration for roofs evaluated inside an outer functional, seeded by
    /// `index` so each nested call is reproducible on its own.
    pub fn nested(&self, index: u64) -> RoofConfig {
        RoofConfig {
            cardinality: None,
            restarts: self.inner_restarts,
            max_evals: self.inner_max_evals,
            tolerance: self.tolerance,
            seed: RandomSource::new(self.seed).derive(index).seed(),
            initial_step: self.initial_step,
            inner_restarts: self.inner_restarts,
            inner_max_evals: self.inner_max_evals,
            known_floor: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RoofResult {
    pub value: Bits,
    pub decomposition: Decomposition,
    /// Whether the winning restart's simplex met the spread tolerance.
    pub converged: bool,
    pub restarts_used: usize,
    /// Index of the restart that produced `value`.
    pub best_restart: usize,
    /// Always true: the search can only certify an upper bound on the roof.
    pub is_estimate: bool,
    /// Best value per simplex iteration in the winning restart.
    pub history: Vec<f64>,
}

struct RestartOutcome {
    index: usize,
    value: f64,
    params: Vec<f64>,
    converged: bool,
    history: Vec<f64>,
}

/// Minimizes Σ pᵢ f(ψᵢ) over decompositions of `rho`.
///
/// Restart 0 starts at the spectral decomposition, so the result never exceeds
/// the eigendecomposition average. The remaining restarts start from random
/// generators drawn from per-restart streams. Each restart refines by
/// re-running the simplex from its best point with a halved step until its
/// evaluation budget is spent or it stops improving.
pub fn minimize_convex_roof<F>(rho: &DensityMatrix, f: F, cfg: &RoofConfig) -> Result<RoofResult>
where
    F: Fn(&PureState) -> Result<Bits> + Sync,
{
    cfg.validate()?;
    let spectral = Spectral::new(rho)?;
    let r = spectral.rank();
    if r == 0 {
        return Err(GefError::InvalidDensity("state has empty support".into()));
    }
    if r == 1 {
        let decomposition = spectral.decompose_unchecked(&ComplexMatrix::identity(1))?;
        let value = roof_average(&decomposition, &f)?;
        return Ok(RoofResult {
            value,
            decomposition,
            converged: true,
            restarts_used: 0,
            best_restart: 0,
            is_estimate: true,
            history: vec![value],
        });
    }
    let k = cfg.cardinality.unwrap_or(r + 2);
    if k < r {
        return Err(GefError::Config(format!("cardinality {k} below rank {r}")));
    }
    let n = k * k;
    let master = RandomSource::new(cfg.seed);

    let objective = |params: &[f64]| -> Result<f64> {
        let v = isometry_from_generator(params, k, r)?;
        let d = spectral.decompose_unchecked(&v)?;
        roof_average(&d, &f)
    };

    let first = run_restart(0, vec![0.0; n], &objective, cfg)?;
    let at_floor = |v: f64| cfg.known_floor.is_some_and(|f| v <= f + cfg.tolerance);
    let outcomes: Vec<Result<RestartOutcome>> = if at_floor(first.value) {
        Vec::new()
    } else {
        (1..cfg.restarts)
            .into_par_iter()
            .map(|index| {
                let mut rng = master.derive(index as u64);
                let start = (0..n).map(|_| rng.gaussian()).collect();
                run_restart(index, start, &objective, cfg)
            })
            .collect()
    };
    let restarts_used = 1 + outcomes.len();

    let mut best: Option<RestartOutcome> = Some(first);
    for o in outcomes {
        let o = o?;
        // strict comparison keeps the lowest index on exact ties
        if best.as_ref().is_none_or(|b| o.value < b.value) {
            best = Some(o);
        }
    }
    let best = best.expect("at least one restart");
    let v = isometry_from_generator(&best.params, k, r)?;
    let decomposition = spectral.decompose_unchecked(&v)?;
    let value = roof_average(&decomposition, &f)?;
    Ok(RoofResult {
        value,
        decomposition,
        converged: best.converged,
        restarts_used,
        best_restart: best.index,
        is_estimate: true,
        history: best.history,
    })
}

fn run_restart(
    index: usize,
    start: Vec<f64>,
    objective: &(dyn Fn(&[f64]) -> Result<f64> + Sync),
    cfg: &RoofConfig,
) -> Result<RestartOutcome> {
    let mut error: Option<GefError> = None;
    let mut wrapped = |x: &[f64]| match objective(x) {
        Ok(v) => v,
        Err(e) => {
            error.get_or_insert(e);
            f64::INFINITY
        }
    };
    let mut remaining = cfg.max_evals;
    let mut step = cfg.initial_step;
    let mut x = start;
    let mut value = f64::INFINITY;
    let mut converged = false;
    let mut history: Vec<f64> = Vec::new();
    while remaining > 0 {
        let out = nelder_mead(
            &mut wrapped,
            &x,
            SimplexOptions {
                step,
                max_evals: remaining,
                tol: cfg.tolerance,
                floor: cfg.known_floor,
            },
        );
        remaining = remaining.saturating_sub(out.evals);
        let improvement = value - out.value;
        for h in out.history {
            history.push(history.last().map_or(h, |&last: &f64| last.min(h)));
        }
        if out.value <= value {
            x = out.x;
            value = out.value;
        }
        converged = out.converged;
        let floor_reached = cfg.known_floor.is_some_and(|f| value <= f + cfg.tolerance);
        if floor_reached || !out.converged || improvement.abs() < cfg.tolerance || step < 1e-4 {
            break;
        }
        step *= 0.5;
    }
    if let Some(e) = error {
        return Err(e);
    }
    Ok(RestartOutcome {
        index,
        value,
        params: x,
        converged,
        history,
    })
}
