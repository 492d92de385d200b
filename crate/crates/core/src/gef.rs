//! Generalized entanglement of formation.
//!
//! Tri-party pure states use the equal-weight average
//!
//! ```text
//! E_GF = 1/6 [E_F(AB) + E_F(AC) + E_F(BC) + S(AB) + S(AC) + S(BC) + S(A) + S(B) + S(C)]
//! ```
//!
//! or the modified form weighting the three E_F terms by 1/3 and the six
//! entropies by 1/6. Four-party pure states average all 24 subsystem terms
//! with weight 1/14: the four triple GEFs (mixed-state roofs), the six pair
//! E_F, and the fourteen subsystem entropies. Mixed states take the convex roof
//! of the pure definition.

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GefError, Result};
use crate::measures::{eof_pure_bipartite, eof_two_qubit_mixed, von_neumann_entropy};
use crate::qmat::{DensityMatrix, PureState, RandomSource, Subset};
use crate::roof::{minimize_convex_roof, roof_average, Decomposition, RoofConfig, RoofResult};
use crate::Bits;

/// Denominators below this leave a γ/δ ratio undefined.
pub const RATIO_DENOMINATOR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Definition {
    Original,
    Modified,
    FourParty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TermKind {
    Entropy,
    Eof,
    SubGef,
}

/// A measured quantity and whether it is a roof estimate (an upper bound on
/// the exact value) rather than an exact evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluated {
    pub value: Bits,
    pub is_estimate: bool,
}

impl Evaluated {
    pub fn exact(value: Bits) -> Self {
        Self {
            value,
            is_estimate: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GefTerm {
    pub subset: Subset,
    pub kind: TermKind,
    pub weight: Rational64,
    pub value: Bits,
    pub is_estimate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GefBreakdown {
    pub total: Bits,
    pub terms: Vec<GefTerm>,
    pub definition: Definition,
}

impl GefBreakdown {
    fn from_terms(terms: Vec<GefTerm>, definition: Definition) -> Self {
        let total = terms.iter().map(|t| weight_f64(t.weight) * t.value).sum();
        Self {
            total,
            terms,
            definition,
        }
    }

    pub fn is_estimate(&self) -> bool {
        self.terms.iter().any(|t| t.is_estimate)
    }

    /// Unweighted sum of the term values of `kind` over subsets of `size`.
    pub fn sum(&self, kind: TermKind, size: usize) -> Bits {
        self.terms
            .iter()
            .filter(|t| t.kind == kind && t.subset.len() == size)
            .map(|t| t.value)
            .sum()
    }

    pub fn term(&self, kind: TermKind, subset: &Subset) -> Option<&GefTerm> {
        self.terms.iter().find(|t| t.kind == kind && &t.subset == subset)
    }
}

pub(crate) fn weight_f64(w: Rational64) -> f64 {
    *w.numer() as f64 / *w.denom() as f64
}

fn require_parties(n: usize, expected: usize) -> Result<()> {
    if n != expected {
        return Err(GefError::PartyCount {
            expected: expected.to_string(),
            got: n,
        });
    }
    Ok(())
}

/// Entropy of a subsystem of a pure state, using the smaller side of the cut.
pub fn pure_subset_entropy(psi: &PureState, subset: &Subset) -> Result<Bits> {
    if subset.len() == psi.parties() {
        return Ok(0.0);
    }
    eof_pure_bipartite(psi, subset)
}

/// E_F of a bipartite state: Wootters for two qubits, otherwise the roof of
/// the pure-state marginal entropy (flagged as an estimate).
pub fn gef_bipartite(rho: &DensityMatrix, cfg: &RoofConfig) -> Result<Evaluated> {
    require_parties(rho.parties(), 2)?;
    if rho.dims().is_qubits() {
        return Ok(Evaluated::exact(eof_two_qubit_mixed(rho)?));
    }
    let cut = Subset::new(vec![0], 2)?;
    let res = minimize_convex_roof(rho, |psi| eof_pure_bipartite(psi, &cut), &floored(cfg))?;
    Ok(Evaluated {
        value: res.value,
        is_estimate: true,
    })
}

/// Every functional minimized here is nonnegative.
fn floored(cfg: &RoofConfig) -> RoofConfig {
    RoofConfig {
        known_floor: cfg.known_floor.or(Some(0.0)),
        ..cfg.clone()
    }
}

fn tri_terms(psi: &PureState, cfg: &RoofConfig, eof_weight: Rational64) -> Result<Vec<GefTerm>> {
    require_parties(psi.parties(), 3)?;
    let sixth = Rational64::new(1, 6);
    let mut terms = Vec::with_capacity(9);
    for (i, pair) in Subset::all_of_size(3, 2).into_iter().enumerate() {
        let e = gef_bipartite(&psi.reduced(&pair)?, &cfg.nested(i as u64))?;
        terms.push(GefTerm {
            subset: pair,
            kind: TermKind::Eof,
            weight: eof_weight,
            value: e.value,
            is_estimate: e.is_estimate,
        });
    }
    for size in [2, 1] {
        for subset in Subset::all_of_size(3, size) {
            let value = pure_subset_entropy(psi, &subset)?;
            terms.push(GefTerm {
                subset,
                kind: TermKind::Entropy,
                weight: sixth,
                value,
                is_estimate: false,
            });
        }
    }
    Ok(terms)
}

/// Original tri-party definition, all nine terms at weight 1/6.
pub fn gef_pure_tri(psi: &PureState) -> Result<GefBreakdown> {
    gef_pure_tri_with(psi, &RoofConfig::default())
}

/// As [`gef_pure_tri`], with the roof budget used for non-qubit pairs.
pub fn gef_pure_tri_with(psi: &PureState, cfg: &RoofConfig) -> Result<GefBreakdown> {
    let terms = tri_terms(psi, cfg, Rational64::new(1, 6))?;
    Ok(GefBreakdown::from_terms(terms, Definition::Original))
}

/// Modified tri-party definition: E_F terms at 1/3, entropies at 1/6.
pub fn gef_pure_tri_modified(psi: &PureState) -> Result<GefBreakdown> {
    gef_pure_tri_modified_with(psi, &RoofConfig::default())
}

pub fn gef_pure_tri_modified_with(psi: &PureState, cfg: &RoofConfig) -> Result<GefBreakdown> {
    let terms = tri_terms(psi, cfg, Rational64::new(1, 3))?;
    Ok(GefBreakdown::from_terms(terms, Definition::Modified))
}

/// Convex roof of the original tri-party definition.
pub fn gef_mixed_tri(rho: &DensityMatrix, cfg: &RoofConfig) -> Result<RoofResult> {
    require_parties(rho.parties(), 3)?;
    let inner = cfg.nested(0);
    minimize_convex_roof(
        rho,
        |psi| Ok(gef_pure_tri_with(psi, &inner)?.total),
        &floored(cfg),
    )
}

/// Convex roof of the modified tri-party definition.
pub fn gef_mixed_tri_modified(rho: &DensityMatrix, cfg: &RoofConfig) -> Result<RoofResult> {
    require_parties(rho.parties(), 3)?;
    let inner = cfg.nested(0);
    minimize_convex_roof(
        rho,
        |psi| Ok(gef_pure_tri_modified_with(psi, &inner)?.total),
        &floored(cfg),
    )
}

/// The roof of one triple marginal of a four-party state.
#[derive(Debug, Clone)]
pub struct TripleRoof {
    pub triple: Subset,
    pub marginal: DensityMatrix,
    pub result: RoofResult,
}

/// Config for the roof of triple number `index`.
fn triple_config(cfg: &RoofConfig, index: usize) -> RoofConfig {
    RoofConfig {
        seed: RandomSource::new(cfg.seed).derive(1000 + index as u64).seed(),
        ..cfg.clone()
    }
}

fn roofs_of_triples(marginals: Vec<(Subset, DensityMatrix)>, cfg: &RoofConfig) -> Result<Vec<TripleRoof>> {
    marginals
        .into_par_iter()
        .enumerate()
        .map(|(i, (triple, marginal))| {
            let result = gef_mixed_tri(&marginal, &triple_config(cfg, i))?;
            Ok(TripleRoof {
                triple,
                marginal,
                result,
            })
        })
        .collect()
}

/// Tri-party GEF roofs of the four triple marginals of a pure four-party state.
pub fn triple_roofs_pure(psi: &PureState, cfg: &RoofConfig) -> Result<Vec<TripleRoof>> {
    require_parties(psi.parties(), 4)?;
    let marginals = Subset::all_of_size(4, 3)
        .into_iter()
        .map(|t| Ok((t.clone(), psi.reduced(&t)?)))
        .collect::<Result<Vec<_>>>()?;
    roofs_of_triples(marginals, cfg)
}

/// Tri-party GEF roofs of the four triple marginals of a four-party state.
pub fn triple_roofs(rho: &DensityMatrix, cfg: &RoofConfig) -> Result<Vec<TripleRoof>> {
    require_parties(rho.parties(), 4)?;
    let marginals = Subset::all_of_size(4, 3)
        .into_iter()
        .map(|t| Ok((t.clone(), crate::qmat::partial_trace(rho, &t)?)))
        .collect::<Result<Vec<_>>>()?;
    roofs_of_triples(marginals, cfg)
}

/// Four-party pure definition: 24 terms at weight 1/14. The triple GEF terms
/// are roofs run with `cfg` and are flagged as estimates.
pub fn gef_pure_four(psi: &PureState, cfg: &RoofConfig) -> Result<GefBreakdown> {
    let roofs = triple_roofs_pure(psi, cfg)?;
    gef_pure_four_from_roofs(psi, &roofs, cfg)
}

/// Four-party breakdown reusing already computed triple roofs.
pub fn gef_pure_four_from_roofs(
    psi: &PureState,
    roofs: &[TripleRoof],
    cfg: &RoofConfig,
) -> Result<GefBreakdown> {
    require_parties(psi.parties(), 4)?;
    let w = Rational64::new(1, 14);
    let mut terms = Vec::with_capacity(24);
    for r in roofs {
        terms.push(GefTerm {
            subset: r.triple.clone(),
            kind: TermKind::SubGef,
            weight: w,
            value: r.result.value,
            is_estimate: true,
        });
    }
    for (i, pair) in Subset::all_of_size(4, 2).into_iter().enumerate() {
        let e = gef_bipartite(&psi.reduced(&pair)?, &cfg.nested(100 + i as u64))?;
        terms.push(GefTerm {
            subset: pair,
            kind: TermKind::Eof,
            weight: w,
            value: e.value,
            is_estimate: e.is_estimate,
        });
    }
    for size in [3, 2, 1] {
        for subset in Subset::all_of_size(4, size) {
            let value = pure_subset_entropy(psi, &subset)?;
            terms.push(GefTerm {
                subset,
                kind: TermKind::Entropy,
                weight: w,
                value,
                is_estimate: false,
            });
        }
    }
    Ok(GefBreakdown::from_terms(terms, Definition::FourParty))
}

/// Convex roof of the four-party definition. The functional runs its own
/// triple roofs with the nested budget of `cfg`, so the cost is roughly
/// outer evaluations × members × 4 × inner evaluations.
pub fn gef_mixed_four(rho: &DensityMatrix, cfg: &RoofConfig) -> Result<RoofResult> {
    require_parties(rho.parties(), 4)?;
    let inner = cfg.nested(0);
    minimize_convex_roof(rho, |psi| Ok(gef_pure_four(psi, &inner)?.total), &floored(cfg))
}

/// A ratio with its denominator; `value` is `None` when the denominator is
/// below [`RATIO_DENOMINATOR_TOL`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ratio {
    pub value: Option<f64>,
    pub numerator: f64,
    pub denominator: f64,
}

impl Ratio {
    fn new(numerator: f64, denominator: f64) -> Self {
        Self {
            value: (denominator.abs() >= RATIO_DENOMINATOR_TOL).then(|| numerator / denominator),
            numerator,
            denominator,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripleGamma {
    pub triple: Subset,
    pub gamma2: Ratio,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoofDiagnostics {
    pub gamma2_per_triple: Vec<TripleGamma>,
    pub gamma2: Ratio,
    pub gamma3: Option<Ratio>,
    pub delta2: Option<Ratio>,
}

/// Pair E_F sum of a pure state, seeding pair `i` with `cfg.nested(offset + i)`
/// exactly as the GEF breakdowns do.
fn pair_eof_sum_pure(psi: &PureState, pairs: &[Subset], cfg: &RoofConfig, offset: u64) -> Result<Bits> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, p)| Ok(gef_bipartite(&psi.reduced(p)?, &cfg.nested(offset + i as u64))?.value))
        .sum()
}

fn pair_eof_sum_mixed(rho: &DensityMatrix, pairs: &[Subset], cfg: &RoofConfig) -> Result<Bits> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let m = crate::qmat::partial_trace(rho, p)?;
            Ok(gef_bipartite(&m, &cfg.nested(100 + i as u64))?.value)
        })
        .sum()
}

/// γ₂ of a tri-party state for the decomposition `d`:
/// ½ Σᵢ pᵢ Σ_pairs E_F(member pair) / Σ_pairs E_F(ρ pair).
///
/// Member pairs are evaluated with the nested config [`gef_mixed_tri`] hands
/// its functional for the same `cfg`, so for a roof decomposition the
/// numerator reuses the values the roof averaged.
pub fn gamma2_tri(rho: &DensityMatrix, d: &Decomposition, cfg: &RoofConfig) -> Result<Ratio> {
    require_parties(rho.parties(), 3)?;
    let pairs = Subset::all_of_size(3, 2);
    let inner = cfg.nested(0);
    let num = 0.5 * roof_average(d, |psi| pair_eof_sum_pure(psi, &pairs, &inner, 0))?;
    let den = pair_eof_sum_mixed(rho, &pairs, cfg)?;
    Ok(Ratio::new(num, den))
}

/// Per-triple γ₂ and the aggregate γ₂ of a four-party state from its triple
/// roofs. The aggregate multiplies the per-triple definition out,
/// Σ_XYZ ½ Σⱼ qⱼ Σ_pairs E_F / (2 Σ_six pairs E_F), so triples whose own
/// denominator vanishes still contribute their (finite) numerators.
pub fn gamma2_four(
    rho: &DensityMatrix,
    roofs: &[TripleRoof],
    cfg: &RoofConfig,
) -> Result<(Vec<TripleGamma>, Ratio)> {
    require_parties(rho.parties(), 4)?;
    let mut per_triple = Vec::with_capacity(4);
    let mut numerator = 0.0;
    for (i, r) in roofs.iter().enumerate() {
        let g = gamma2_tri(&r.marginal, &r.result.decomposition, &triple_config(cfg, i))?;
        numerator += g.numerator;
        per_triple.push(TripleGamma {
            triple: r.triple.clone(),
            gamma2: g,
        });
    }
    let six = pair_eof_sum_mixed(rho, &Subset::all_of_size(4, 2), cfg)?;
    Ok((per_triple, Ratio::new(numerator, 2.0 * six)))
}

/// γ₂ (per triple and aggregate), γ₃ and δ₂ for `rho` and its decomposition
/// `d`. Four-party inputs rerun the triple roofs with `cfg`; `d` is expected
/// to come from [`gef_mixed_four`] with the same `cfg`, so the member triple
/// values entering γ₃ are the ones the roof itself averaged.
pub fn diagnostics(rho: &DensityMatrix, d: &Decomposition, cfg: &RoofConfig) -> Result<RoofDiagnostics> {
    check_decomposition(rho, d)?;
    match rho.parties() {
        3 => {
            let g = gamma2_tri(rho, d, cfg)?;
            Ok(RoofDiagnostics {
                gamma2_per_triple: vec![TripleGamma {
                    triple: Subset::new(vec![0, 1, 2], 3)?,
                    gamma2: g,
                }],
                gamma2: g,
                gamma3: None,
                delta2: None,
            })
        }
        4 => {
            let roofs = triple_roofs(rho, cfg)?;
            diagnostics_four(rho, d, &roofs, cfg)
        }
        n => Err(GefError::PartyCount {
            expected: "3 or 4".into(),
            got: n,
        }),
    }
}

fn check_decomposition(rho: &DensityMatrix, d: &Decomposition) -> Result<()> {
    if d.dims() != rho.dims() {
        return Err(GefError::InvalidDims(
            "decomposition does not match the state".into(),
        ));
    }
    if d.mixture_defect(rho) > 1e-8 {
        return Err(GefError::InvalidDensity(
            "decomposition does not reproduce the state".into(),
        ));
    }
    Ok(())
}

/// Four-party diagnostics reusing the triple roofs of `rho`.
pub fn diagnostics_four(
    rho: &DensityMatrix,
    d: &Decomposition,
    roofs: &[TripleRoof],
    cfg: &RoofConfig,
) -> Result<RoofDiagnostics> {
    check_decomposition(rho, d)?;
    let (per_triple, gamma2) = gamma2_four(rho, roofs, cfg)?;
    let inner = cfg.nested(0);
    let pairs = Subset::all_of_size(4, 2);
    // δ₂/6 · ΣE(ρ) = 1/14 · Σ pᵢ ΣE(ψᵢ)
    let member_pairs = roof_average(d, |psi| pair_eof_sum_pure(psi, &pairs, &inner, 100))?;
    let rho_pairs = pair_eof_sum_mixed(rho, &pairs, cfg)?;
    let delta2 = Ratio::new(6.0 / 14.0 * member_pairs, rho_pairs);
    // 3γ₃/12 · ΣE_GF(ρ triples) = 1/14 · Σ pᵢ ΣE_GF(ψᵢ triples)
    let member_triples = roof_average(d, |psi| {
        Ok(triple_roofs_pure(psi, &inner)?
            .iter()
            .map(|r| r.result.value)
            .sum())
    })?;
    let rho_triples: f64 = roofs.iter().map(|r| r.result.value).sum();
    let gamma3 = Ratio::new(12.0 / (3.0 * 14.0) * member_triples, rho_triples);
    Ok(RoofDiagnostics {
        gamma2_per_triple: per_triple,
        gamma2,
        gamma3: Some(gamma3),
        delta2: Some(delta2),
    })
}

/// Subsystem entropy of a (possibly mixed) state.
pub fn subset_entropy(rho: &DensityMatrix, subset: &Subset) -> Result<Bits> {
    von_neumann_entropy(&crate::qmat::partial_trace(rho, subset)?)
}
