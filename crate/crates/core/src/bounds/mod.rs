//! Registry of entropy and GEF inequalities, evaluated per state into slack
//! records with three-valued verdicts, plus the exact coefficient chains.
//!
//! Roof values are upper estimates Ê ≥ E. A failed check whose smaller side
//! carries an estimate is reported inconclusive rather than violated, because
//! the estimate may simply have overshot. Everything else fails as violated.

pub mod coeffs;
mod context;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{GefError, Result};
use crate::qmat::{State, Subset};
use crate::roof::RoofConfig;
use crate::Bits;
use coeffs::Term;
use context::Context;

pub use coeffs::{derive_coefficients, Coef, CoefficientStep, LinearForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateClass {
    Pure,
    Mixed,
    Any,
}

/// Which way the inequality points, read left to right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// lhs ≤ rhs
    AtMost,
    /// lhs ≥ rhs
    AtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
    Skipped,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Skipped => "skipped",
        })
    }
}

/// Soundness rule for one comparison. `slack` is oriented so that ≥ 0 means
/// the inequality holds.
pub fn verdict(
    slack: f64,
    lhs_estimate: bool,
    rhs_estimate: bool,
    orientation: Orientation,
    tol: f64,
) -> Verdict {
    if !slack.is_finite() {
        return Verdict::Skipped;
    }
    if slack >= -tol {
        return Verdict::Holds;
    }
    let smaller_side_estimated = match orientation {
        Orientation::AtMost => lhs_estimate,
        Orientation::AtLeast => rhs_estimate,
    };
    if smaller_side_estimated {
        Verdict::Inconclusive
    } else {
        Verdict::Violated
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// For comparisons between exactly computed quantities.
    pub exact: f64,
    /// For comparisons involving a roof estimate.
    pub estimate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            exact: 1e-8,
            estimate: 1e-3,
        }
    }
}

macro_rules! registry {
    ($($id:ident = $name:literal, [$($n:literal),+], $class:ident, $orient:ident, $roof:literal, $stmt:literal;)+) => {
        /// Registry entries, declared in evaluation order.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum InequalityId {
            $($id,)+
        }

        impl InequalityId {
            pub const ALL: &'static [InequalityId] = &[$(InequalityId::$id,)+];

            pub fn name(self) -> &'static str {
                match self {
                    $(InequalityId::$id => $name,)+
                }
            }

            /// Party counts the entry applies to.
            pub fn parties(self) -> &'static [usize] {
                match self {
                    $(InequalityId::$id => &[$($n),+],)+
                }
            }

            pub fn class(self) -> StateClass {
                match self {
                    $(InequalityId::$id => StateClass::$class,)+
                }
            }

            pub fn orientation(self) -> Orientation {
                match self {
                    $(InequalityId::$id => Orientation::$orient,)+
                }
            }

            /// Whether evaluating the entry runs a convex roof on qubit states.
            pub fn needs_roof(self) -> bool {
                match self {
                    $(InequalityId::$id => $roof,)+
                }
            }

            pub fn statement(self) -> &'static str {
                match self {
                    $(InequalityId::$id => $stmt,)+
                }
            }
        }
    };
}

registry! {
    T1 = "T1", [3, 4], Any, AtMost, false, "S(X)+S(Y) <= S(XZ)+S(YZ), every role assignment";
    T2 = "T2", [3, 4], Any, AtMost, false, "S(XYZ)+S(Y) <= S(XY)+S(YZ), every role assignment";
    T3 = "T3", [3, 4], Any, AtMost, false, "sum S(singles) <= sum S(pairs), per triple";
    T4 = "T4", [3, 4], Any, AtMost, false, "3 S(XYZ) + sum S(singles) <= 2 sum S(pairs), per triple";
    F1 = "F1", [4], Any, AtMost, false, "sum S(singles) <= 2/3 sum S(pairs)";
    F2 = "F2", [4], Any, AtMost, false, "sum S(singles) <= sum S(triples)";
    F3 = "F3", [4], Any, AtMost, false, "sum S(triples) + sum S(singles) <= 4/3 sum S(pairs)";
    E1 = "E1", [2, 3, 4], Any, AtMost, false, "E_F(XY) <= min(S(X), S(Y)), every pair";
    P3U = "P3U", [3], Pure, AtMost, false, "E_GF <= 1/6 sum S(pairs) + 1/3 sum S(singles)";
    P3L = "P3L", [3], Pure, AtLeast, false, "E_GF >= 1/6 sum E_F(pairs) + 1/3 sum S(singles)";
    P3U2 = "P3U2", [3], Pure, AtMost, false, "E_GF <= 1/2 sum S(pairs)";
    P3L2 = "P3L2", [3], Pure, AtLeast, false, "E_GF >= 1/2 sum E_F(pairs)";
    B3U = "B3U", [3], Pure, AtMost, false, "modified E_GF <= 2/3 sum S(pairs)";
    B3L = "B3L", [3], Pure, AtLeast, false, "modified E_GF >= 2/3 sum E_F(pairs)";
    M3U = "M3U", [3], Any, AtMost, true, "E_GF(rho) <= 1/6 sum S(pairs) + 1/3 sum S(singles)";
    M3L = "M3L", [3], Mixed, AtLeast, true, "E_GF(rho) >= (1+g2)/3 sum E_F(pairs)";
    M3LFree = "M3L-free", [3], Mixed, AtLeast, true, "E_GF(rho) >= 1/3 sum E_F(pairs)";
    FSU1 = "FS-U1", [4], Any, AtMost, true, "sum E_GF(triples) <= 1/3 sum S(pairs) + sum S(singles)";
    FSU2 = "FS-U2", [4], Any, AtMost, false, "1/3 sum S(pairs) + sum S(singles) <= sum S(pairs)";
    FSL = "FS-L", [4], Any, AtLeast, true, "sum E_GF(triples) >= 2(1+g2)/3 sum E_F(pairs)";
    FSLFree = "FS-L-free", [4], Any, AtLeast, true, "sum E_GF(triples) >= 2/3 sum E_F(pairs)";
    FPU1 = "FP-U1", [4], Any, AtMost, false, "sum E_F(pairs) <= 3/2 sum S(singles)";
    FPU2 = "FP-U2", [4], Any, AtMost, false, "3/2 sum S(singles) <= sum S(pairs)";
    P4U1 = "P4U1", [4], Pure, AtMost, true, "E_GF <= 1/14 sum S(triples) + 2/21 sum S(pairs) + 1/4 sum S(singles)";
    P4U2 = "P4U2", [4], Pure, AtMost, true, "E_GF <= 4/21 sum S(pairs) + 5/28 sum S(singles)";
    P4U3 = "P4U3", [4], Pure, AtMost, true, "E_GF <= 13/42 sum S(pairs)";
    P4L1 = "P4L1", [4], Pure, AtLeast, true, "E_GF >= (5+2 g2)/42 sum E_F(pairs) + 1/6 sum S(pairs)";
    P4L1Free = "P4L1-free", [4], Pure, AtLeast, true, "E_GF >= 5/42 sum E_F(pairs) + 1/6 sum S(pairs)";
    P4L2 = "P4L2", [4], Pure, AtLeast, true, "E_GF >= (5+2 g2)/42 sum E_F(pairs) + 1/4 sum S(singles)";
    P4L2Free = "P4L2-free", [4], Pure, AtLeast, true, "E_GF >= 5/42 sum E_F(pairs) + 1/4 sum S(singles)";
    P4L3 = "P4L3", [4], Pure, AtLeast, true, "E_GF >= (2/7 + g2/21) sum E_F(pairs)";
    P4L3Free = "P4L3-free", [4], Pure, AtLeast, true, "E_GF >= 2/7 sum E_F(pairs)";
    M4U = "M4U", [4], Any, AtMost, true, "E_GF(rho) <= 13/42 sum S(pairs)";
    M4L = "M4L", [4], Mixed, AtLeast, true, "E_GF(rho) >= (1 + g3(1+g2) + d2)/6 sum E_F(pairs)";
    M4LOmit = "M4L-omit", [4], Mixed, AtLeast, true, "E_GF(rho) >= 1/6 sum E_F(pairs)";
}

impl InequalityId {
    /// Entries that compare exactly computed quantities on qubit states.
    pub fn exact_entries() -> Vec<InequalityId> {
        Self::ALL.iter().copied().filter(|id| !id.needs_roof()).collect()
    }

    pub fn applies_to(self, state: &State) -> bool {
        let class_ok = match self.class() {
            StateClass::Any => true,
            StateClass::Pure => state.is_pure(),
            StateClass::Mixed => !state.is_pure(),
        };
        class_ok && self.parties().contains(&state.parties())
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InequalityId {
    type Err = GefError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| GefError::Config(format!("unknown inequality {s:?}")))
    }
}

impl Serialize for InequalityId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Parses a comma-separated list of ids or inclusive ranges such as
/// `T1..B3L`, keeping registry order.
pub fn parse_selection(list: &str) -> Result<Vec<InequalityId>> {
    let mut picked = vec![false; InequalityId::ALL.len()];
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b) = (
                a.parse::<InequalityId>()? as usize,
                b.parse::<InequalityId>()? as usize,
            );
            if a > b {
                return Err(GefError::Config(format!("empty inequality range {part:?}")));
            }
            picked[a..=b].iter_mut().for_each(|p| *p = true);
        } else {
            picked[part.parse::<InequalityId>()? as usize] = true;
        }
    }
    Ok(InequalityId::ALL
        .iter()
        .zip(picked)
        .filter_map(|(id, p)| p.then_some(*id))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityRecord {
    pub id: InequalityId,
    pub lhs: Bits,
    pub rhs: Bits,
    /// Oriented so that ≥ 0 means the inequality holds.
    pub slack: f64,
    pub verdict: Verdict,
    pub lhs_estimate: bool,
    pub rhs_estimate: bool,
    /// Short SHA-256 digest of the evaluated state.
    pub digest: String,
    pub tol: f64,
    /// Why the entry was skipped, when it was.
    pub note: Option<String>,
}

/// First 16 hex digits of a SHA-256 over the dims and the raw entries.
pub fn state_digest(state: &State) -> String {
    let mut h = Sha256::new();
    h.update([u8::from(state.is_pure())]);
    for &d in state.dims().as_slice() {
        h.update((d as u64).to_le_bytes());
    }
    let data = match state {
        State::Pure(p) => p.amplitudes(),
        State::Mixed(m) => m.matrix().as_slice(),
    };
    for z in data {
        h.update(z.re.to_le_bytes());
        h.update(z.im.to_le_bytes());
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

struct Sides {
    lhs: Bits,
    rhs: Bits,
    lhs_estimate: bool,
    rhs_estimate: bool,
}

impl Sides {
    fn exact(lhs: Bits, rhs: Bits) -> Self {
        Self {
            lhs,
            rhs,
            lhs_estimate: false,
            rhs_estimate: false,
        }
    }

    fn slack(&self, o: Orientation) -> f64 {
        match o {
            Orientation::AtMost => self.rhs - self.lhs,
            Orientation::AtLeast => self.lhs - self.rhs,
        }
    }
}

enum Outcome {
    Sides(Sides),
    Skip(String),
}

fn worst(o: Orientation, all: Vec<Sides>) -> Outcome {
    let w = all
        .into_iter()
        .min_by(|a, b| a.slack(o).total_cmp(&b.slack(o)))
        .expect("at least one assignment");
    Outcome::Sides(w)
}

fn triples(n: usize) -> Vec<Vec<usize>> {
    Subset::all_of_size(n, 3)
        .into_iter()
        .map(|s| s.indices().to_vec())
        .collect()
}

fn form_of(name: &str) -> LinearForm {
    coeffs::step(name).expect("registered coefficient step").form
}

fn undefined(what: &str) -> Outcome {
    Outcome::Skip(format!("{what} undefined: denominator below 1e-9"))
}

fn compute(id: InequalityId, cx: &Context) -> Result<Outcome> {
    use InequalityId::*;
    let o = id.orientation();
    let n = cx.parties();
    Ok(match id {
        T1 | T2 => {
            let mut all = Vec::new();
            for t in triples(n) {
                for k in 0..3 {
                    let mid = t[k];
                    let (x, y) = (t[(k + 1) % 3], t[(k + 2) % 3]);
                    all.push(if id == T1 {
                        Sides::exact(
                            cx.entropy(&[x])? + cx.entropy(&[y])?,
                            cx.entropy(&[x, mid])? + cx.entropy(&[y, mid])?,
                        )
                    } else {
                        Sides::exact(
                            cx.entropy(&t)? + cx.entropy(&[mid])?,
                            cx.entropy(&[x, mid])? + cx.entropy(&[mid, y])?,
                        )
                    });
                }
            }
            worst(o, all)
        }
        T3 | T4 => {
            let mut all = Vec::new();
            for t in triples(n) {
                let s1 = cx.entropy_sum_within(&t, 1)?;
                let s2 = cx.entropy_sum_within(&t, 2)?;
                all.push(if id == T3 {
                    Sides::exact(s1, s2)
                } else {
                    Sides::exact(3.0 * cx.entropy(&t)? + s1, 2.0 * s2)
                });
            }
            worst(o, all)
        }
        F1 => Outcome::Sides(Sides::exact(cx.entropy_sum(1)?, 2.0 / 3.0 * cx.entropy_sum(2)?)),
        F2 => Outcome::Sides(Sides::exact(cx.entropy_sum(1)?, cx.entropy_sum(3)?)),
        F3 => Outcome::Sides(Sides::exact(
            cx.entropy_sum(3)? + cx.entropy_sum(1)?,
            4.0 / 3.0 * cx.entropy_sum(2)?,
        )),
        E1 => {
            let mut all = Vec::new();
            for pair in Subset::all_of_size(n, 2) {
                let (x, y) = (pair.indices()[0], pair.indices()[1]);
                let e = cx.pair_eof(&[x, y])?;
                all.push(Sides {
                    lhs: e.value,
                    rhs: cx.entropy(&[x])?.min(cx.entropy(&[y])?),
                    lhs_estimate: e.is_estimate,
                    rhs_estimate: false,
                });
            }
            worst(o, all)
        }
        P3U | P3L | P3U2 | P3L2 | B3U | B3L => {
            let (orig, modified) = cx.tri_pure()?;
            let b = if matches!(id, B3U | B3L) { modified } else { orig };
            let eof_est = b.terms.iter().any(|t| t.is_estimate);
            let values = |t: Term| match t {
                Term::PairEntropy => b.sum(crate::gef::TermKind::Entropy, 2),
                Term::SingleEntropy => b.sum(crate::gef::TermKind::Entropy, 1),
                Term::PairEof => b.sum(crate::gef::TermKind::Eof, 2),
                _ => 0.0,
            };
            let rhs = form_of(id.name()).eval(values, 0.0);
            Outcome::Sides(Sides {
                lhs: b.total,
                rhs,
                lhs_estimate: eof_est,
                rhs_estimate: eof_est && o == Orientation::AtLeast,
            })
        }
        M3U => {
            let e = cx.tri_gef()?;
            let rhs = cx.entropy_sum(2)? / 6.0 + cx.entropy_sum(1)? / 3.0;
            Outcome::Sides(Sides {
                lhs: e.value,
                rhs,
                lhs_estimate: e.is_estimate,
                rhs_estimate: false,
            })
        }
        M3L | M3LFree => {
            let e = cx.tri_gef()?;
            let pairs = cx.pair_eof_sum()?;
            let factor = if id == M3L {
                match cx.tri_gamma()?.value {
                    Some(g) => (1.0 + g) / 3.0,
                    None => return Ok(undefined("γ₂")),
                }
            } else {
                1.0 / 3.0
            };
            Outcome::Sides(Sides {
                lhs: e.value,
                rhs: factor * pairs.value,
                lhs_estimate: e.is_estimate,
                rhs_estimate: pairs.is_estimate,
            })
        }
        FSU1 => Outcome::Sides(Sides {
            lhs: cx.triple_gef_sum()?,
            rhs: cx.entropy_sum(2)? / 3.0 + cx.entropy_sum(1)?,
            lhs_estimate: true,
            rhs_estimate: false,
        }),
        FSU2 => {
            let s2 = cx.entropy_sum(2)?;
            Outcome::Sides(Sides::exact(s2 / 3.0 + cx.entropy_sum(1)?, s2))
        }
        FSL | FSLFree => {
            let pairs = cx.pair_eof_sum()?;
            let factor = if id == FSL {
                match cx.four_gamma()?.value {
                    Some(g) => 2.0 * (1.0 + g) / 3.0,
                    None => return Ok(undefined("γ₂")),
                }
            } else {
                2.0 / 3.0
            };
            Outcome::Sides(Sides {
                lhs: cx.triple_gef_sum()?,
                rhs: factor * pairs.value,
                lhs_estimate: true,
                rhs_estimate: pairs.is_estimate,
            })
        }
        FPU1 => {
            let pairs = cx.pair_eof_sum()?;
            Outcome::Sides(Sides {
                lhs: pairs.value,
                rhs: 1.5 * cx.entropy_sum(1)?,
                lhs_estimate: pairs.is_estimate,
                rhs_estimate: false,
            })
        }
        FPU2 => Outcome::Sides(Sides::exact(1.5 * cx.entropy_sum(1)?, cx.entropy_sum(2)?)),
        P4U1 | P4U2 | P4U3 | P4L1 | P4L1Free | P4L2 | P4L2Free | P4L3 | P4L3Free => {
            let b = cx.four_pure()?;
            let eof_est = b
                .terms
                .iter()
                .any(|t| t.is_estimate && t.kind == crate::gef::TermKind::Eof);
            let (step, gamma) = match id {
                P4U1 | P4U2 | P4U3 => (id.name(), 0.0),
                P4L1Free => ("P4L1", 0.0),
                P4L2Free => ("P4L2", 0.0),
                P4L3Free => ("P4L3", 0.0),
                _ => match cx.four_gamma()?.value {
                    Some(g) => (id.name(), g),
                    None => return Ok(undefined("γ₂")),
                },
            };
            let values = |t: Term| match t {
                Term::TripleEntropy => b.sum(crate::gef::TermKind::Entropy, 3),
                Term::PairEntropy => b.sum(crate::gef::TermKind::Entropy, 2),
                Term::SingleEntropy => b.sum(crate::gef::TermKind::Entropy, 1),
                Term::PairEof => b.sum(crate::gef::TermKind::Eof, 2),
                Term::TripleGef => b.sum(crate::gef::TermKind::SubGef, 3),
            };
            Outcome::Sides(Sides {
                lhs: b.total,
                rhs: form_of(step).eval(values, gamma),
                lhs_estimate: true,
                rhs_estimate: eof_est && o == Orientation::AtLeast,
            })
        }
        M4U => {
            let e = cx.four_gef()?;
            let s2 = cx.entropy_sum(2)?;
            Outcome::Sides(Sides {
                lhs: e.value,
                rhs: form_of("P4U3").eval(|_| s2, 0.0),
                lhs_estimate: e.is_estimate,
                rhs_estimate: false,
            })
        }
        M4L | M4LOmit => {
            let e = cx.four_gef()?;
            let pairs = cx.pair_eof_sum()?;
            let factor = if id == M4L {
                let d = cx.four_diag()?;
                let g2 = d.gamma2.value;
                let g3 = d.gamma3.and_then(|r| r.value);
                let d2 = d.delta2.and_then(|r| r.value);
                match (g2, g3, d2) {
                    (Some(g2), Some(g3), Some(d2)) => (1.0 + g3 * (1.0 + g2) + d2) / 6.0,
                    _ => return Ok(undefined("γ₂, γ₃ or δ₂")),
                }
            } else {
                1.0 / 6.0
            };
            Outcome::Sides(Sides {
                lhs: e.value,
                rhs: factor * pairs.value,
                lhs_estimate: e.is_estimate,
                rhs_estimate: pairs.is_estimate,
            })
        }
    })
}

fn record(id: InequalityId, cx: &Context, digest: &str, tol: &Tolerances) -> InequalityRecord {
    let skipped = |note: String| InequalityRecord {
        id,
        lhs: f64::NAN,
        rhs: f64::NAN,
        slack: f64::NAN,
        verdict: Verdict::Skipped,
        lhs_estimate: false,
        rhs_estimate: false,
        digest: digest.to_string(),
        tol: tol.exact,
        note: Some(note),
    };
    match compute(id, cx) {
        Ok(Outcome::Sides(s)) => {
            let o = id.orientation();
            let t = if s.lhs_estimate || s.rhs_estimate {
                tol.estimate
            } else {
                tol.exact
            };
            let slack = s.slack(o);
            InequalityRecord {
                id,
                lhs: s.lhs,
                rhs: s.rhs,
                slack,
                verdict: verdict(slack, s.lhs_estimate, s.rhs_estimate, o, t),
                lhs_estimate: s.lhs_estimate,
                rhs_estimate: s.rhs_estimate,
                digest: digest.to_string(),
                tol: t,
                note: None,
            }
        }
        Ok(Outcome::Skip(note)) => skipped(note),
        Err(e) => skipped(e.to_string()),
    }
}

/// Evaluates one entry on `state`.
pub fn evaluate_inequality(
    id: InequalityId,
    state: &State,
    cfg: &RoofConfig,
    tol: &Tolerances,
) -> Result<InequalityRecord> {
    if !id.applies_to(state) {
        return Err(GefError::Config(format!(
            "{id} needs a {:?} state with {:?} parties; got {} parties ({})",
            id.class(),
            id.parties(),
            state.parties(),
            if state.is_pure() { "pure" } else { "mixed" }
        )));
    }
    let cx = Context::new(state, cfg);
    Ok(record(id, &cx, &state_digest(state), tol))
}

/// Evaluates the given entries that apply to `state`, in registry order,
/// sharing every intermediate quantity.
pub fn run_selected(
    state: &State,
    ids: &[InequalityId],
    cfg: &RoofConfig,
    tol: &Tolerances,
) -> Vec<InequalityRecord> {
    let cx = Context::new(state, cfg);
    let digest = state_digest(state);
    InequalityId::ALL
        .iter()
        .filter(|id| ids.contains(id) && id.applies_to(state))
        .map(|&id| record(id, &cx, &digest, tol))
        .collect()
}

/// Every applicable registry entry, in registry order.
pub fn run_registry(state: &State, cfg: &RoofConfig, tol: &Tolerances) -> Vec<InequalityRecord> {
    run_selected(state, InequalityId::ALL, cfg, tol)
}

#[cfg(test)]
mod tests;
