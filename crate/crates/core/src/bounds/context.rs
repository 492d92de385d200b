//! Lazily evaluated quantities of one state, shared across registry entries
//! so entropy-only checks never trigger a convex roof and each roof runs once.

use std::cell::OnceCell;
use std::collections::BTreeMap;

use crate::error::{GefError, Result};
use crate::gef::{
    diagnostics_four, gamma2_four, gamma2_tri, gef_bipartite, gef_mixed_four, gef_mixed_tri,
    gef_pure_four_from_roofs, gef_pure_tri_modified_with, gef_pure_tri_with, pure_subset_entropy,
    subset_entropy, Evaluated, GefBreakdown, Ratio, RoofDiagnostics, TripleRoof,
};
use crate::qmat::{partial_trace, DensityMatrix, State, Subset};
use crate::roof::{RoofConfig, RoofResult};
use crate::Bits;

type Cell<T> = OnceCell<Result<T>>;

fn get<T>(cell: &Cell<T>, init: impl FnOnce() -> Result<T>) -> Result<&T> {
    cell.get_or_init(init).as_ref().map_err(GefError::clone)
}

pub(crate) struct Context<'a> {
    pub state: &'a State,
    pub cfg: &'a RoofConfig,
    rho: OnceCell<DensityMatrix>,
    entropies: Cell<BTreeMap<Subset, Bits>>,
    pair_eofs: Cell<BTreeMap<Subset, Evaluated>>,
    tri_pure: Cell<(GefBreakdown, GefBreakdown)>,
    tri_roof: Cell<RoofResult>,
    tri_gamma: Cell<Ratio>,
    triple_roofs: Cell<Vec<TripleRoof>>,
    four_gamma: Cell<Ratio>,
    four_pure: Cell<GefBreakdown>,
    four_roof: Cell<RoofResult>,
    four_diag: Cell<RoofDiagnostics>,
}

impl<'a> Context<'a> {
    pub fn new(state: &'a State, cfg: &'a RoofConfig) -> Self {
        Self {
            state,
            cfg,
            rho: OnceCell::new(),
            entropies: OnceCell::new(),
            pair_eofs: OnceCell::new(),
            tri_pure: OnceCell::new(),
            tri_roof: OnceCell::new(),
            tri_gamma: OnceCell::new(),
            triple_roofs: OnceCell::new(),
            four_gamma: OnceCell::new(),
            four_pure: OnceCell::new(),
            four_roof: OnceCell::new(),
            four_diag: OnceCell::new(),
        }
    }

    pub fn parties(&self) -> usize {
        self.state.parties()
    }

    pub fn rho(&self) -> &DensityMatrix {
        self.rho.get_or_init(|| self.state.to_density())
    }

    pub fn subset(&self, parties: &[usize]) -> Result<Subset> {
        let mut v = parties.to_vec();
        v.sort_unstable();
        Subset::new(v, self.parties())
    }

    /// S of every nonempty subsystem, the whole system included.
    fn entropies(&self) -> Result<&BTreeMap<Subset, Bits>> {
        get(&self.entropies, || {
            let n = self.parties();
            let mut out = BTreeMap::new();
            for size in 1..=n {
                for s in Subset::all_of_size(n, size) {
                    let v = match self.state {
                        State::Pure(psi) => pure_subset_entropy(psi, &s)?,
                        State::Mixed(m) => subset_entropy(m, &s)?,
                    };
                    out.insert(s, v);
                }
            }
            Ok(out)
        })
    }

    pub fn entropy(&self, parties: &[usize]) -> Result<Bits> {
        let s = self.subset(parties)?;
        Ok(self.entropies()?[&s])
    }

    /// Σ S over all subsystems of `size` drawn from `within`.
    pub fn entropy_sum_within(&self, within: &[usize], size: usize) -> Result<Bits> {
        Subset::all_of_size(within.len(), size)
            .iter()
            .map(|s| {
                let parties: Vec<usize> = s.indices().iter().map(|&i| within[i]).collect();
                self.entropy(&parties)
            })
            .sum()
    }

    pub fn entropy_sum(&self, size: usize) -> Result<Bits> {
        let all: Vec<usize> = (0..self.parties()).collect();
        self.entropy_sum_within(&all, size)
    }

    fn pair_eofs(&self) -> Result<&BTreeMap<Subset, Evaluated>> {
        get(&self.pair_eofs, || {
            Subset::all_of_size(self.parties(), 2)
                .into_iter()
                .enumerate()
                .map(|(i, pair)| {
                    let m = match self.state {
                        State::Pure(psi) => psi.reduced(&pair)?,
                        State::Mixed(rho) => partial_trace(rho, &pair)?,
                    };
                    let e = gef_bipartite(&m, &self.cfg.nested(100 + i as u64))?;
                    Ok((pair, e))
                })
                .collect()
        })
    }

    pub fn pair_eof(&self, parties: &[usize]) -> Result<Evaluated> {
        let s = self.subset(parties)?;
        Ok(self.pair_eofs()?[&s])
    }

    /// Σ E_F over all pairs, flagged if any pair is an estimate.
    pub fn pair_eof_sum(&self) -> Result<Evaluated> {
        let map = self.pair_eofs()?;
        Ok(Evaluated {
            value: map.values().map(|e| e.value).sum(),
            is_estimate: map.values().any(|e| e.is_estimate),
        })
    }

    fn pure(&self) -> Result<&crate::qmat::PureState> {
        match self.state {
            State::Pure(p) => Ok(p),
            State::Mixed(_) => Err(GefError::Config("entry needs a pure state".into())),
        }
    }

    /// Original and modified breakdowns of a pure tri-party state.
    pub fn tri_pure(&self) -> Result<&(GefBreakdown, GefBreakdown)> {
        get(&self.tri_pure, || {
            let psi = self.pure()?;
            Ok((
                gef_pure_tri_with(psi, self.cfg)?,
                gef_pure_tri_modified_with(psi, self.cfg)?,
            ))
        })
    }

    pub fn tri_roof(&self) -> Result<&RoofResult> {
        get(&self.tri_roof, || gef_mixed_tri(self.rho(), self.cfg))
    }

    /// Tri-party GEF: exact breakdown for pure input, roof otherwise.
    pub fn tri_gef(&self) -> Result<Evaluated> {
        match self.state {
            State::Pure(_) => {
                let b = &self.tri_pure()?.0;
                Ok(Evaluated {
                    value: b.total,
                    is_estimate: b.is_estimate(),
                })
            }
            State::Mixed(_) => Ok(Evaluated {
                value: self.tri_roof()?.value,
                is_estimate: true,
            }),
        }
    }

    pub fn tri_gamma(&self) -> Result<Ratio> {
        get(&self.tri_gamma, || {
            gamma2_tri(self.rho(), &self.tri_roof()?.decomposition, self.cfg)
        })
        .copied()
    }

    pub fn triple_roofs(&self) -> Result<&[TripleRoof]> {
        get(&self.triple_roofs, || match self.state {
            State::Pure(psi) => crate::gef::triple_roofs_pure(psi, self.cfg),
            State::Mixed(rho) => crate::gef::triple_roofs(rho, self.cfg),
        })
        .map(Vec::as_slice)
    }

    pub fn triple_gef_sum(&self) -> Result<Bits> {
        Ok(self.triple_roofs()?.iter().map(|r| r.result.value).sum())
    }

    /// Aggregate four-party γ₂ from the triple roofs.
    pub fn four_gamma(&self) -> Result<Ratio> {
        get(&self.four_gamma, || {
            Ok(gamma2_four(self.rho(), self.triple_roofs()?, self.cfg)?.1)
        })
        .copied()
    }

    pub fn four_pure(&self) -> Result<&GefBreakdown> {
        get(&self.four_pure, || {
            gef_pure_four_from_roofs(self.pure()?, self.triple_roofs()?, self.cfg)
        })
    }

    pub fn four_roof(&self) -> Result<&RoofResult> {
        get(&self.four_roof, || gef_mixed_four(self.rho(), self.cfg))
    }

    /// Four-party GEF: breakdown for pure input, roof otherwise. Both carry
    /// roof estimates.
    pub fn four_gef(&self) -> Result<Evaluated> {
        let value = match self.state {
            State::Pure(_) => self.four_pure()?.total,
            State::Mixed(_) => self.four_roof()?.value,
        };
        Ok(Evaluated {
            value,
            is_estimate: true,
        })
    }

    pub fn four_diag(&self) -> Result<&RoofDiagnostics> {
        get(&self.four_diag, || {
            diagnostics_four(
                self.rho(),
                &self.four_roof()?.decomposition,
                self.triple_roofs()?,
                self.cfg,
            )
        })
    }
}
