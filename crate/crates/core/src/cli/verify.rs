//! Seeded verification campaigns over the inequality registry.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{run_selected, InequalityId, InequalityRecord, Tolerances, Verdict};
use crate::error::{GefError, Result};
use crate::qmat::{random_density, random_haar_pure, PartyDims, RandomSource, State};
use crate::roof::RoofConfig;

/// Pure states, a fixed mixed rank, or a rank drawn per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankSpec {
    Pure,
    Fixed(usize),
    Range(usize, usize),
}

impl FromStr for RankSpec {
    type Err = GefError;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| GefError::Config(format!("bad rank {s:?}")))
        };
        match s.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a == 0 || a > b {
                    return Err(GefError::Config(format!("bad rank range {s:?}")));
                }
                Ok(RankSpec::Range(a, b))
            }
            None => match num(s)? {
                0 => Err(GefError::Config("rank must be at least 1".into())),
                r => Ok(RankSpec::Fixed(r)),
            },
        }
    }
}

impl std::fmt::Display for RankSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RankSpec::Pure => f.write_str("pure"),
            RankSpec::Fixed(r) => write!(f, "{r}"),
            RankSpec::Range(a, b) => write!(f, "{a}-{b}"),
        }
    }
}

impl Serialize for RankSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Reduced roof budget for mixed four-party campaigns, where every outer
/// evaluation runs four nested tri-party roofs per member.
pub fn mixed_four_party_budget() -> RoofConfig {
    RoofConfig {
        restarts: 1,
        max_evals: 120,
        inner_restarts: 1,
        inner_max_evals: 150,
        ..RoofConfig::default()
    }
}

#[derive(Debug, Clone)]
pub struct Campaign {
    pub seed: u64,
    pub trials: usize,
    pub dims: PartyDims,
    pub rank: RankSpec,
    pub ids: Vec<InequalityId>,
    pub tol: Tolerances,
    /// Roof budget; its seed is replaced per trial.
    pub roof: RoofConfig,
    pub workers: usize,
    /// Evaluate this state once instead of drawing random ones.
    pub fixed: Option<State>,
}

impl Campaign {
    pub fn new(seed: u64, trials: usize, dims: PartyDims, rank: RankSpec) -> Self {
        Self {
            seed,
            trials,
            dims,
            rank,
            ids: InequalityId::ALL.to_vec(),
            tol: Tolerances::default(),
            roof: RoofConfig::default(),
            workers: 1,
            fixed: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(GefError::Config("trials must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(GefError::Config("workers must be at least 1".into()));
        }
        let d = self.dims.total();
        match self.rank {
            RankSpec::Fixed(r) | RankSpec::Range(_, r) if r > d => {
                Err(GefError::RankOutOfRange { rank: r, dim: d })
            }
            _ => self.roof.validate(),
        }
    }

    /// The state of trial `index`; a pure function of (seed, index).
    pub fn trial_state(&self, index: usize) -> Result<State> {
        if let Some(s) = &self.fixed {
            return Ok(s.clone());
        }
        let mut rng = RandomSource::stream(self.seed, index as u64);
        Ok(match self.rank {
            RankSpec::Pure => State::Pure(random_haar_pure(&self.dims, &mut rng)),
            RankSpec::Fixed(r) => State::Mixed(random_density(&self.dims, r, &mut rng)?),
            RankSpec::Range(a, b) => {
                let r = rng.range_inclusive(a, b);
                State::Mixed(random_density(&self.dims, r, &mut rng)?)
            }
        })
    }

    fn trial_roof(&self, index: usize) -> RoofConfig {
        let seed = RandomSource::stream(self.seed, index as u64).derive(1).seed();
        self.roof.clone().with_seed(seed)
    }

    fn run_trial(&self, index: usize) -> Result<Vec<TrialRecord>> {
        let state = self.trial_state(index)?;
        Ok(
            run_selected(&state, &self.ids, &self.trial_roof(index), &self.tol)
                .into_iter()
                .map(|record| TrialRecord {
                    trial: index,
                    seed: self.seed,
                    record,
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    #[serde(flatten)]
    pub record: InequalityRecord,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub trials: usize,
    pub records: usize,
    pub holds: usize,
    pub violated: usize,
    pub inconclusive: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignReport {
    pub seed: u64,
    pub dims: PartyDims,
    pub rank: RankSpec,
    pub tol: Tolerances,
    pub summary: Summary,
    pub records: Vec<TrialRecord>,
}

impl CampaignReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,lhs,rhs,slack,verdict,seed,trial\n");
        for t in &self.records {
            let r = &t.record;
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.id, r.lhs, r.rhs, r.slack, r.verdict, t.seed, t.trial
            )
            .expect("writing to a String");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.records.iter().filter(|t| t.record.verdict == v).count()
    }
}

/// Runs every trial on a pool of `campaign.workers` threads. Rows come back
/// in (trial, registry) order whatever the completion order.
pub fn run_campaign(campaign: &Campaign) -> Result<CampaignReport> {
    campaign.validate()?;
    let trials = if campaign.fixed.is_some() {
        1
    } else {
        campaign.trials
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(campaign.workers)
        .build()
        .map_err(|e| GefError::Config(format!("cannot start worker pool: {e}")))?;
    let per_trial: Vec<Vec<TrialRecord>> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| campaign.run_trial(i))
            .collect::<Result<_>>()
    })?;
    let records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();
    let mut summary = Summary {
        trials,
        records: records.len(),
        ..Summary::default()
    };
    for t in &records {
        match t.record.verdict {
            Verdict::Holds => summary.holds += 1,
            Verdict::Violated => summary.violated += 1,
            Verdict::Inconclusive => summary.inconclusive += 1,
            Verdict::Skipped => summary.skipped += 1,
        }
    }
    let dims = campaign
        .fixed
        .as_ref()
        .map_or_else(|| campaign.dims.clone(), |s| s.dims().clone());
    Ok(CampaignReport {
        seed: campaign.seed,
        dims,
        rank: campaign.rank,
        tol: campaign.tol,
        summary,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::parse_selection;

    #[test]
    fn rank_specs() {
        assert_eq!("3".parse::<RankSpec>().unwrap(), RankSpec::Fixed(3));
        assert_eq!("2-8".parse::<RankSpec>().unwrap(), RankSpec::Range(2, 8));
        assert!("0".parse::<RankSpec>().is_err());
        assert!("5-2".parse::<RankSpec>().is_err());
        assert!("x".parse::<RankSpec>().is_err());
    }

    #[test]
    fn trial_states_depend_only_on_seed_and_index() {
        let c = Campaign::new(9, 5, PartyDims::qubits(3), RankSpec::Range(2, 8));
        let a = c.trial_state(3).unwrap();
        let b = c.trial_state(3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c.trial_state(4).unwrap());
    }

    #[test]
    fn worker_count_does_not_change_the_report() {
        let mut c = Campaign::new(42, 6, PartyDims::qubits(3), RankSpec::Fixed(2));
        c.ids = parse_selection("T1..E1,M3U,M3L").unwrap();
        c.roof = RoofConfig {
            restarts: 2,
            max_evals: 150,
            ..RoofConfig::default()
        };
        let one = run_campaign(&c).unwrap().to_csv();
        c.workers = 4;
        let four = run_campaign(&c).unwrap().to_csv();
        assert_eq!(one, four);
        assert!(one.starts_with("id,lhs,rhs,slack,verdict,seed,trial\n"));
    }

    #[test]
    fn rejects_bad_campaigns() {
        let mut c = Campaign::new(1, 0, PartyDims::qubits(3), RankSpec::Pure);
        assert!(run_campaign(&c).is_err());
        c.trials = 1;
        c.rank = RankSpec::Fixed(9);
        assert!(run_campaign(&c).is_err());
    }
}
