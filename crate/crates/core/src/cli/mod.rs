//! Command-line harness: the state catalog, state files, and the `catalog`,
//! `measure`, `verify`, `roof` and `coeffs` subcommands behind the
//! `gef-bounds` binary.

pub mod catalog;
mod commands;
pub mod statefile;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::GefError;
pub use commands::{coeffs_report, measure_report, roof_report};
pub use verify::{run_campaign, Campaign, CampaignReport, RankSpec, TrialRecord};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VIOLATIONS: i32 = 1;
    pub const INVALID_INPUT: i32 = 2;
    pub const INTERNAL: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(
    name = "gef-bounds",
    version,
    about = "Generalized entanglement of formation and its bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a named special state as a state file.
    Catalog {
        /// ghz, w3, bell, bell_bell, product, werner, eb_ab, eb_ac1, eb_ac2, eb_bc
        name: String,
        #[command(flatten)]
        params: CatalogArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entropies, pair E_F, GEF breakdowns and diagnostics of one state.
    Measure {
        #[command(flatten)]
        input: StateInput,
        #[command(flatten)]
        roof: RoofArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate registry inequalities over seeded random states or one state.
    Verify(VerifyArgs),
    /// Run a convex roof and report the decomposition it found.
    Roof {
        #[command(flatten)]
        input: StateInput,
        #[command(flatten)]
        roof: RoofArgs,
        /// Pure-state functional; defaults to eof for two parties, gef otherwise.
        #[arg(long, value_enum)]
        functional: Option<Functional>,
        /// Exit nonzero when the search did not converge.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive the bound coefficients as exact rationals.
    Coeffs {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CatalogArgs {
    /// Qubit count for ghz.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Werner mixing weight.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Spectator angle θ in cos θ|0⟩ + e^{iφ} sin θ|1⟩.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    /// phi+, phi-, psi+ or psi-.
    #[arg(long, default_value = "phi+")]
    pub bell: String,
    /// Local party dimensions (product states, random campaigns).
    #[arg(long, value_delimiter = ',', default_value = "2,2,2")]
    pub dims: Vec<usize>,
}

impl CatalogArgs {
    pub fn params(&self) -> Result<catalog::CatalogParams, GefError> {
        Ok(catalog::CatalogParams {
            n: self.n,
            p: self.p,
            theta: self.theta,
            phi: self.phi,
            bell: self.bell.parse()?,
            dims: self.dims.clone(),
        })
    }
}

/// A state given either as a file or as a catalog name.
#[derive(Debug, Clone, Args)]
pub struct StateInput {
    /// State file (JSON).
    pub state: Option<PathBuf>,
    /// Use a catalog state instead of a file.
    #[arg(long, conflicts_with = "state")]
    pub catalog: Option<String>,
    #[command(flatten)]
    pub params: CatalogArgs,
}

impl StateInput {
    pub fn given(&self) -> bool {
        self.state.is_some() || self.catalog.is_some()
    }

    pub fn load(&self) -> Result<crate::qmat::State, GefError> {
        match (&self.state, &self.catalog) {
            (Some(path), _) => statefile::load(path),
            (None, Some(name)) => catalog::build(name, &self.params.params()?),
            (None, None) => Err(GefError::Config("give a state file or --catalog NAME".into())),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RoofArgs {
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Restarts per roof.
    #[arg(long)]
    pub roof_restarts: Option<usize>,
    /// Objective evaluations per restart.
    #[arg(long)]
    pub roof_iters: Option<usize>,
}

impl RoofArgs {
    /// Roof budget with the flags applied over `base`.
    pub fn config(&self, base: crate::roof::RoofConfig) -> crate::roof::RoofConfig {
        let mut cfg = base;
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(r) = self.roof_restarts {
            cfg.restarts = r;
        }
        if let Some(n) = self.roof_iters {
            cfg.max_evals = n;
        }
        cfg
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: StateInput,
    #[command(flatten)]
    pub roof: RoofArgs,
    /// Random states to draw (party dimensions come from --dims).
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Mixed-state rank, or an inclusive range such as 2-8; omit for pure states.
    #[arg(long)]
    pub rank: Option<String>,
    /// Tolerance for exact comparisons.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Tolerance for comparisons involving roof estimates.
    #[arg(long, default_value_t = 1e-3)]
    pub estimate_tol: f64,
    /// Comma-separated ids or ranges (T1..B3L); default all.
    #[arg(long)]
    pub ineq: Option<String>,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Functional {
    /// Marginal entropy of the first party (bipartite E_F).
    Eof,
    /// Original GEF definition (three or four parties).
    Gef,
    /// Modified tri-party GEF.
    GefModified,
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                exit::INVALID_INPUT
            } else {
                exit::OK
            };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(commands::Failure::Input(e)) => {
            eprintln!("error: {e}");
            exit::INVALID_INPUT
        }
        Err(commands::Failure::Internal(e)) => {
            eprintln!("internal error: {e}");
            exit::INTERNAL
        }
    }
}
