//! Report builders and the subcommand dispatcher.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde_json::{json, Map, Value};

use super::statefile::StateFile;
use super::verify::{mixed_four_party_budget, run_campaign, Campaign, RankSpec};
use super::{catalog, exit, Command, Format, Functional, VerifyArgs};
use crate::bounds::coeffs::{derive_coefficients, render};
use crate::bounds::{parse_selection, InequalityId, Tolerances, Verdict};
use crate::error::{GefError, Result};
use crate::gef::{
    diagnostics, diagnostics_four, gamma2_four, gamma2_tri, gef_bipartite, gef_mixed_four, gef_mixed_tri,
    gef_mixed_tri_modified, gef_pure_four_from_roofs, gef_pure_tri_modified_with, gef_pure_tri_with,
    pure_subset_entropy, subset_entropy, triple_roofs, triple_roofs_pure, GefBreakdown, Ratio,
    RoofDiagnostics,
};
use crate::qmat::{partial_trace, PartyDims, State, Subset};
use crate::roof::{minimize_convex_roof, Decomposition, RoofConfig, RoofResult};

pub(crate) enum Failure {
    /// Bad flags, unreadable or invalid state files.
    Input(GefError),
    /// Numerical failures and output errors.
    Internal(String),
}

fn input(e: GefError) -> Failure {
    Failure::Input(e)
}

fn internal(e: GefError) -> Failure {
    Failure::Internal(e.to_string())
}

fn emit(text: &str, out: Option<&Path>) -> std::result::Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Internal(format!("write failed: {e}"));
    match out {
        Some(p) => fs::write(p, text).map_err(io),
        None => {
            let mut stdout = std::io::stdout().lock();
            let mut written = stdout.write_all(text.as_bytes());
            if written.is_ok() && !text.ends_with('\n') {
                written = stdout.write_all(b"\n");
            }
            match written {
                // a closed downstream pipe (`| head`) is not a failure
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(io),
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("reports always serialize")
}

pub(crate) fn dispatch(cmd: Command) -> std::result::Result<i32, Failure> {
    match cmd {
        Command::Catalog { name, params, out } => {
            let state = catalog::build(&name, &params.params().map_err(input)?).map_err(input)?;
            emit(&StateFile::from_state(&state).to_json(), out.as_deref())?;
            Ok(exit::OK)
        }
        Command::Measure {
            input: src,
            roof,
            out,
        } => {
            let state = src.load().map_err(input)?;
            let cfg = roof.config(RoofConfig::default());
            cfg.validate().map_err(input)?;
            let report = measure_report(&state, &cfg).map_err(internal)?;
            emit(&pretty(&report), out.as_deref())?;
            Ok(exit::OK)
        }
        Command::Roof {
            input: src,
            roof,
            functional,
            strict,
            out,
        } => {
            let state = src.load().map_err(input)?;
            let base = if state.parties() == 4 && !state.is_pure() {
                mixed_four_party_budget()
            } else {
                RoofConfig::default()
            };
            let cfg = roof.config(base);
            cfg.validate().map_err(input)?;
            let functional = functional.unwrap_or(if state.parties() == 2 {
                Functional::Eof
            } else {
                Functional::Gef
            });
            check_functional(&state, functional).map_err(input)?;
            let (report, converged) = roof_report(&state, functional, &cfg).map_err(internal)?;
            emit(&pretty(&report), out.as_deref())?;
            if !converged {
                eprintln!("warning: roof search did not converge within its budget");
                if strict {
                    return Ok(exit::VIOLATIONS);
                }
            }
            Ok(exit::OK)
        }
        Command::Coeffs { format } => {
            let (text, all_match) = coeffs_report(format);
            emit(&text, None)?;
            Ok(if all_match { exit::OK } else { exit::VIOLATIONS })
        }
        Command::Verify(args) => verify(args),
    }
}

fn verify(args: VerifyArgs) -> std::result::Result<i32, Failure> {
    let ids = match &args.ineq {
        Some(s) => parse_selection(s).map_err(input)?,
        None => InequalityId::ALL.to_vec(),
    };
    let rank = match &args.rank {
        Some(s) => s.parse::<RankSpec>().map_err(input)?,
        None => RankSpec::Pure,
    };
    for (flag, v) in [("--tol", args.tol), ("--estimate-tol", args.estimate_tol)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(input(GefError::Config(format!(
                "{flag} must be a nonnegative number"
            ))));
        }
    }
    let fixed = if args.input.given() {
        Some(args.input.load().map_err(input)?)
    } else {
        None
    };
    let seed = match (args.roof.seed, &fixed) {
        (Some(s), _) => s,
        (None, Some(_)) => 0,
        (None, None) => {
            return Err(input(GefError::Config(
                "--seed is required for random campaigns".into(),
            )))
        }
    };
    let dims = match &fixed {
        Some(s) => s.dims().clone(),
        None => PartyDims::new(args.input.params.dims.clone()).map_err(input)?,
    };
    let mixed = match &fixed {
        Some(s) => !s.is_pure(),
        None => rank != RankSpec::Pure,
    };
    let four_mixed = dims.parties() == 4 && mixed;
    if four_mixed && fixed.is_none() && args.trials > 100 {
        eprintln!(
            "warning: {} mixed four-party trials; each runs nested roofs, consider at most 100",
            args.trials
        );
    }
    let base = if four_mixed {
        mixed_four_party_budget()
    } else {
        RoofConfig::default()
    };
    let campaign = Campaign {
        seed,
        trials: args.trials,
        dims,
        rank,
        ids,
        tol: Tolerances {
            exact: args.tol,
            estimate: args.estimate_tol,
        },
        roof: args.roof.config(base),
        workers: args.workers,
        fixed,
    };
    campaign.validate().map_err(input)?;
    let report = run_campaign(&campaign).map_err(internal)?;
    let text = match args.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => report
            .records
            .iter()
            .map(|t| {
                let r = &t.record;
                format!(
                    "trial {:>4}  {:<10} {:<12} lhs {:.9}  rhs {:.9}  slack {:+.3e}\n",
                    t.trial,
                    r.id.name(),
                    r.verdict.to_string(),
                    r.lhs,
                    r.rhs,
                    r.slack
                )
            })
            .collect(),
    };
    emit(&text, args.out.as_deref())?;
    let s = report.summary;
    eprintln!(
        "{} trials, {} records: {} holds, {} violated, {} inconclusive, {} skipped",
        s.trials, s.records, s.holds, s.violated, s.inconclusive, s.skipped
    );
    Ok(if report.count(Verdict::Violated) > 0 {
        exit::VIOLATIONS
    } else {
        exit::OK
    })
}

fn check_functional(state: &State, f: Functional) -> Result<()> {
    let n = state.parties();
    let ok = match f {
        Functional::Eof => n == 2,
        Functional::Gef => n == 3 || n == 4,
        Functional::GefModified => n == 3,
    };
    if ok {
        Ok(())
    } else {
        Err(GefError::PartyCount {
            expected: match f {
                Functional::Eof => "2",
                Functional::Gef => "3 or 4",
                Functional::GefModified => "3",
            }
            .into(),
            got: n,
        })
    }
}

fn ratio_json(r: &Ratio) -> Value {
    json!({ "value": r.value, "numerator": r.numerator, "denominator": r.denominator })
}

fn diagnostics_json(d: &RoofDiagnostics) -> Value {
    let per: Map<String, Value> = d
        .gamma2_per_triple
        .iter()
        .map(|t| (t.triple.label(), ratio_json(&t.gamma2)))
        .collect();
    let mut out = json!({ "gamma2": ratio_json(&d.gamma2), "gamma2_per_triple": per });
    if let Some(g) = &d.gamma3 {
        out["gamma3"] = ratio_json(g);
    }
    if let Some(g) = &d.delta2 {
        out["delta2"] = ratio_json(g);
    }
    out
}

fn breakdown_json(b: &GefBreakdown) -> Value {
    let terms: Vec<Value> = b
        .terms
        .iter()
        .map(|t| {
            json!({
                "subset": t.subset.label(),
                "kind": t.kind,
                "weight": t.weight.to_string(),
                "value": t.value,
                "is_estimate": t.is_estimate,
            })
        })
        .collect();
    json!({
        "definition": b.definition,
        "total": b.total,
        "is_estimate": b.is_estimate(),
        "terms": terms,
    })
}

fn decomposition_json(d: &Decomposition) -> Value {
    let members: Vec<Vec<[f64; 2]>> = d
        .members()
        .iter()
        .map(|m| m.amplitudes().iter().map(|z| [z.re, z.im]).collect())
        .collect();
    json!({ "probabilities": d.probabilities(), "members": members })
}

fn roof_json(r: &RoofResult) -> Value {
    json!({
        "value": r.value,
        "converged": r.converged,
        "restarts_used": r.restarts_used,
        "best_restart": r.best_restart,
        "is_estimate": r.is_estimate,
        "iterations": r.history.len(),
    })
}

/// Entropies of every subsystem, pair E_F, the GEF breakdowns for the party
/// count and the decomposition diagnostics, as one JSON object.
pub fn measure_report(state: &State, cfg: &RoofConfig) -> Result<Value> {
    let n = state.parties();
    let rho = state.to_density();
    let mut entropies = Map::new();
    for size in 1..=n {
        for s in Subset::all_of_size(n, size) {
            let v = match state {
                State::Pure(psi) => pure_subset_entropy(psi, &s)?,
                State::Mixed(m) => subset_entropy(m, &s)?,
            };
            entropies.insert(s.label(), json!(v));
        }
    }
    let mut pair_eof = Map::new();
    if n >= 2 {
        for (i, pair) in Subset::all_of_size(n, 2).into_iter().enumerate() {
            let m = if n == 2 {
                rho.clone()
            } else {
                partial_trace(&rho, &pair)?
            };
            let e = gef_bipartite(&m, &cfg.nested(100 + i as u64))?;
            pair_eof.insert(
                pair.label(),
                json!({ "value": e.value, "is_estimate": e.is_estimate }),
            );
        }
    }
    let mut out = json!({
        "dims": state.dims().as_slice(),
        "kind": if state.is_pure() { "pure" } else { "mixed" },
        "entropies": entropies,
        "pair_eof": pair_eof,
    });
    match (n, state) {
        (2, _) => {
            out["eof"] = out["pair_eof"]["AB"].clone();
        }
        (3, State::Pure(psi)) => {
            let orig = gef_pure_tri_with(psi, cfg)?;
            let modi = gef_pure_tri_modified_with(psi, cfg)?;
            out["gef_original"] = json!(orig.total);
            out["gef_modified"] = json!(modi.total);
            out["breakdowns"] = json!({
                "original": breakdown_json(&orig),
                "modified": breakdown_json(&modi),
            });
            let g = gamma2_tri(&rho, &Decomposition::single(psi.clone()), cfg)?;
            out["diagnostics"] = json!({ "gamma2": ratio_json(&g) });
        }
        (3, State::Mixed(m)) => {
            let orig = gef_mixed_tri(m, cfg)?;
            let modi = gef_mixed_tri_modified(m, cfg)?;
            out["gef_original"] = json!(orig.value);
            out["gef_modified"] = json!(modi.value);
            out["roofs"] = json!({ "original": roof_json(&orig), "modified": roof_json(&modi) });
            out["diagnostics"] = diagnostics_json(&diagnostics(m, &orig.decomposition, cfg)?);
        }
        (4, State::Pure(psi)) => {
            let roofs = triple_roofs_pure(psi, cfg)?;
            let b = gef_pure_four_from_roofs(psi, &roofs, cfg)?;
            out["gef"] = json!(b.total);
            out["breakdowns"] = json!({ "four_party": breakdown_json(&b) });
            let (per, g) = gamma2_four(&rho, &roofs, cfg)?;
            let per: Map<String, Value> = per
                .iter()
                .map(|t| (t.triple.label(), ratio_json(&t.gamma2)))
                .collect();
            out["diagnostics"] = json!({ "gamma2": ratio_json(&g), "gamma2_per_triple": per });
        }
        (4, State::Mixed(m)) => {
            let roof = gef_mixed_four(m, cfg)?;
            let roofs = triple_roofs(m, cfg)?;
            out["gef"] = json!(roof.value);
            out["roofs"] = json!({ "four_party": roof_json(&roof) });
            out["diagnostics"] = diagnostics_json(&diagnostics_four(m, &roof.decomposition, &roofs, cfg)?);
        }
        _ => {}
    }
    Ok(out)
}

/// Runs the roof of `functional` over `state` and reports the decomposition.
/// Pure input yields its single-member decomposition without a search.
/// Returns the report and whether the search converged.
pub fn roof_report(state: &State, functional: Functional, cfg: &RoofConfig) -> Result<(Value, bool)> {
    check_functional(state, functional)?;
    let rho = state.to_density();
    let first = Subset::new(vec![0], state.parties().max(1))?;
    let result = match (state, functional) {
        (State::Pure(psi), f) => {
            let value = match f {
                Functional::Eof => pure_subset_entropy(psi, &first)?,
                Functional::Gef if psi.parties() == 3 => gef_pure_tri_with(psi, cfg)?.total,
                Functional::Gef => crate::gef::gef_pure_four(psi, cfg)?.total,
                Functional::GefModified => gef_pure_tri_modified_with(psi, cfg)?.total,
            };
            RoofResult {
                value,
                decomposition: Decomposition::single(psi.clone()),
                converged: true,
                restarts_used: 0,
                best_restart: 0,
                is_estimate: f != Functional::Eof,
                history: Vec::new(),
            }
        }
        (State::Mixed(m), Functional::Eof) => {
            minimize_convex_roof(m, |psi| pure_subset_entropy(psi, &first), cfg)?
        }
        (State::Mixed(m), Functional::Gef) if m.parties() == 3 => gef_mixed_tri(m, cfg)?,
        (State::Mixed(m), Functional::Gef) => gef_mixed_four(m, cfg)?,
        (State::Mixed(m), Functional::GefModified) => gef_mixed_tri_modified(m, cfg)?,
    };
    let mut out = roof_json(&result);
    out["functional"] = json!(match functional {
        Functional::Eof => "eof",
        Functional::Gef => "gef",
        Functional::GefModified => "gef_modified",
    });
    out["decomposition"] = decomposition_json(&result.decomposition);
    out["mixture_defect"] = json!(result.decomposition.mixture_defect(&rho));
    match state.parties() {
        3 => out["diagnostics"] = diagnostics_json(&diagnostics(&rho, &result.decomposition, cfg)?),
        4 => {
            let roofs = triple_roofs(&rho, cfg)?;
            out["diagnostics"] =
                diagnostics_json(&diagnostics_four(&rho, &result.decomposition, &roofs, cfg)?);
        }
        _ => {}
    }
    Ok((out, result.converged))
}

const UNSOUND_NOTE: &str = "unsound: a lemma is substituted against its direction";

/// The coefficient chain as text, CSV or JSON, and whether every step
/// reproduced its published rationals.
pub fn coeffs_report(format: Format) -> (String, bool) {
    let steps = derive_coefficients();
    let all_match = steps.iter().all(|s| s.matches);
    let text = match format {
        Format::Text => steps
            .iter()
            .map(|s| {
                let mut line = format!(
                    "{} {} {}",
                    s.name,
                    render(&s.form),
                    if s.matches { "PASS" } else { "FAIL" }
                );
                if !s.sound {
                    line.push_str(&format!(" ({UNSOUND_NOTE})"));
                }
                line + "\n"
            })
            .collect(),
        Format::Csv => {
            let mut out = String::from("step,form,via,sound,matches\n");
            for s in &steps {
                out.push_str(&format!(
                    "{},\"{}\",{},{},{}\n",
                    s.name,
                    s.form,
                    s.via.join(";"),
                    s.sound,
                    s.matches
                ));
            }
            out
        }
        Format::Json => pretty(&json!({ "all_match": all_match, "steps": steps })),
    };
    (text, all_match)
}
