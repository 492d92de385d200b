//! The `gef-bounds` binary: outputs, file round trips and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gef-bounds"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn coeffs_prints_exact_steps_and_passes() {
    let o = gef(&["coeffs"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "P4U1 1/14 2/21 1/4 PASS"));
    assert!(text.lines().any(|l| l == "P4U3 13/42 PASS"));
    assert!(text.lines().any(|l| l == "P3U 1/6 1/3 PASS"));
    assert!(text
        .lines()
        .any(|l| l.starts_with("P4L1 ") && l.contains("unsound")));

    let j = json(&gef(&["coeffs", "--format", "json"]));
    assert_eq!(j["all_match"], true);
    assert_eq!(j["steps"].as_array().unwrap().len(), 12);
}

#[test]
fn catalog_writes_a_loadable_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("ghz.json");
    let o = gef(&["catalog", "ghz", "--n", "3", "--out", path(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(v["kind"], "pure");
    let amp = v["data"][0][0].as_f64().unwrap();
    assert!((amp - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    assert_eq!(v["data"][7][0], v["data"][0][0]);

    let m = json(&gef(&["measure", path(&f)]));
    assert!((m["gef_original"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((m["gef_modified"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let terms = m["breakdowns"]["original"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 9);
    assert!(terms.iter().all(|t| t["weight"] == "1/6"));
}

#[test]
fn measure_extended_bell_and_product() {
    let m = json(&gef(&["measure", "--catalog", "eb_ab", "--theta", "0.3"]));
    assert!((m["gef_original"].as_f64().unwrap() - 5.0 / 6.0).abs() < 1e-9);
    assert!((m["gef_modified"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let weights: Vec<&str> = m["breakdowns"]["modified"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|t| t["kind"] == "eof")
        .map(|t| t["weight"].as_str().unwrap())
        .collect();
    assert_eq!(weights, ["1/3"; 3]);

    let p = json(&gef(&["measure", "--catalog", "product"]));
    assert_eq!(p["gef_original"], 0.0);
    assert_eq!(p["gef_modified"], 0.0);
    for (_, e) in p["pair_eof"].as_object().unwrap() {
        assert_eq!(e["value"], 0.0);
    }
}

#[test]
fn roof_on_separable_mixture_and_pure_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("mix.json");
    let half = [0.5, 0.0];
    let mut data = vec![[0.0, 0.0]; 64];
    data[0] = half;
    data[63] = half;
    let file = serde_json::json!({ "dims": [2, 2, 2], "kind": "mixed", "data": data });
    std::fs::write(&f, file.to_string()).unwrap();
    let o = gef(&["roof", path(&f), "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["value"].as_f64().unwrap() <= 1e-6);

    let g = dir.path().join("ghz.json");
    gef(&["catalog", "ghz", "--out", path(&g)]);
    let r = json(&gef(&["roof", path(&g)]));
    assert_eq!(r["decomposition"]["probabilities"], serde_json::json!([1.0]));
    assert!((r["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn roof_eof_on_werner_matches_closed_form() {
    let o = gef(&["roof", "--catalog", "werner", "--p", "0.9", "--seed", "3"]);
    let r = json(&o);
    assert_eq!(r["functional"], "eof");
    assert!((r["value"].as_f64().unwrap() - 0.789_354_96).abs() < 5e-3);
}

#[test]
fn verify_fixture_and_exit_codes() {
    let o = gef(&["verify", "--catalog", "ghz", "--ineq", "P3L", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id,lhs,rhs,slack,verdict,seed,trial"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "P3L");
    assert!(row[3].parse::<f64>().unwrap().abs() <= 1e-9);
    assert_eq!(row[4], "holds");

    // the unsound published form is caught on two Bell pairs
    let o = gef(&[
        "verify",
        "--catalog",
        "bell_bell",
        "--ineq",
        "P4L1",
        "--roof-restarts",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(",violated,"));
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(
        gef(&["verify", "--trials", "3"]).status.code(),
        Some(2),
        "missing seed"
    );
    assert_eq!(
        gef(&["verify", "--seed", "1", "--ineq", "NOPE"]).status.code(),
        Some(2)
    );
    assert_eq!(
        gef(&["verify", "--seed", "1", "--trials", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(gef(&["catalog", "nonsense"]).status.code(), Some(2));
    assert_eq!(gef(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        gef(&["roof", "--catalog", "ghz", "--functional", "eof"])
            .status
            .code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, r#"{"dims":[2],"kind":"pure","data":[[1,0],[1,0]]}"#).unwrap();
    assert_eq!(gef(&["measure", path(&f)]).status.code(), Some(2));
    assert_eq!(
        gef(&["measure", "/nonexistent/state.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_json_report_has_summary() {
    let o = gef(&[
        "verify", "--seed", "5", "--trials", "4", "--ineq", "T1..E1", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!(j["seed"], 5);
    assert_eq!(j["summary"]["trials"], 4);
    assert_eq!(j["summary"]["violated"], 0);
    assert_eq!(j["records"].as_array().unwrap().len(), 4 * 5);
}
