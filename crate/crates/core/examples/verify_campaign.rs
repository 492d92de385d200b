//! A seeded campaign over mixed three-qubit states, run on four workers.

use gef_bounds::bounds::parse_selection;
use gef_bounds::cli::{run_campaign, Campaign, RankSpec};
use gef_bounds::qmat::PartyDims;
use gef_bounds::roof::RoofConfig;

pub fn run_example() -> gef_bounds::Result<()> {
    let mut c = Campaign::new(42, 8, PartyDims::qubits(3), RankSpec::Range(2, 4));
    c.ids = parse_selection("T1..E1,M3U,M3L,M3L-free")?;
    c.roof = RoofConfig {
        restarts: 2,
        max_evals: 300,
        ..RoofConfig::default()
    };
    c.workers = 4;

    let report = run_campaign(&c)?;
    let s = report.summary;
    println!(
        "{} records: {} holds, {} violated, {} inconclusive, {} skipped",
        s.records, s.holds, s.violated, s.inconclusive, s.skipped
    );
    for line in report.to_csv().lines().take(6) {
        println!("{line}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gef_bounds::Result<()> {
    run_example()
}
