//! Drive a scenario from YAML and print a compact summary.
//!
//! `cargo run --example scenario_report -- examples/configs/cascade.yaml`

use selfmeasure::scenario::{parse_config, run};

const DEFAULT: &str = "scenario: ch-basic\nchain: {n_atoms: 3}\nsweep: {param: a2_phase, start: 0, stop: 180, steps: 5}\n";

fn main() -> selfmeasure::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT.to_string(),
    };
    let report = run(&parse_config(&text)?)?;
    println!(
        "{} (preset {}): {} point(s), {} invariants, passed = {}",
        report.scenario,
        report.observable_preset,
        report.summary.points,
        report.summary.invariants_checked,
        report.passed()
    );
    for p in &report.points {
        let failed: Vec<&str> = p.invariants.iter().filter(|(_, r)| !r.passed).map(|(k, _)| k.as_str()).collect();
        println!("  [{}] sweep {:?}: failed {:?}", p.index, p.sweep_value, failed);
    }
    Ok(())
}
