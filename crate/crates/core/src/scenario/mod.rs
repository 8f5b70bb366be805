//! Scenario orchestration: config in, report out.
//!
//! ```no_run
//! use selfmeasure::scenario::{parse_config, run};
//!
//! let cfg = parse_config("scenario: ch-basic\nchain: {n_atoms: 3}\n").unwrap();
//! let report = run(&cfg).unwrap();
//! println!("{}", report.to_json().unwrap());
//! ```

pub mod config;
pub mod report;
mod run;

pub use config::{parse_config, parse_config_with, Format, Scenario, ScenarioConfig, Sweep, SweepParam};
pub use report::{InvariantResult, PointReport, RunReport, VerdictRecord, SCHEMA_VERSION};
pub use run::{
    build_models, cascade_observables, chain_observables, radiation_observables, run, run_point, Models,
    MAX_ENUMERATED_ATOMS,
};

/// Observable presets accepted by each scenario.
pub fn presets(scenario: Scenario) -> &'static [&'static str] {
    match scenario {
        Scenario::ChBasic | Scenario::ChHeisenberg => &["all_strings", "sector_preserving", "pointer_only", "with_B"],
        Scenario::ChCascade => &["pointer_only", "with_terminal_it"],
        Scenario::RdBasic => &["glauber", "glauber_plus_quadrature"],
        Scenario::Growth => &["none"],
    }
}
