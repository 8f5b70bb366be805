use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use selfmeasure::scenario::{self, parse_config_with, Format, Scenario, Sweep};

/// Run a measurement-model scenario and emit its report.
#[derive(Parser, Debug)]
#[command(name = "selfmeasure", version)]
struct Cli {
    /// Scenario id; overrides the config file's `scenario`.
    #[arg(long)]
    scenario: Option<Scenario>,
    /// YAML config file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `chain.n_atoms=3` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Sweep one parameter: `param=start:stop:steps`.
    #[arg(long, value_name = "PARAM=START:STOP:STEPS")]
    sweep: Option<Sweep>,
    #[arg(long)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Print the available scenarios and exit.
    #[arg(long)]
    list_scenarios: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_scenarios {
        for s in Scenario::ALL {
            println!("{:<14} {}", s.id(), s.summary());
            println!("{:<14} presets: {}", "", scenario::presets(s).join(", "));
        }
        return ExitCode::SUCCESS;
    }
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> selfmeasure::Result<bool> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path)?,
        None => String::new(),
    };
    let mut overrides = Vec::new();
    if let Some(s) = cli.scenario {
        overrides.push(format!("scenario={s}"));
    }
    if let Some(t) = cli.tolerance {
        overrides.push(format!("tolerance={t:e}"));
    }
    if let Some(seed) = cli.seed {
        overrides.push(format!("seed={seed}"));
    }
    if let Some(s) = &cli.sweep {
        overrides.push(format!(
            "sweep={{param: {}, start: {:e}, stop: {:e}, steps: {}}}",
            s.param.id(),
            s.start,
            s.stop,
            s.steps
        ));
    }
    overrides.extend(cli.set.iter().cloned());
    if cli.config.is_none() && cli.scenario.is_none() {
        return Err(selfmeasure::Error::Config(
            "give --scenario or --config (see --list-scenarios)".into(),
        ));
    }
    let cfg = parse_config_with(&text, &overrides)?;
    let report = scenario::run(&cfg)?;
    let format = cli.format.unwrap_or(cfg.format);
    let body = report.emit(format)?;
    match cli.output.or(cfg.output.as_ref().map(PathBuf::from)) {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    for failure in &report.summary.required_failures {
        eprintln!("required invariant failed: {failure}");
    }
    Ok(report.passed())
}
