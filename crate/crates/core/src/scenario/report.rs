//! Run reports and their JSON/CSV emission. Schema: `docs/report-schema.md`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::config::{Format, ScenarioConfig, Sweep};
use crate::error::{Error, Result};
use crate::superselection::DiscriminationVerdict;

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub passed: bool,
    /// Measured quantity compared against the tolerance.
    pub residual: f64,
    /// Whether a failure makes the run fail.
    pub required: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub max_deviation: f64,
    pub witness: Option<String>,
    pub distinguishable: bool,
    pub evaluated: usize,
}

impl From<DiscriminationVerdict> for VerdictRecord {
    fn from(v: DiscriminationVerdict) -> Self {
        VerdictRecord {
            max_deviation: v.max_deviation,
            witness: v.witness,
            distinguishable: v.distinguishable,
            evaluated: v.evaluated,
        }
    }
}

/// Results at one parameter point.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_value: Option<f64>,
    pub parameters: BTreeMap<String, f64>,
    pub expectations: BTreeMap<String, f64>,
    pub invariants: BTreeMap<String, InvariantResult>,
    pub verdicts: BTreeMap<String, VerdictRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, String>,
}

impl PointReport {
    pub fn expect(&mut self, name: &str, value: f64) {
        // normalizes -0.0 so reports do not flicker in sign
        self.expectations.insert(name.to_string(), value + 0.0);
    }

    pub fn param(&mut self, name: &str, value: f64) {
        self.parameters.insert(name.to_string(), value);
    }

    /// Records `residual <= tol`.
    pub fn check(&mut self, name: &str, residual: f64, tol: f64, required: bool) {
        self.record(name, residual <= tol, residual, required, None);
    }

    pub fn record(&mut self, name: &str, passed: bool, residual: f64, required: bool, note: Option<String>) {
        let previous = self.invariants.insert(
            name.to_string(),
            InvariantResult {
                passed,
                residual,
                required,
                note,
            },
        );
        debug_assert!(previous.is_none(), "invariant {name} recorded twice");
    }

    pub fn verdict(&mut self, name: &str, v: DiscriminationVerdict) {
        self.verdicts.insert(name.to_string(), v.into());
    }

    pub fn note(&mut self, name: &str, text: impl Into<String>) {
        self.notes.insert(name.to_string(), text.into());
    }

    pub fn required_failures(&self) -> impl Iterator<Item = &str> {
        self.invariants
            .iter()
            .filter(|(_, r)| r.required && !r.passed)
            .map(|(k, _)| k.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub points: usize,
    pub invariants_checked: usize,
    pub required_failures: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: String,
    pub scenario: String,
    pub seed: u64,
    pub tolerance: f64,
    pub observable_preset: String,
    /// The full effective configuration.
    pub config: ScenarioConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    pub points: Vec<PointReport>,
    pub summary: Summary,
    /// Wall-clock seconds; the only field that varies between identical runs.
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn new(config: &ScenarioConfig, points: Vec<PointReport>, wall_time_s: f64) -> Self {
        let required_failures: Vec<String> = points
            .iter()
            .flat_map(|p| {
                let prefix = if points.len() > 1 {
                    format!("[{}] ", p.index)
                } else {
                    String::new()
                };
                p.required_failures()
                    .map(move |n| format!("{prefix}{n}"))
                    .collect::<Vec<_>>()
            })
            .collect();
        RunReport {
            schema_version: SCHEMA_VERSION.to_string(),
            scenario: config.scenario.id().to_string(),
            seed: config.seed,
            tolerance: config.tolerance,
            observable_preset: config.preset().to_string(),
            config: config.clone(),
            sweep: config.sweep.clone(),
            summary: Summary {
                points: points.len(),
                invariants_checked: points.iter().map(|p| p.invariants.len()).sum(),
                passed: required_failures.is_empty(),
                required_failures,
            },
            points,
            wall_time_s,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.passed
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    /// One row per point: `index`, the sweep value, every parameter,
    /// expectation and verdict deviation, then one pass column per
    /// invariant, all in sorted column order.
    pub fn to_csv(&self) -> Result<String> {
        let params: BTreeSet<&str> = self.points.iter().flat_map(|p| p.parameters.keys()).map(String::as_str).collect();
        let exps: BTreeSet<&str> = self.points.iter().flat_map(|p| p.expectations.keys()).map(String::as_str).collect();
        let verdicts: BTreeSet<&str> = self.points.iter().flat_map(|p| p.verdicts.keys()).map(String::as_str).collect();
        let invs: BTreeSet<&str> = self.points.iter().flat_map(|p| p.invariants.keys()).map(String::as_str).collect();
        let sweep_col = self
            .sweep
            .as_ref()
            .map(|s| s.param.id().to_string())
            .unwrap_or_else(|| "sweep_value".into());

        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["index".to_string(), sweep_col];
        header.extend(params.iter().map(|k| format!("param:{k}")));
        header.extend(exps.iter().map(|k| k.to_string()));
        header.extend(verdicts.iter().map(|k| format!("verdict:{k}:max_deviation")));
        header.extend(verdicts.iter().map(|k| format!("verdict:{k}:distinguishable")));
        header.extend(invs.iter().map(|k| format!("invariant:{k}")));
        header.push("passed".into());
        w.write_record(&header).map_err(csv_error)?;

        let num = |v: Option<&f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for p in &self.points {
            let mut row = vec![p.index.to_string(), num(p.sweep_value.as_ref())];
            row.extend(params.iter().map(|k| num(p.parameters.get(*k))));
            row.extend(exps.iter().map(|k| num(p.expectations.get(*k))));
            row.extend(verdicts.iter().map(|k| num(p.verdicts.get(*k).map(|v| &v.max_deviation))));
            row.extend(
                verdicts
                    .iter()
                    .map(|k| p.verdicts.get(*k).map(|v| v.distinguishable.to_string()).unwrap_or_default()),
            );
            row.extend(
                invs.iter()
                    .map(|k| p.invariants.get(*k).map(|r| r.passed.to_string()).unwrap_or_default()),
            );
            row.push(p.required_failures().next().is_none().to_string());
            w.write_record(&row).map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn emit(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}
