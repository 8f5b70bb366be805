//! Scenario configuration: YAML with defaults, dotted overrides and sweeps.
//!
//! The grammar is documented in `docs/config.md`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_yaml::{Mapping, Value};

use crate::error::{Error, Result};
use crate::polar_deg;

/// Amplitude inputs within this distance of unit norm are renormalized.
pub const AMPLITUDE_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Scenario {
    #[serde(rename = "ch-basic")]
    ChBasic,
    #[serde(rename = "ch-heisenberg")]
    ChHeisenberg,
    #[serde(rename = "ch-cascade")]
    ChCascade,
    #[serde(rename = "rd-basic")]
    RdBasic,
    #[serde(rename = "growth")]
    Growth,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::ChBasic,
        Scenario::ChHeisenberg,
        Scenario::ChCascade,
        Scenario::RdBasic,
        Scenario::Growth,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Scenario::ChBasic => "ch-basic",
            Scenario::ChHeisenberg => "ch-heisenberg",
            Scenario::ChCascade => "ch-cascade",
            Scenario::RdBasic => "rd-basic",
            Scenario::Growth => "growth",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Scenario::ChBasic => {
                "spin measured by one Coleman-Hepp chain: closed form, strict measurement, IT operator, commutator, discrimination"
            }
            Scenario::ChHeisenberg => "Heisenberg-coupled chain: pointer states as Hamiltonian eigenstates",
            Scenario::ChCascade => "chains measuring earlier interference terms: information trade-off and terminal IT witness",
            Scenario::RdBasic => "path memorized by a radiating lattice: photon-number observables cannot see coherence",
            Scenario::Growth => "emission cascade: unmeasured particles per detector generation",
        }
    }

    pub fn default_preset(self) -> &'static str {
        match self {
            Scenario::RdBasic => "glauber",
            Scenario::ChCascade => "pointer_only",
            Scenario::Growth => "none",
            _ => "all_strings",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.id() == s)
            .ok_or_else(|| {
                let known: Vec<_> = Scenario::ALL.iter().map(|s| s.id()).collect();
                Error::Config(format!("unknown scenario '{s}' (known: {})", known.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Config(format!("unknown format '{other}' (json or csv)"))),
        }
    }
}

/// `[magnitude, phase_degrees]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Amplitude(pub f64, pub f64);

impl Amplitude {
    pub fn magnitude(self) -> f64 {
        self.0
    }

    pub fn phase_deg(self) -> f64 {
        self.1
    }

    pub fn to_complex(self) -> Complex64 {
        polar_deg(self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Amplitudes {
    pub a1: Amplitude,
    pub a2: Amplitude,
}

impl Default for Amplitudes {
    fn default() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Amplitudes {
            a1: Amplitude(r, 0.0),
            a2: Amplitude(r, 0.0),
        }
    }
}

impl Amplitudes {
    /// Complex amplitudes, renormalized when within [`AMPLITUDE_SLACK`].
    pub fn resolve(&self) -> Result<(Complex64, Complex64)> {
        if self.a1.0 < 0.0 || self.a2.0 < 0.0 {
            return Err(Error::precondition("hilbert_core", "amplitude magnitudes must be non-negative"));
        }
        let total = self.a1.0.powi(2) + self.a2.0.powi(2);
        if (total - 1.0).abs() > AMPLITUDE_SLACK {
            return Err(Error::AmplitudesNotNormalized(total));
        }
        let s = total.sqrt();
        Ok((self.a1.to_complex() / s, self.a2.to_complex() / s))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChainConfig {
    pub n_atoms: usize,
    /// Heisenberg exchange constant.
    pub exchange_j: f64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            n_atoms: 4,
            exchange_j: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CascadeConfig {
    pub chains: Vec<usize>,
}

impl Default for CascadeConfig {
    fn default() -> Self {
        CascadeConfig { chains: vec![1, 1] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotonConfig {
    pub pattern: Vec<usize>,
    pub amplitude: Amplitude,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadiationConfig {
    pub modes: usize,
    pub cutoff: usize,
    pub photons: Vec<PhotonConfig>,
    /// Uncorrelated photons per background mode, shared by both branches.
    pub background: Vec<usize>,
}

impl Default for RadiationConfig {
    fn default() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        RadiationConfig {
            modes: 1,
            cutoff: 3,
            photons: vec![
                PhotonConfig {
                    pattern: vec![1],
                    amplitude: Amplitude(r, 0.0),
                },
                PhotonConfig {
                    pattern: vec![2],
                    amplitude: Amplitude(r, 0.0),
                },
            ],
            background: vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GrowthConfig {
    pub emitted: u64,
    pub depth: u32,
    pub bound: u64,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            emitted: 2,
            depth: 10,
            bound: 1 << 40,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    A1Phase,
    A2Phase,
    /// Mixing angle: `|a1| = cos θ`, `|a2| = sin θ`.
    ThetaDeg,
    ExchangeJ,
    NAtoms,
}

impl SweepParam {
    pub const ALL: [SweepParam; 5] = [
        SweepParam::A1Phase,
        SweepParam::A2Phase,
        SweepParam::ThetaDeg,
        SweepParam::ExchangeJ,
        SweepParam::NAtoms,
    ];

    pub fn id(self) -> &'static str {
        match self {
            SweepParam::A1Phase => "a1_phase",
            SweepParam::A2Phase => "a2_phase",
            SweepParam::ThetaDeg => "theta_deg",
            SweepParam::ExchangeJ => "exchange_j",
            SweepParam::NAtoms => "n_atoms",
        }
    }
}

impl FromStr for SweepParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.id() == s)
            .ok_or_else(|| {
                let known: Vec<_> = SweepParam::ALL.iter().map(|p| p.id()).collect();
                Error::Config(format!("unknown sweep parameter '{s}' (known: {})", known.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Sweep {
    /// `steps` evenly spaced values from `start` to `stop` inclusive.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps).map(|k| self.start + h * k as f64).collect()
    }
}

impl FromStr for Sweep {
    type Err = Error;
    /// `param=start:stop:steps`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("sweep '{s}' is not param=start:stop:steps"));
        let (param, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        let [start, stop, steps] = parts.as_slice() else {
            return Err(bad());
        };
        Ok(Sweep {
            param: param.trim().parse()?,
            start: start.trim().parse().map_err(|_| bad())?,
            stop: stop.trim().parse().map_err(|_| bad())?,
            steps: steps.trim().parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub seed: u64,
    /// Random instances drawn for fuzz checks.
    #[serde(default = "default_fuzz")]
    pub fuzz_samples: usize,
    #[serde(default)]
    pub observable_preset: Option<String>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub amplitudes: Amplitudes,
    #[serde(default)]
    pub chain: ChainConfig,
    #[serde(default)]
    pub cascade: CascadeConfig,
    #[serde(default)]
    pub radiation: RadiationConfig,
    #[serde(default)]
    pub growth: GrowthConfig,
    #[serde(default)]
    pub sweep: Option<Sweep>,
}

fn default_tolerance() -> f64 {
    crate::DEFAULT_TOLERANCE
}

fn default_fuzz() -> usize {
    100
}

impl ScenarioConfig {
    /// Defaults for `scenario`.
    pub fn new(scenario: Scenario) -> Self {
        ScenarioConfig {
            scenario,
            tolerance: default_tolerance(),
            seed: 0,
            fuzz_samples: default_fuzz(),
            observable_preset: None,
            format: Format::Json,
            output: None,
            amplitudes: Amplitudes::default(),
            chain: ChainConfig::default(),
            cascade: CascadeConfig::default(),
            radiation: RadiationConfig::default(),
            growth: GrowthConfig::default(),
            sweep: None,
        }
    }

    pub fn preset(&self) -> &str {
        self.observable_preset
            .as_deref()
            .unwrap_or_else(|| self.scenario.default_preset())
    }

    /// Checks every parameter against the preconditions of the module that
    /// will consume it.
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if let Some(s) = &self.sweep {
            if s.steps == 0 {
                return Err(Error::Config("sweep steps must be >= 1".into()));
            }
        }
        let preset = self.preset();
        let known = super::presets(self.scenario);
        if !known.contains(&preset) {
            return Err(Error::Config(format!(
                "observable preset '{preset}' is not available for {} (known: {})",
                self.scenario,
                known.join(", ")
            )));
        }
        super::run::build_models(self).map(|_| ())
    }

    /// Config with the sweep parameter set to `value`.
    pub fn at(&self, param: SweepParam, value: f64) -> Result<ScenarioConfig> {
        let mut c = self.clone();
        c.sweep = None;
        match param {
            SweepParam::A1Phase => c.amplitudes.a1.1 = value,
            SweepParam::A2Phase => c.amplitudes.a2.1 = value,
            SweepParam::ThetaDeg => {
                let t = value.to_radians();
                c.amplitudes.a1.0 = t.cos().abs();
                c.amplitudes.a2.0 = t.sin().abs();
            }
            SweepParam::ExchangeJ => c.chain.exchange_j = value,
            SweepParam::NAtoms => {
                if value < 0.0 || value.fract() != 0.0 {
                    return Err(Error::Config(format!("n_atoms sweep value {value} is not an integer")));
                }
                c.chain.n_atoms = value as usize;
            }
        }
        Ok(c)
    }
}

/// Parses and validates a YAML config.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    parse_config_with(text, &[])
}

/// Parses YAML, applies `key=value` overrides (dotted keys, YAML values),
/// then validates.
pub fn parse_config_with(text: &str, overrides: &[String]) -> Result<ScenarioConfig> {
    let mut value: Value = serde_yaml::from_str(text).map_err(yaml_error)?;
    if value.is_null() {
        value = Value::Mapping(Mapping::new());
    }
    for o in overrides {
        apply_override(&mut value, o)?;
    }
    let config: ScenarioConfig = if overrides.is_empty() {
        serde_yaml::from_str(text).map_err(yaml_error)?
    } else {
        serde_yaml::from_value(value).map_err(yaml_error)?
    };
    config.validate()?;
    Ok(config)
}

// serde_yaml's message already carries "at line L column C"
fn yaml_error(e: serde_yaml::Error) -> Error {
    Error::Config(e.to_string())
}

/// `a.b.c=value` into a nested mapping.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override '{assignment}' is not key=value")))?;
    let parsed: Value = serde_yaml::from_str(raw).map_err(yaml_error)?;
    let mut node = root;
    let parts: Vec<&str> = key.trim().split('.').collect();
    for (k, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(Error::Config(format!("override key '{key}' has an empty segment")));
        }
        let map = match node {
            Value::Mapping(m) => m,
            other => {
                *other = Value::Mapping(Mapping::new());
                other.as_mapping_mut().expect("just set")
            }
        };
        let name = Value::String((*part).to_string());
        if k + 1 == parts.len() {
            map.insert(name, parsed);
            return Ok(());
        }
        node = map.entry(name).or_insert(Value::Mapping(Mapping::new()));
    }
    Ok(())
}
