//! Run configuration: a TOML document with `[grid]`, `[params]`,
//! `[initial]`, `[run]` and optional `[experiment]` sections.
//!
//! ```toml
//! [grid]
//! n = 1024
//! length = 64.0
//!
//! [params]
//! alpha = 1.0
//! beta = 1.0
//! delta = 1.0
//! rho = 1.0
//!
//! [initial]
//! kind = "grey_pair"
//! theta = 0.3
//! x0 = 24.0
//!
//! [run]
//! horizon = 1.0
//! dt = "auto"
//! record_every = 20
//! ```

use std::path::{Path, PathBuf};

use ginls_core::dynamics::{make_initial_data, stability_dt, InitialData, ModelParams};
use ginls_core::spectral::{FieldState, Grid};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub length: f64,
}

/// Time step: a number, or `"auto"` for the stability budget of the
/// initial state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DtSpec {
    #[default]
    Auto,
    Fixed(f64),
}

impl Serialize for DtSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            DtSpec::Auto => s.serialize_str("auto"),
            DtSpec::Fixed(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for DtSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(DtSpec::Fixed(v)),
            Raw::Int(v) => Ok(DtSpec::Fixed(v as f64)),
            Raw::Text(t) if t == "auto" => Ok(DtSpec::Auto),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "expected a number or \"auto\", got {t:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub horizon: f64,
    #[serde(default)]
    pub dt: DtSpec,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Seed for random perturbations (and `random_band` data via `--seed`).
    #[serde(default)]
    pub seed: u64,
    /// Write binary snapshots of the first and last recorded states.
    #[serde(default = "default_true")]
    pub snapshots: bool,
}

fn default_record_every() -> usize {
    10
}

fn default_true() -> bool {
    true
}

/// Fields used by the `experiment` subcommands; each experiment reads only
/// its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Mollification levels; the largest is the reference.
    #[serde(default = "default_levels")]
    pub levels: Vec<u32>,
    #[serde(default = "default_deltas")]
    pub deltas: Vec<f64>,
    /// Perturbation sizes `ε` for continuous dependence.
    #[serde(default = "default_amplitudes")]
    pub amplitudes: Vec<f64>,
    /// Width of the localised perturbation envelope.
    #[serde(default = "default_width")]
    pub perturbation_width: f64,
    /// Also rerun at `2n` and compare fitted slopes.
    #[serde(default = "default_true")]
    pub refine: bool,
    /// Relative drift budget for conserved quantities.
    #[serde(default = "default_drift_tol")]
    pub drift_tol: f64,
    /// Fraction of the horizon used to calibrate the Gronwall constant.
    #[serde(default = "default_calibration")]
    pub calibration_fraction: f64,
    #[serde(default = "default_safety")]
    pub gronwall_safety: f64,
}

fn default_levels() -> Vec<u32> {
    vec![0, 1, 2, 3, 4]
}

fn default_deltas() -> Vec<f64> {
    vec![2.0, 4.0, 8.0, 16.0]
}

fn default_amplitudes() -> Vec<f64> {
    vec![1e-5, 1e-4, 1e-3, 1e-2]
}

fn default_width() -> f64 {
    2.0
}

fn default_drift_tol() -> f64 {
    1e-6
}

fn default_calibration() -> f64 {
    0.25
}

fn default_safety() -> f64 {
    2.0
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            levels: default_levels(),
            deltas: default_deltas(),
            amplitudes: default_amplitudes(),
            perturbation_width: default_width(),
            refine: true,
            drift_tol: default_drift_tol(),
            calibration_fraction: default_calibration(),
            gronwall_safety: default_safety(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub params: ModelParams,
    pub initial: InitialData,
    pub run: RunSection,
    #[serde(default)]
    pub experiment: ExperimentConfig,
}

/// Parses a scalar override value as TOML, falling back to a bare string.
fn field_message(section: &str, e: &ginls_core::Error) -> String {
    match e {
        ginls_core::Error::InvalidArgument { name, reason } => {
            format!("{section}.{name}: {reason}")
        }
        other => format!("{section}: {other}"),
    }
}

fn parse_value(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => t
            .remove("v")
            .unwrap_or_else(|| toml::Value::String(raw.to_string())),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

/// Applies `key.sub=value` to a TOML table, creating sections as needed.
pub fn apply_override(table: &mut toml::Table, assignment: &str) -> LabResult<()> {
    let (key, raw) = assignment.split_once('=').ok_or_else(|| {
        LabError::config(format!(
            "override `{assignment}` is not of the form key=value"
        ))
    })?;
    let parts: Vec<&str> = key.trim().split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(LabError::config(format!(
            "override key `{key}` has an empty segment"
        )));
    }
    let mut cur = table;
    for p in &parts[..parts.len() - 1] {
        let entry = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| LabError::config(format!("override `{key}`: `{p}` is not a section")))?;
    }
    cur.insert(parts[parts.len() - 1].to_string(), parse_value(raw.trim()));
    Ok(())
}

impl RunConfig {
    pub fn from_toml_str(text: &str, overrides: &[String]) -> LabResult<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            LabError::config(format!("parse error: {}", e.message()))
        })?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let cfg: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| LabError::config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &[String]) -> LabResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text, overrides)
    }

    /// `--seed` sets `run.seed` and, for `random_band` data, the datum seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.run.seed = seed;
        if let InitialData::RandomBand { seed: s, .. } = &mut self.initial {
            *s = seed;
        }
        self
    }

    /// Checks every field and reports all problems at once.
    pub fn validate(&self) -> LabResult<()> {
        let mut errs = Vec::new();
        let n = self.grid.n;
        if n < 8 || !n.is_power_of_two() {
            errs.push(format!("grid.n: must be a power of two >= 8, got {n}"));
        }
        let length = self.grid.length;
        if !(length > 0.0 && length.is_finite()) {
            errs.push(format!("grid.length: must be positive, got {length}"));
        }
        let p = &self.params;
        for (name, v) in [("alpha", p.alpha), ("beta", p.beta)] {
            if !v.is_finite() {
                errs.push(format!("params.{name}: must be finite, got {v}"));
            }
        }
        for (name, v) in [("delta", p.delta), ("rho", p.rho)] {
            if !(v > 0.0 && v.is_finite()) {
                errs.push(format!("params.{name}: must be positive, got {v}"));
            }
        }
        if errs.is_empty() {
            if let Err(e) = p.validate() {
                errs.push(field_message("params", &e));
            }
        }
        if errs.is_empty() {
            let g = Grid::new(n, length)?;
            if let Err(e) = make_initial_data(&self.initial, &g, p.rho) {
                errs.push(field_message("initial", &e));
            }
        }
        let r = &self.run;
        if !(r.horizon > 0.0 && r.horizon.is_finite()) {
            errs.push(format!("run.horizon: must be positive, got {}", r.horizon));
        }
        if let DtSpec::Fixed(dt) = r.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                errs.push(format!("run.dt: must be positive or \"auto\", got {dt}"));
            }
        }
        if r.record_every == 0 {
            errs.push("run.record_every: must be at least 1".into());
        }
        let x = &self.experiment;
        if x.levels.windows(2).any(|w| w[1] <= w[0]) {
            errs.push("experiment.levels: must be strictly increasing".into());
        }
        if x.deltas.iter().any(|d| !(*d > 0.0)) || x.deltas.windows(2).any(|w| w[1] <= w[0]) {
            errs.push("experiment.deltas: must be positive and strictly increasing".into());
        }
        if x.amplitudes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            errs.push("experiment.amplitudes: must be positive (ε = 0 is degenerate)".into());
        }
        if !(x.perturbation_width > 0.0) {
            errs.push("experiment.perturbation_width: must be positive".into());
        }
        if !(x.drift_tol > 0.0) {
            errs.push("experiment.drift_tol: must be positive".into());
        }
        if !(x.calibration_fraction > 0.0 && x.calibration_fraction <= 1.0) {
            errs.push("experiment.calibration_fraction: must lie in (0, 1]".into());
        }
        if !(x.gronwall_safety >= 1.0) {
            errs.push("experiment.gronwall_safety: must be at least 1".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(LabError::Config(errs))
        }
    }

    pub fn grid(&self) -> LabResult<Grid> {
        Grid::new(self.grid.n, self.grid.length).map_err(|e| LabError::config(format!("grid: {e}")))
    }

    pub fn initial_state(&self) -> LabResult<FieldState> {
        make_initial_data(&self.initial, &self.grid()?, self.params.rho)
            .map_err(|e| LabError::config(format!("initial: {e}")))
    }

    /// The step size for `f0`.
    pub fn dt_for(&self, f0: &FieldState) -> f64 {
        match self.run.dt {
            DtSpec::Auto => stability_dt(f0),
            DtSpec::Fixed(dt) => dt,
        }
    }

    /// Single-line JSON echo for file headers.
    pub fn echo(&self) -> String {
        serde_json::to_string(self).expect("config serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[grid]
n = 256
length = 64.0

[params]
alpha = 1.0
beta = 1.0
delta = 1.0
rho = 1.0

[initial]
kind = "grey_pair"
theta = 0.3
x0 = 16.0

[run]
horizon = 1.0
"#;

    #[test]
    fn parses_with_defaults() {
        let c = RunConfig::from_toml_str(BASE, &[]).unwrap();
        assert_eq!(c.run.dt, DtSpec::Auto);
        assert_eq!(c.run.record_every, 10);
        assert!(c.params.dealias);
        assert_eq!(c.experiment, ExperimentConfig::default());
    }

    #[test]
    fn overrides_use_dotted_keys() {
        let o = vec![
            "params.beta=0.5".to_string(),
            "run.dt=0.001".to_string(),
            "initial.theta=0.2".to_string(),
            "experiment.levels=[1, 2, 3, 5]".to_string(),
        ];
        let c = RunConfig::from_toml_str(BASE, &o).unwrap();
        assert_eq!(c.params.beta, 0.5);
        assert_eq!(c.run.dt, DtSpec::Fixed(0.001));
        assert_eq!(c.experiment.levels, vec![1, 2, 3, 5]);
        match c.initial {
            InitialData::GreyPair { theta, .. } => assert_eq!(theta, 0.2),
            _ => panic!(),
        }
    }

    #[test]
    fn reports_every_bad_field() {
        let o = vec![
            "grid.n=100".to_string(),
            "run.horizon=-1".to_string(),
            "params.delta=0".to_string(),
        ];
        match RunConfig::from_toml_str(BASE, &o) {
            Err(LabError::Config(errs)) => {
                assert_eq!(errs.len(), 3, "{errs:?}");
                assert!(errs[0].starts_with("grid.n"));
                assert!(errs.iter().any(|e| e.starts_with("run.horizon")));
                assert!(errs.iter().any(|e| e.starts_with("params.delta")));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_fields_and_bad_overrides() {
        assert!(RunConfig::from_toml_str(BASE, &["run.horizn=1".to_string()]).is_err());
        assert!(RunConfig::from_toml_str(BASE, &["novalue".to_string()]).is_err());
        assert!(RunConfig::from_toml_str(BASE, &["run.dt=fast".to_string()]).is_err());
        // grey pair on a small box fails the seam check at load time
        assert!(RunConfig::from_toml_str(
            BASE,
            &["grid.length=8".to_string(), "initial.x0=2".to_string()]
        )
        .is_err());
    }

    #[test]
    fn seed_reaches_random_band() {
        let c = RunConfig::from_toml_str(BASE, &[]).unwrap().with_seed(7);
        assert_eq!(c.run.seed, 7);
        let mut band = c.clone();
        band.initial = InitialData::RandomBand {
            seed: 0,
            band: 4,
            amp: 0.1,
        };
        match band.with_seed(9).initial {
            InitialData::RandomBand { seed, .. } => assert_eq!(seed, 9),
            _ => panic!(),
        }
    }

    #[test]
    fn echo_round_trips() {
        let c = RunConfig::from_toml_str(BASE, &[]).unwrap();
        let back: RunConfig = serde_json::from_str(&c.echo()).unwrap();
        assert_eq!(back, c);
    }
}
