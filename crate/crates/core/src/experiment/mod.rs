//! Configured, reproducible runs: figure experiments, the conjecture matrix
//! and parameter sweeps. Each run writes its data files and a manifest into
//! its own output directory.

mod figures;
mod matrix;
pub mod params;
pub mod suites;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qdyn::TraceOptions;
use crate::states::{DispersionConvention, GeneratorScale, DEFAULT_LEAKAGE_THRESHOLD};

pub use matrix::{matrix_rows, MatrixRow, MATRIX_COLUMNS};
pub use figures::INTEGRABLE_RATIOS;
pub use params::*;

pub const MANIFEST_SCHEMA: &str = "qdof.manifest/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExperimentKind {
    Fig1Spin,
    Fig2SpinChaos,
    Fig3Osc,
    Fig4OscOrbits,
    Fig5Bilinear,
    Fig6Lipkin,
    ConjectureMatrix,
    Sweep,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Fig1Spin,
        ExperimentKind::Fig2SpinChaos,
        ExperimentKind::Fig3Osc,
        ExperimentKind::Fig4OscOrbits,
        ExperimentKind::Fig5Bilinear,
        ExperimentKind::Fig6Lipkin,
        ExperimentKind::ConjectureMatrix,
        ExperimentKind::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Fig1Spin => "Fig1Spin",
            ExperimentKind::Fig2SpinChaos => "Fig2SpinChaos",
            ExperimentKind::Fig3Osc => "Fig3Osc",
            ExperimentKind::Fig4OscOrbits => "Fig4OscOrbits",
            ExperimentKind::Fig5Bilinear => "Fig5Bilinear",
            ExperimentKind::Fig6Lipkin => "Fig6Lipkin",
            ExperimentKind::ConjectureMatrix => "ConjectureMatrix",
            ExperimentKind::Sweep => "Sweep",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentKind::Fig1Spin => "spin pair: quantumness trace with and without the transverse coupling",
            ExperimentKind::Fig2SpinChaos => "classical spin model: Lyapunov screen, chaotic orbit and section",
            ExperimentKind::Fig3Osc => "cubic oscillators: quantumness traces and truncation check",
            ExperimentKind::Fig4OscOrbits => "Henon-Heiles limit: chaos screens for several coupling ratios",
            ExperimentKind::Fig5Bilinear => "number-number versus bilinear oscillator coupling",
            ExperimentKind::Fig6Lipkin => "su(3) Lipkin model with and without pairing",
            ExperimentKind::ConjectureMatrix => "symmetry, quantumness and chaos for every family",
            ExperimentKind::Sweep => "maximal quantumness excursion along a parameter line",
        }
    }

    /// Whether `conventions.hbar` feeds a `hbar` parameter.
    fn takes_hbar(self) -> bool {
        matches!(self, ExperimentKind::Fig3Osc | ExperimentKind::Fig5Bilinear | ExperimentKind::ConjectureMatrix)
    }
}

/// Conventions shared by every quantumness evaluation in a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Conventions {
    pub scale: GeneratorScale,
    pub dispersion: DispersionConvention,
    /// Default ħ for oscillator experiments; an explicit `params.hbar` wins.
    pub hbar: Option<f64>,
    pub leakage_threshold: f64,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            scale: GeneratorScale::AsListed,
            dispersion: DispersionConvention::StdDev,
            hbar: None,
            leakage_threshold: DEFAULT_LEAKAGE_THRESHOLD,
        }
    }
}

impl Conventions {
    pub fn trace_options(&self) -> TraceOptions {
        TraceOptions {
            scale: self.scale,
            dispersion: self.dispersion,
            leakage_threshold: self.leakage_threshold,
            ..TraceOptions::default()
        }
    }
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Contents of a run configuration file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub conventions: Conventions,
    /// Overrides of the experiment's defaults.
    #[serde(default)]
    pub params: toml::Table,
}

/// Typed parameters with every default filled in.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Plan {
    Fig1Spin(Fig1SpinParams),
    Fig2SpinChaos(Fig2SpinChaosParams),
    Fig3Osc(Fig3OscParams),
    Fig4OscOrbits(Fig4OscOrbitsParams),
    Fig5Bilinear(Fig5BilinearParams),
    Fig6Lipkin(Fig6LipkinParams),
    ConjectureMatrix(ConjectureMatrixParams),
    Sweep(SweepParams),
}

fn typed<T: serde::de::DeserializeOwned>(table: toml::Table) -> Result<T> {
    toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| Error::Config(format!("params: {}", e.message())))
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn with_defaults(experiment: ExperimentKind, output_dir: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            experiment,
            output_dir: output_dir.into(),
            seed: 0,
            conventions: Conventions::default(),
            params: toml::Table::new(),
        }
    }

    /// Parses and range-checks the parameters.
    pub fn resolve(&self) -> Result<Plan> {
        let c = &self.conventions;
        if !(c.leakage_threshold > 0.0) {
            return Err(Error::Config("conventions.leakage_threshold must be positive".into()));
        }
        let mut table = self.params.clone();
        if let Some(h) = c.hbar {
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::Config(format!("conventions.hbar must be positive, got {h}")));
            }
            if self.experiment.takes_hbar() {
                table.entry("hbar").or_insert(toml::Value::Float(h));
            }
        }
        let plan = match self.experiment {
            ExperimentKind::Fig1Spin => Plan::Fig1Spin(typed(table)?),
            ExperimentKind::Fig2SpinChaos => Plan::Fig2SpinChaos(typed(table)?),
            ExperimentKind::Fig3Osc => Plan::Fig3Osc(typed(table)?),
            ExperimentKind::Fig4OscOrbits => Plan::Fig4OscOrbits(typed(table)?),
            ExperimentKind::Fig5Bilinear => Plan::Fig5Bilinear(typed(table)?),
            ExperimentKind::Fig6Lipkin => Plan::Fig6Lipkin(typed(table)?),
            ExperimentKind::ConjectureMatrix => Plan::ConjectureMatrix(typed(table)?),
            ExperimentKind::Sweep => Plan::Sweep(typed(table)?),
        };
        plan.validate()?;
        Ok(plan)
    }
}

impl Plan {
    pub fn validate(&self) -> Result<()> {
        match self {
            Plan::Fig1Spin(p) => p.validate(),
            Plan::Fig2SpinChaos(p) => p.validate(),
            Plan::Fig3Osc(p) => p.validate(),
            Plan::Fig4OscOrbits(p) => p.validate(),
            Plan::Fig5Bilinear(p) => p.validate(),
            Plan::Fig6Lipkin(p) => p.validate(),
            Plan::ConjectureMatrix(p) => p.validate(),
            Plan::Sweep(p) => p.validate(),
        }
    }
}

/// One assertion of a verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// `<` or `>` for bounds, `==` for flags
    pub relation: String,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check { name: name.into(), value, relation: "<".into(), bound, pass: value < bound }
    }

    pub fn above(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check { name: name.into(), value, relation: ">".into(), bound, pass: value > bound }
    }

    pub fn flag(name: impl Into<String>, observed: bool, expected: bool) -> Self {
        let f = |b: bool| if b { 1.0 } else { 0.0 };
        Check { name: name.into(), value: f(observed), relation: "==".into(), bound: f(expected), pass: observed == expected }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Verdict {
    pub fn new(checks: Vec<Check>) -> Self {
        Verdict { pass: checks.iter().all(|c| c.pass), checks }
    }
}

/// What an experiment body hands back to the runner.
#[derive(Debug, Default)]
pub(crate) struct Report {
    pub files: Vec<String>,
    pub checks: Option<Vec<Check>>,
    pub summary: serde_json::Map<String, serde_json::Value>,
}

impl Report {
    fn note(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.summary.insert(key.into(), serde_json::to_value(value)?);
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: String,
    pub experiment: ExperimentKind,
    pub version: String,
    pub seed: u64,
    pub conventions: Conventions,
    /// Resolved parameters, defaults included.
    pub params: serde_json::Value,
    pub tolerances: BTreeMap<String, f64>,
    pub output_dir: PathBuf,
    pub files: Vec<String>,
    pub wall_time_s: f64,
    pub summary: serde_json::Map<String, serde_json::Value>,
    pub verdict: Option<Verdict>,
}

pub fn library_tolerances() -> BTreeMap<String, f64> {
    BTreeMap::from([
        ("classical_drift".into(), crate::orbits::DEFAULT_DRIFT_TOLERANCE),
        ("flow".into(), crate::qdyn::FLOW_TOLERANCE),
        ("symmetry".into(), crate::qdyn::SYMMETRY_TOL),
        ("dense_limit".into(), crate::qdyn::DENSE_LIMIT as f64),
    ])
}

/// Runs `config`, writing data files and `manifest.json` to its output
/// directory.
pub fn run(config: &ExperimentConfig) -> Result<Manifest> {
    let plan = config.resolve()?;
    let dir = &config.output_dir;
    fs::create_dir_all(dir)?;
    let started = Instant::now();
    let conv = &config.conventions;
    let report = match &plan {
        Plan::Fig1Spin(p) => figures::fig1_spin(p, conv, dir, config.seed)?,
        Plan::Fig2SpinChaos(p) => figures::fig2_spin_chaos(p, dir)?,
        Plan::Fig3Osc(p) => figures::fig3_osc(p, conv, dir, config.seed)?,
        Plan::Fig4OscOrbits(p) => figures::fig4_osc_orbits(p, dir)?,
        Plan::Fig5Bilinear(p) => figures::fig5_bilinear(p, conv, dir, config.seed)?,
        Plan::Fig6Lipkin(p) => figures::fig6_lipkin(p, conv, dir, config.seed)?,
        Plan::ConjectureMatrix(p) => matrix::conjecture_matrix(p, conv, dir)?,
        Plan::Sweep(p) => matrix::sweep(p, conv, dir)?,
    };
    let manifest = Manifest {
        schema: MANIFEST_SCHEMA.into(),
        experiment: config.experiment,
        version: env!("CARGO_PKG_VERSION").into(),
        seed: config.seed,
        conventions: *conv,
        params: serde_json::to_value(&plan)?,
        tolerances: library_tolerances(),
        output_dir: dir.clone(),
        files: report.files,
        wall_time_s: started.elapsed().as_secs_f64(),
        summary: report.summary,
        verdict: report.checks.map(Verdict::new),
    };
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        assert!(ExperimentConfig::from_toml_str("experiment = \"Fig1Spin\"\ncolour = 3\n").is_err());
        let cfg = ExperimentConfig::from_toml_str("experiment = \"Fig1Spin\"\n[params]\nomegaa = 1.0\n").unwrap();
        assert!(matches!(cfg.resolve(), Err(Error::Config(_))));
        let cfg = ExperimentConfig::from_toml_str("experiment = \"Fig1Spin\"\n[conventions]\nscale = \"bogus\"\n");
        assert!(cfg.is_err());
        assert!(ExperimentConfig::from_toml_str("experiment = \"Fig9\"\n").is_err());
    }

    #[test]
    fn defaults_resolve_for_every_experiment() {
        for kind in ExperimentKind::ALL {
            let cfg = ExperimentConfig::with_defaults(kind, "unused");
            cfg.resolve().unwrap_or_else(|e| panic!("{}: {e}", kind.name()));
        }
    }

    #[test]
    fn conventions_hbar_fills_params() {
        let text = "experiment = \"Fig3Osc\"\n[conventions]\nhbar = 0.02\n";
        let Plan::Fig3Osc(p) = ExperimentConfig::from_toml_str(text).unwrap().resolve().unwrap() else { panic!() };
        assert_eq!(p.hbar, 0.02);
        let text = "experiment = \"Fig3Osc\"\n[conventions]\nhbar = 0.02\n[params]\nhbar = 0.03\n";
        let Plan::Fig3Osc(p) = ExperimentConfig::from_toml_str(text).unwrap().resolve().unwrap() else { panic!() };
        assert_eq!(p.hbar, 0.03);
    }

    #[test]
    fn range_errors_are_config_errors() {
        let text = "experiment = \"Fig1Spin\"\n[params]\nj = -1.0\n";
        assert!(matches!(ExperimentConfig::from_toml_str(text).unwrap().resolve(), Err(Error::Config(_))));
        let text = "experiment = \"Fig3Osc\"\n[params]\nn_max = 3\n";
        assert!(matches!(ExperimentConfig::from_toml_str(text).unwrap().resolve(), Err(Error::Config(_))));
    }
}
