use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::hamiltonian::{build_hamiltonian, HamiltonianSpec};
use super::propagate::{EvolveOptions, Propagator};
use crate::algebra::AlgebraRep;
use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::states::{
    coherent_state_with, family_minimum, CoherentPoint, DispersionConvention, GeneratorScale, Measure,
    QuantumnessOptions, QuantumnessProbe, DEFAULT_LEAKAGE_THRESHOLD,
};

pub const TRACE_SCHEMA: &str = "qdof.trace/v1";
pub const TRACE_COLUMNS: [&str; 5] = ["t", "delta_g", "leakage", "norm_drift", "energy_drift"];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TraceOptions {
    pub scale: GeneratorScale,
    pub dispersion: DispersionConvention,
    pub leakage_threshold: f64,
    pub evolve: EvolveOptions,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            scale: GeneratorScale::AsListed,
            dispersion: DispersionConvention::StdDev,
            leakage_threshold: DEFAULT_LEAKAGE_THRESHOLD,
            evolve: EvolveOptions::default(),
        }
    }
}

/// Quantumness along a Schrödinger trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumnessTrace {
    pub spec: HamiltonianSpec,
    pub initial: CoherentPoint,
    pub measure: Measure,
    pub options: TraceOptions,
    pub hbar: f64,
    pub dim: usize,
    pub dense: bool,
    /// quantumness of the reference coherent state
    pub family_minimum: f64,
    pub times: Vec<f64>,
    pub delta_g: Vec<f64>,
    pub leakage: Vec<f64>,
    pub norm_drift: Vec<f64>,
    pub energy_drift: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSidecar {
    pub schema: String,
    pub columns: Vec<String>,
    pub spec: HamiltonianSpec,
    pub initial: CoherentPoint,
    pub measure: Measure,
    pub options: TraceOptions,
    pub hbar: f64,
    pub dim: usize,
    pub method: String,
    pub family_minimum: f64,
    pub excursion: f64,
    pub max_leakage: f64,
    pub seed: Option<u64>,
}

impl QuantumnessTrace {
    /// max − min of Δ over the grid.
    pub fn excursion(&self) -> f64 {
        let max = self.delta_g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.delta_g.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }

    pub fn is_constant(&self, tol: f64) -> bool {
        self.excursion() < tol
    }

    pub fn max_leakage(&self) -> f64 {
        self.leakage.iter().copied().fold(0.0, f64::max)
    }

    /// Largest |Δ_a(t) − Δ_b(t)| between traces on the same grid.
    pub fn max_difference(&self, other: &QuantumnessTrace) -> Result<f64> {
        if self.times != other.times {
            return Err(Error::InvalidArgument("traces sampled on different grids".into()));
        }
        Ok(self.delta_g.iter().zip(&other.delta_g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    /// Errors if any sample falls below the reference-state value by more
    /// than `tol`.
    pub fn check_floor(&self, tol: f64) -> Result<()> {
        match self.delta_g.iter().zip(&self.times).find(|(d, _)| **d < self.family_minimum - tol) {
            Some((d, t)) => Err(Error::Tolerance(format!(
                "quantumness {d} at t = {t} below the coherent minimum {}",
                self.family_minimum
            ))),
            None => Ok(()),
        }
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(TRACE_COLUMNS)?;
        for k in 0..self.times.len() {
            w.write_record([
                self.times[k].to_string(),
                self.delta_g[k].to_string(),
                self.leakage[k].to_string(),
                self.norm_drift[k].to_string(),
                self.energy_drift[k].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn sidecar(&self, seed: Option<u64>) -> TraceSidecar {
        TraceSidecar {
            schema: TRACE_SCHEMA.into(),
            columns: TRACE_COLUMNS.iter().map(|s| s.to_string()).collect(),
            spec: self.spec.clone(),
            initial: self.initial.clone(),
            measure: self.measure,
            options: self.options,
            hbar: self.hbar,
            dim: self.dim,
            method: if self.dense { "dense" } else { "krylov" }.into(),
            family_minimum: self.family_minimum,
            excursion: self.excursion(),
            max_leakage: self.max_leakage(),
            seed,
        }
    }

    /// Writes `<stem>.csv` and `<stem>.json` into `dir`.
    pub fn write(&self, dir: &Path, stem: &str, seed: Option<u64>) -> Result<()> {
        fs::create_dir_all(dir)?;
        self.write_csv(&dir.join(format!("{stem}.csv")))?;
        fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(&self.sidecar(seed))?)?;
        Ok(())
    }
}

pub fn quantumness_trace(spec: &HamiltonianSpec, initial: &CoherentPoint, times: &[f64]) -> Result<QuantumnessTrace> {
    quantumness_trace_with(spec, initial, times, &TraceOptions::default())
}

pub fn quantumness_trace_with(
    spec: &HamiltonianSpec,
    initial: &CoherentPoint,
    times: &[f64],
    opts: &TraceOptions,
) -> Result<QuantumnessTrace> {
    let rep = spec
        .build_rep()?
        .ok_or_else(|| Error::InvalidArgument("custom matrices need an explicit representation; use trace_on".into()))?;
    let h = build_hamiltonian(spec, &rep)?;
    trace_on(spec, &rep, &h, initial, times, opts)
}

/// Trace with a prebuilt representation and Hamiltonian.
pub fn trace_on(
    spec: &HamiltonianSpec,
    rep: &AlgebraRep,
    h: &Operator,
    initial: &CoherentPoint,
    times: &[f64],
    opts: &TraceOptions,
) -> Result<QuantumnessTrace> {
    let hbar = spec.hbar();
    if let Some(family) = spec.coherent_family() {
        if family != initial.family {
            return Err(Error::FamilyMismatch { family: format!("{:?}", initial.family), rep: rep.kind.to_string() });
        }
    }
    if spec.is_oscillator() && (initial.hbar - hbar).abs() > 1e-15 * hbar {
        return Err(Error::InvalidArgument(format!(
            "initial point uses hbar = {} but the Hamiltonian uses {hbar}",
            initial.hbar
        )));
    }
    let coherent = coherent_state_with(initial, rep, opts.leakage_threshold)?;
    let measure = spec.measure();
    let qopts = QuantumnessOptions { hbar, scale: opts.scale, dispersion: opts.dispersion };
    let probe = QuantumnessProbe::new(rep, measure, &qopts)?;
    let minimum = family_minimum(rep, measure, &qopts)?;
    let mask = rep.leakage_mask();
    let track_leakage = rep.has_oscillators();
    let prop = Propagator::new(h, hbar, opts.evolve)?;
    let n = times.len();
    let mut trace = QuantumnessTrace {
        spec: spec.clone(),
        initial: initial.clone(),
        measure,
        options: *opts,
        hbar,
        dim: rep.dim_hilbert,
        dense: prop.is_dense(),
        family_minimum: minimum,
        times: Vec::with_capacity(n),
        delta_g: Vec::with_capacity(n),
        leakage: Vec::with_capacity(n),
        norm_drift: Vec::with_capacity(n),
        energy_drift: Vec::with_capacity(n),
    };
    prop.run(coherent.state.amplitudes(), times, |info, psi| {
        let leak: f64 = if track_leakage {
            mask.iter().zip(psi.iter()).filter(|(m, _)| **m).map(|(_, z)| z.norm_sqr()).sum()
        } else {
            0.0
        };
        if leak > opts.leakage_threshold {
            return Err(Error::Leakage { leakage: leak, threshold: opts.leakage_threshold });
        }
        trace.times.push(info.t);
        trace.delta_g.push(probe.evaluate_raw(psi.as_slice()));
        trace.leakage.push(leak);
        trace.norm_drift.push(info.norm_drift);
        trace.energy_drift.push(info.energy_drift);
        Ok(())
    })?;
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdyn::uniform_grid;
    use crate::states::CoherentFamily;

    #[test]
    fn uncoupled_spins_stay_coherent() {
        let spec = HamiltonianSpec::SpinPair { omega: 1.0, mu_x: 0.0, mu_z: 0.0, j: 0.5 };
        let p = CoherentPoint::new(vec![0.4, -0.2, 0.3, 0.6], 1.0, CoherentFamily::SpinStereo).unwrap();
        let tr = quantumness_trace(&spec, &p, &uniform_grid(10.0, 201)).unwrap();
        assert!(tr.excursion() < 1e-12);
        assert!((tr.delta_g[0] - 1.0).abs() < 1e-12);
        tr.check_floor(1e-8).unwrap();
    }

    #[test]
    fn hbar_mismatch_rejected() {
        let spec = HamiltonianSpec::OscillatorNN { hbar: 0.5, n_max: 16 };
        let p = CoherentPoint::new(vec![0.1, 0.0, 0.1, 0.0], 1.0, CoherentFamily::OscillatorGlauber).unwrap();
        assert!(quantumness_trace(&spec, &p, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn csv_and_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let spec = HamiltonianSpec::SpinPair { omega: 1.0, mu_x: 1.0, mu_z: 0.0, j: 0.5 };
        let p = CoherentPoint::origin(2, 1.0, CoherentFamily::SpinStereo).unwrap();
        let tr = quantumness_trace(&spec, &p, &uniform_grid(1.0, 5)).unwrap();
        tr.write(dir.path(), "fig", Some(7)).unwrap();
        let csv = fs::read_to_string(dir.path().join("fig.csv")).unwrap();
        assert!(csv.starts_with("t,delta_g,leakage,norm_drift,energy_drift\n"));
        assert_eq!(csv.lines().count(), 6);
        let side: TraceSidecar = serde_json::from_str(&fs::read_to_string(dir.path().join("fig.json")).unwrap()).unwrap();
        assert_eq!(side.seed, Some(7));
        assert_eq!(side.schema, TRACE_SCHEMA);
    }
}
