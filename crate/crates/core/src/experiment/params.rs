//! Per-experiment parameters. Every field has a default; configs override
//! them under `[params]`.

use serde::{Deserialize, Serialize};

use crate::cmodel::SpinModelForm;
use crate::error::{Error, Result};
use crate::qdyn::HamiltonianSpec;

fn config_err(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive and finite, got {x}")))
    }
}

fn at_least(name: &str, n: usize, min: usize) -> Result<()> {
    if n >= min {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be at least {min}, got {n}")))
    }
}

fn check_spec(spec: &HamiltonianSpec) -> Result<()> {
    spec.validate().map_err(config_err)
}

/// Spin-pair couplings (μx, μz).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinCouplings {
    pub mu_x: f64,
    pub mu_z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig1SpinParams {
    pub omega: f64,
    pub j: f64,
    pub symmetric: SpinCouplings,
    pub broken: SpinCouplings,
    /// coherent start (q1, p1, q2, p2)
    pub start: [f64; 4],
    pub t_end: f64,
    pub samples: usize,
    pub constancy_tol: f64,
    pub excursion_min: f64,
}

impl Default for Fig1SpinParams {
    fn default() -> Self {
        Fig1SpinParams {
            omega: 1.0,
            j: 0.5,
            symmetric: SpinCouplings { mu_x: 0.0, mu_z: 1.0 },
            broken: SpinCouplings { mu_x: 1.0, mu_z: 0.0 },
            start: [0.0; 4],
            t_end: 20.0,
            samples: 2001,
            constancy_tol: 1e-8,
            excursion_min: 0.05,
        }
    }
}

impl Fig1SpinParams {
    pub fn spec(&self, c: SpinCouplings) -> HamiltonianSpec {
        HamiltonianSpec::SpinPair { omega: self.omega, mu_x: c.mu_x, mu_z: c.mu_z, j: self.j }
    }

    pub fn validate(&self) -> Result<()> {
        check_spec(&self.spec(self.symmetric))?;
        check_spec(&self.spec(self.broken))?;
        positive("t_end", self.t_end)?;
        at_least("samples", self.samples, 2)?;
        positive("constancy_tol", self.constancy_tol)?;
        positive("excursion_min", self.excursion_min)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig2SpinChaosParams {
    pub omega: f64,
    pub j: f64,
    pub mu_x: f64,
    pub mu_z: f64,
    pub form: SpinModelForm,
    /// energy shell of the scan; midway between the extremes of the shell
    /// family when absent
    pub energy: Option<f64>,
    pub grid: usize,
    pub horizon: f64,
    pub renorm_interval: f64,
    /// length and sampling of the stored orbits
    pub orbit_t_end: f64,
    pub sample_dt: f64,
    /// μz of the symmetric comparison model (μx = 0)
    pub symmetric_mu_z: f64,
    pub action_tol: f64,
}

impl Default for Fig2SpinChaosParams {
    fn default() -> Self {
        Fig2SpinChaosParams {
            omega: 1.0,
            j: 0.5,
            mu_x: 1.0,
            mu_z: 0.0,
            form: SpinModelForm::Expectation,
            energy: None,
            grid: 8,
            horizon: 5000.0,
            renorm_interval: 1.0,
            orbit_t_end: 500.0,
            sample_dt: 0.05,
            symmetric_mu_z: 1.0,
            action_tol: 1e-9,
        }
    }
}

impl Fig2SpinChaosParams {
    pub fn validate(&self) -> Result<()> {
        check_spec(&HamiltonianSpec::SpinPair { omega: self.omega, mu_x: self.mu_x, mu_z: self.mu_z, j: self.j })?;
        at_least("grid", self.grid, 1)?;
        positive("horizon", self.horizon)?;
        positive("renorm_interval", self.renorm_interval)?;
        positive("orbit_t_end", self.orbit_t_end)?;
        positive("sample_dt", self.sample_dt)?;
        positive("action_tol", self.action_tol)?;
        if let Some(e) = self.energy {
            if !e.is_finite() {
                return Err(Error::Config("energy must be finite".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig3OscParams {
    pub hbar: f64,
    pub n_max: usize,
    /// extra Fock levels per mode for the truncation check
    pub n_extra: usize,
    /// (μ1, μ2) of the case without mode coupling
    pub constant_case: [f64; 2],
    pub broken_case: [f64; 2],
    pub start: [f64; 4],
    pub t_end: f64,
    pub samples: usize,
    pub constancy_tol: f64,
    pub truncation_tol: f64,
}

impl Default for Fig3OscParams {
    fn default() -> Self {
        Fig3OscParams {
            hbar: 0.01,
            n_max: 40,
            n_extra: 10,
            constant_case: [0.0, 1.0],
            broken_case: [1.0, 1.0],
            start: [0.1, 0.0, 0.1, 0.0],
            t_end: 10.0,
            samples: 501,
            constancy_tol: 1e-6,
            truncation_tol: 1e-4,
        }
    }
}

impl Fig3OscParams {
    pub fn spec(&self, case: [f64; 2], n_max: usize) -> HamiltonianSpec {
        HamiltonianSpec::OscillatorCubic { mu1: case[0], mu2: case[1], hbar: self.hbar, n_max }
    }

    pub fn validate(&self) -> Result<()> {
        check_spec(&self.spec(self.constant_case, self.n_max))?;
        check_spec(&self.spec(self.broken_case, self.n_max))?;
        check_spec(&self.spec(self.constant_case, self.n_max + self.n_extra))?;
        at_least("n_extra", self.n_extra, 1)?;
        positive("t_end", self.t_end)?;
        at_least("samples", self.samples, 2)?;
        positive("constancy_tol", self.constancy_tol)?;
        positive("truncation_tol", self.truncation_tol)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig4OscOrbitsParams {
    /// (μ1, μ2) pairs of the Henon-Heiles limit
    pub cases: Vec<[f64; 2]>,
    /// shell energy as a fraction of the escape energy
    pub energy_fraction: f64,
    pub grid: usize,
    pub horizon: f64,
    pub renorm_interval: f64,
    pub orbit_t_end: f64,
    pub sample_dt: f64,
}

impl Default for Fig4OscOrbitsParams {
    fn default() -> Self {
        Fig4OscOrbitsParams {
            cases: vec![[1.0, 1.0], [0.0, 1.0], [-1.0, 1.0], [-1.0 / 6.0, 1.0]],
            energy_fraction: 0.75,
            grid: 8,
            horizon: 5000.0,
            renorm_interval: 1.0,
            orbit_t_end: 500.0,
            sample_dt: 0.05,
        }
    }
}

impl Fig4OscOrbitsParams {
    pub fn validate(&self) -> Result<()> {
        if self.cases.is_empty() {
            return Err(Error::Config("cases must not be empty".into()));
        }
        if self.cases.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Config("couplings must be finite".into()));
        }
        if !(self.energy_fraction > 0.0 && self.energy_fraction < 1.0) {
            return Err(Error::Config(format!("energy_fraction must lie in (0, 1), got {}", self.energy_fraction)));
        }
        at_least("grid", self.grid, 1)?;
        positive("horizon", self.horizon)?;
        positive("renorm_interval", self.renorm_interval)?;
        positive("orbit_t_end", self.orbit_t_end)?;
        positive("sample_dt", self.sample_dt)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig5BilinearParams {
    pub hbar: f64,
    pub n_max: usize,
    pub lambda: f64,
    pub start: [f64; 4],
    pub t_end: f64,
    pub samples: usize,
    pub constancy_tol: f64,
    /// required excursion of the bilinear case in units of `constancy_tol`
    pub excursion_factor: f64,
}

impl Default for Fig5BilinearParams {
    fn default() -> Self {
        Fig5BilinearParams {
            hbar: 1.0,
            n_max: 40,
            lambda: 0.5,
            start: [0.0; 4],
            t_end: 10.0,
            samples: 501,
            constancy_tol: 1e-6,
            excursion_factor: 10.0,
        }
    }
}

impl Fig5BilinearParams {
    pub fn nn_spec(&self) -> HamiltonianSpec {
        HamiltonianSpec::OscillatorNN { hbar: self.hbar, n_max: self.n_max }
    }

    pub fn bilinear_spec(&self) -> HamiltonianSpec {
        HamiltonianSpec::OscillatorBilinear { lambda: self.lambda, hbar: self.hbar, n_max: self.n_max }
    }

    pub fn validate(&self) -> Result<()> {
        check_spec(&self.nn_spec())?;
        check_spec(&self.bilinear_spec())?;
        positive("t_end", self.t_end)?;
        at_least("samples", self.samples, 2)?;
        positive("constancy_tol", self.constancy_tol)?;
        positive("excursion_factor", self.excursion_factor)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig6LipkinParams {
    pub n: usize,
    pub omega: [f64; 3],
    pub symmetric_mu: f64,
    pub broken_mu: f64,
    /// (q1, p1, q2, p2) of the su(3) coherent state
    pub start: [f64; 4],
    pub t_end: f64,
    pub samples: usize,
    pub constancy_tol: f64,
}

impl Default for Fig6LipkinParams {
    fn default() -> Self {
        Fig6LipkinParams {
            n: 10,
            omega: [1.0; 3],
            symmetric_mu: 0.0,
            broken_mu: 1.0 / 6.0,
            start: [0.4, 0.0, 0.3, 0.0],
            t_end: 20.0,
            samples: 2001,
            constancy_tol: 1e-8,
        }
    }
}

impl Fig6LipkinParams {
    pub fn spec(&self, mu: f64) -> HamiltonianSpec {
        HamiltonianSpec::Su3Lipkin { omega: self.omega, mu, n: self.n }
    }

    pub fn validate(&self) -> Result<()> {
        check_spec(&self.spec(self.symmetric_mu))?;
        check_spec(&self.spec(self.broken_mu))?;
        positive("t_end", self.t_end)?;
        at_least("samples", self.samples, 2)?;
        positive("constancy_tol", self.constancy_tol)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConjectureMatrixParams {
    /// ħ of every oscillator row
    pub hbar: f64,
    pub n_max: usize,
    pub spin_j: f64,
    pub bilinear_lambda: f64,
    pub lipkin_n: usize,
    pub t_end: f64,
    pub samples: usize,
    pub constancy_tol: f64,
    pub grid: usize,
    pub horizon: f64,
}

impl Default for ConjectureMatrixParams {
    fn default() -> Self {
        ConjectureMatrixParams {
            hbar: 0.01,
            n_max: 40,
            spin_j: 0.5,
            bilinear_lambda: 0.5,
            lipkin_n: 10,
            t_end: 10.0,
            samples: 501,
            constancy_tol: 1e-6,
            grid: 8,
            horizon: 5000.0,
        }
    }
}

impl ConjectureMatrixParams {
    pub fn validate(&self) -> Result<()> {
        positive("hbar", self.hbar)?;
        check_spec(&HamiltonianSpec::OscillatorCubic { mu1: 1.0, mu2: 1.0, hbar: self.hbar, n_max: self.n_max })?;
        check_spec(&HamiltonianSpec::SpinPair { omega: 1.0, mu_x: 0.0, mu_z: 1.0, j: self.spin_j })?;
        check_spec(&HamiltonianSpec::Su3Lipkin { omega: [1.0; 3], mu: 0.0, n: self.lipkin_n })?;
        positive("t_end", self.t_end)?;
        at_least("samples", self.samples, 2)?;
        positive("constancy_tol", self.constancy_tol)?;
        at_least("grid", self.grid, 1)?;
        positive("horizon", self.horizon)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepParams {
    pub base: HamiltonianSpec,
    /// name of a numeric field of `base`
    pub parameter: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    /// coherent start; the reference state when empty
    pub start: Vec<f64>,
    pub t_end: f64,
    pub samples: usize,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams {
            base: HamiltonianSpec::SpinPair { omega: 1.0, mu_x: 0.0, mu_z: 1.0, j: 0.5 },
            parameter: "mu_x".into(),
            from: 0.0,
            to: 1.0,
            points: 11,
            start: Vec::new(),
            t_end: 20.0,
            samples: 2001,
        }
    }
}

impl SweepParams {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.from];
        }
        (0..self.points).map(|k| self.from + (self.to - self.from) * k as f64 / (self.points - 1) as f64).collect()
    }

    /// `base` with the swept field set to `value`.
    pub fn spec_at(&self, value: f64) -> Result<HamiltonianSpec> {
        let mut v = serde_json::to_value(&self.base)?;
        let obj = v.as_object_mut().ok_or_else(|| Error::Config("base must be a table".into()))?;
        match obj.get(&self.parameter) {
            Some(serde_json::Value::Number(_)) if self.parameter != "family" => {}
            _ => {
                return Err(Error::Config(format!(
                    "`{}` is not a numeric parameter of {}",
                    self.parameter,
                    self.base.family_name()
                )))
            }
        }
        let integral = obj[&self.parameter].is_u64() && value >= 0.0 && value.fract() == 0.0;
        let new = if integral { serde_json::json!(value as u64) } else { serde_json::json!(value) };
        obj.insert(self.parameter.clone(), new);
        serde_json::from_value(v).map_err(|e| Error::Config(format!("{}: {e}", self.parameter)))
    }

    pub fn validate(&self) -> Result<()> {
        if matches!(self.base, HamiltonianSpec::CustomMatrix { .. }) {
            return Err(Error::Config("sweeps need a family with a coherent-state chart".into()));
        }
        at_least("points", self.points, 1)?;
        if !self.from.is_finite() || !self.to.is_finite() {
            return Err(Error::Config("sweep bounds must be finite".into()));
        }
        for v in self.values() {
            check_spec(&self.spec_at(v)?)?;
        }
        positive("t_end", self.t_end)?;
        at_least("samples", self.samples, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_sets_fields() {
        let p = SweepParams::default();
        assert_eq!(p.values().len(), 11);
        match p.spec_at(0.3).unwrap() {
            HamiltonianSpec::SpinPair { mu_x, .. } => assert_eq!(mu_x, 0.3),
            other => panic!("{other:?}"),
        }
        let bad = SweepParams { parameter: "family".into(), ..SweepParams::default() };
        assert!(bad.validate().is_err());
        let bad = SweepParams { parameter: "nope".into(), ..SweepParams::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn integer_fields_reject_fractions() {
        let p = SweepParams {
            base: HamiltonianSpec::OscillatorCubic { mu1: 0.0, mu2: 1.0, hbar: 0.1, n_max: 20 },
            parameter: "n_max".into(),
            from: 20.0,
            to: 21.0,
            points: 3,
            ..SweepParams::default()
        };
        assert!(p.validate().is_err());
    }
}
