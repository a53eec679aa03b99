//! Classical Hamiltonian flows: integration with conservation monitoring,
//! Lyapunov exponents, Poincaré sections and integrability screens.
//!
//! Phase-space points are laid out as `z = [q1..qn, p1..pn]`.

pub mod dop853;
pub mod io;
pub mod lyapunov;
pub mod screen;
pub mod section;
pub mod symplectic;
mod tableau;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dop853::{solve_at, Dop853, Dop853Options, Rhs};
pub use io::{write_chaos_report, write_orbit_csv, write_section_csv};
pub use lyapunov::{lyapunov_max, ChaosReport, Classification, LyapunovOptions};
pub use screen::{energy_shell_grid, integrability_screen, ScreenSummary};
pub use section::{poincare_section, Crossing, Section, SectionPlane};
pub use symplectic::GaussLegendre;

/// Default relative energy-drift bound for [`integrate`].
pub const DEFAULT_DRIFT_TOLERANCE: f64 = 1e-9;

/// A smooth Hamiltonian on a 2n-dimensional phase space.
pub trait PhaseSpaceHamiltonian: Sync {
    /// Number of degrees of freedom n.
    fn dof(&self) -> usize;

    fn energy(&self, z: &[f64]) -> Result<f64>;

    /// Writes `[∂H/∂q.., ∂H/∂p..]` into `grad`.
    fn gradient(&self, z: &[f64], grad: &mut [f64]) -> Result<()>;

    /// Orbits leaving this radius count as escaped.
    fn escape_radius(&self) -> Option<f64> {
        None
    }

    /// JSON description used for provenance in reports.
    fn describe(&self) -> serde_json::Value {
        serde_json::Value::Null
    }
}

/// Hamilton's equations: q̇ = ∂H/∂p, ṗ = −∂H/∂q.
pub fn hamilton_rhs<H: PhaseSpaceHamiltonian + ?Sized>(h: &H, z: &[f64], dz: &mut [f64]) -> Result<()> {
    let n = h.dof();
    h.gradient(z, dz)?;
    for i in 0..n {
        let dq = dz[i];
        dz[i] = dz[n + i];
        dz[n + i] = -dq;
    }
    Ok(())
}

/// Poisson bracket {f, g} from the two gradients.
pub fn poisson_bracket(grad_f: &[f64], grad_g: &[f64]) -> f64 {
    let n = grad_f.len() / 2;
    (0..n).map(|i| grad_f[i] * grad_g[n + i] - grad_f[n + i] * grad_g[i]).sum()
}

/// {H, q_i² + p_i²} at `z`.
pub fn action_bracket<H: PhaseSpaceHamiltonian + ?Sized>(h: &H, z: &[f64], i: usize) -> Result<f64> {
    let n = h.dof();
    let mut gh = vec![0.0; 2 * n];
    h.gradient(z, &mut gh)?;
    let mut ga = vec![0.0; 2 * n];
    ga[i] = 2.0 * z[i];
    ga[n + i] = 2.0 * z[n + i];
    Ok(poisson_bracket(&gh, &ga))
}

/// Actions q_i² + p_i².
pub fn actions(z: &[f64]) -> Vec<f64> {
    let n = z.len() / 2;
    (0..n).map(|i| z[i] * z[i] + z[n + i] * z[n + i]).collect()
}

/// Largest relative error of the analytic gradient against central
/// differences with step `eps`.
pub fn gradient_check<H: PhaseSpaceHamiltonian + ?Sized>(h: &H, z: &[f64], eps: f64) -> Result<f64> {
    let mut g = vec![0.0; z.len()];
    h.gradient(z, &mut g)?;
    let scale = g.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let mut worst: f64 = 0.0;
    let mut zp = z.to_vec();
    for k in 0..z.len() {
        zp[k] = z[k] + eps;
        let ep = h.energy(&zp)?;
        zp[k] = z[k] - eps;
        let em = h.energy(&zp)?;
        zp[k] = z[k];
        let fd = (ep - em) / (2.0 * eps);
        worst = worst.max((fd - g[k]).abs() / scale);
    }
    Ok(worst)
}

/// How time steps are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DtPolicy {
    /// DOP853 with the given tolerances.
    Adaptive { rtol: f64, atol: f64 },
    /// Fixed-step Gauss-Legendre; samples land on multiples of `dt`.
    Symplectic { dt: f64 },
}

impl Default for DtPolicy {
    fn default() -> Self {
        DtPolicy::Adaptive { rtol: 1e-12, atol: 1e-12 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegrateOptions {
    pub policy: DtPolicy,
    /// Spacing of recorded samples.
    pub sample_dt: f64,
    pub drift_tolerance: f64,
    /// Overrides the Hamiltonian's own escape radius.
    pub escape_radius: Option<f64>,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            policy: DtPolicy::default(),
            sample_dt: 0.1,
            drift_tolerance: DEFAULT_DRIFT_TOLERANCE,
            escape_radius: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub energies: Vec<f64>,
    /// max |E(t) − E(0)| / max(1, |E(0)|) over the samples
    pub energy_drift: f64,
    pub escaped: bool,
    pub hamiltonian: serde_json::Value,
}

impl OrbitRecord {
    pub fn dof(&self) -> usize {
        self.points.first().map_or(0, |z| z.len() / 2)
    }

    pub fn last(&self) -> Option<&[f64]> {
        self.points.last().map(Vec::as_slice)
    }

    /// Largest deviation of each action q_i² + p_i² from its initial value.
    pub fn action_drift(&self) -> Vec<f64> {
        let Some(first) = self.points.first() else { return Vec::new() };
        let a0 = actions(first);
        let mut worst = vec![0.0f64; a0.len()];
        for z in &self.points {
            for (w, (a, b)) in worst.iter_mut().zip(actions(z).iter().zip(&a0)) {
                *w = w.max((a - b).abs());
            }
        }
        worst
    }

    /// Errors if the orbit escaped.
    pub fn ensure_bounded(&self) -> Result<&Self> {
        if self.escaped {
            let t = self.times.last().copied().unwrap_or(0.0);
            return Err(Error::Domain(format!("orbit escaped before t = {t}")));
        }
        Ok(self)
    }
}

fn norm(z: &[f64]) -> f64 {
    z.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn relative_drift(e: f64, e0: f64) -> f64 {
    (e - e0).abs() / e0.abs().max(1.0)
}

/// Integrates Hamilton's equations from `z0` over [0, t_end], sampling every
/// `sample_dt`. Escape stops the run with `escaped = true`; a drift above
/// tolerance on a bounded orbit is an error.
pub fn integrate<H: PhaseSpaceHamiltonian + ?Sized>(
    h: &H,
    z0: &[f64],
    t_end: f64,
    opts: &IntegrateOptions,
) -> Result<OrbitRecord> {
    let n = h.dof();
    if z0.len() != 2 * n {
        return Err(Error::DimensionMismatch { expected: 2 * n, found: z0.len() });
    }
    if !(t_end >= 0.0) || !(opts.sample_dt > 0.0) {
        return Err(Error::InvalidArgument("t_end and sample_dt must be positive".into()));
    }
    let e0 = h.energy(z0)?;
    let radius = opts.escape_radius.or_else(|| h.escape_radius()).unwrap_or(f64::INFINITY);
    let mut rec = OrbitRecord {
        times: vec![0.0],
        points: vec![z0.to_vec()],
        energies: vec![e0],
        energy_drift: 0.0,
        escaped: norm(z0) > radius,
        hamiltonian: h.describe(),
    };
    if rec.escaped {
        return Ok(rec);
    }
    let samples = (t_end / opts.sample_dt).round().max(1.0) as usize;
    let sample_time = |k: usize| if k == samples { t_end } else { k as f64 * t_end / samples as f64 };
    let rhs = |_t: f64, z: &[f64], dz: &mut [f64]| hamilton_rhs(h, z, dz);

    let record = |rec: &mut OrbitRecord, t: f64, z: &[f64]| -> Result<bool> {
        if norm(z) > radius {
            rec.escaped = true;
            rec.times.push(t);
            rec.points.push(z.to_vec());
            rec.energies.push(h.energy(z).unwrap_or(f64::NAN));
            return Ok(false);
        }
        let e = h.energy(z)?;
        rec.energy_drift = rec.energy_drift.max(relative_drift(e, e0));
        rec.times.push(t);
        rec.points.push(z.to_vec());
        rec.energies.push(e);
        Ok(true)
    };

    match opts.policy {
        DtPolicy::Adaptive { rtol, atol } => {
            let dopts = Dop853Options { rtol, atol, ..Dop853Options::default() };
            let mut s = Dop853::new(rhs, 0.0, z0, dopts)?;
            'outer: for k in 1..=samples {
                let target = sample_time(k);
                while s.t < target {
                    s.step(target)?;
                    if norm(&s.y) > radius {
                        let (t, y) = (s.t, s.y.clone());
                        record(&mut rec, t, &y)?;
                        break 'outer;
                    }
                }
                let (t, y) = (s.t, s.y.clone());
                if !record(&mut rec, t, &y)? {
                    break;
                }
            }
        }
        DtPolicy::Symplectic { dt } => {
            let gl = GaussLegendre::new(dt)?;
            let every = (opts.sample_dt / dt).round().max(1.0) as usize;
            let mut count = 0usize;
            let mut outcome = Ok(());
            gl.integrate(rhs, 0.0, z0, t_end, |t, z| {
                count += 1;
                if norm(z) > radius {
                    return record(&mut rec, t, z);
                }
                if count % every == 0 || t >= t_end {
                    match record(&mut rec, t, z) {
                        Ok(go) => return Ok(go),
                        Err(e) => {
                            outcome = Err(e);
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            })?;
            outcome?;
        }
    }
    if !rec.escaped && rec.energy_drift > opts.drift_tolerance {
        return Err(Error::EnergyDrift { drift: rec.energy_drift, tolerance: opts.drift_tolerance });
    }
    Ok(rec)
}
