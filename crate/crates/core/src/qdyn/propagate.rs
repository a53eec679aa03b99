use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, HermitianEigen, Krylov, Operator};
use crate::states::QuantumState;

/// Largest dimension propagated through a full eigendecomposition.
pub const DENSE_LIMIT: usize = 2000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// dense up to [`DENSE_LIMIT`], Krylov above
    #[default]
    Auto,
    Dense,
    Krylov,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveOptions {
    pub method: Method,
    pub norm_tolerance: f64,
    /// bound on |⟨H⟩(t) − ⟨H⟩(0)| / max(|⟨H⟩(0)|, 1)
    pub energy_tolerance: f64,
    /// local error target of a Krylov substep
    pub krylov_tolerance: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { method: Method::Auto, norm_tolerance: 1e-9, energy_tolerance: 1e-8, krylov_tolerance: 1e-10 }
    }
}

enum Engine<'a> {
    Dense(HermitianEigen),
    Krylov(Krylov<'a>),
}

/// `ψ(t) = exp(−iHt/ħ)ψ₀` on an ascending time grid.
pub struct Propagator<'a> {
    h: &'a Operator,
    hbar: f64,
    engine: Engine<'a>,
    opts: EvolveOptions,
}

/// Per-sample diagnostics from [`Propagator::run`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepInfo {
    pub index: usize,
    pub t: f64,
    pub norm_drift: f64,
    pub energy_drift: f64,
}

pub fn check_time_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    if times[0] != 0.0 {
        return Err(Error::InvalidArgument(format!("time grid must start at 0, starts at {}", times[0])));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("time grid must be strictly ascending and finite".into()));
    }
    Ok(())
}

/// `n` equally spaced samples on [0, t_end].
pub fn uniform_grid(t_end: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![0.0];
    }
    (0..n).map(|k| t_end * k as f64 / (n - 1) as f64).collect()
}

impl<'a> Propagator<'a> {
    pub fn new(h: &'a Operator, hbar: f64, opts: EvolveOptions) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::DimensionMismatch { expected: h.nrows(), found: h.ncols() });
        }
        if !(hbar > 0.0) {
            return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
        }
        let defect = h.hermiticity_defect();
        if defect > 1e-12 * h.max_abs().max(1.0) {
            return Err(Error::NotHermitian(defect));
        }
        let dense = match opts.method {
            Method::Auto => h.nrows() <= DENSE_LIMIT,
            Method::Dense => true,
            Method::Krylov => false,
        };
        let engine = if dense {
            Engine::Dense(eigh(h))
        } else {
            let mut k = Krylov::new(h);
            k.tolerance = opts.krylov_tolerance;
            Engine::Krylov(k)
        };
        Ok(Propagator { h, hbar, engine, opts })
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.engine, Engine::Dense(_))
    }

    /// Eigenvalues, when the dense engine is in use.
    pub fn spectrum(&self) -> Option<&[f64]> {
        match &self.engine {
            Engine::Dense(e) => Some(&e.values),
            Engine::Krylov(_) => None,
        }
    }

    /// Calls `visit` with the state at every grid time. Norm and energy are
    /// monitored and a breach of the configured tolerances aborts the run.
    pub fn run<F>(&self, psi0: &DVector<Complex64>, times: &[f64], mut visit: F) -> Result<()>
    where
        F: FnMut(StepInfo, &DVector<Complex64>) -> Result<()>,
    {
        check_time_grid(times)?;
        if psi0.len() != self.h.nrows() {
            return Err(Error::DimensionMismatch { expected: self.h.nrows(), found: psi0.len() });
        }
        let norm0 = psi0.norm();
        let e0 = self.h.expectation(psi0.as_slice()).re;
        let scale = e0.abs().max(1.0);
        let coeffs = match &self.engine {
            Engine::Dense(e) => Some(e.project(psi0)),
            Engine::Krylov(_) => None,
        };
        let mut current = psi0.clone();
        let mut last_t = 0.0;
        for (index, &t) in times.iter().enumerate() {
            let psi = match &self.engine {
                Engine::Dense(e) => {
                    if t == 0.0 {
                        psi0.clone()
                    } else {
                        e.evolve_coeffs(coeffs.as_ref().unwrap(), t, self.hbar)
                    }
                }
                Engine::Krylov(k) => {
                    if t > last_t {
                        current = k.propagate(&current, t - last_t, self.hbar)?;
                    }
                    current.clone()
                }
            };
            last_t = t;
            let norm_drift = (psi.norm() - norm0).abs();
            let energy_drift = (self.h.expectation(psi.as_slice()).re - e0).abs() / scale;
            if norm_drift > self.opts.norm_tolerance {
                return Err(Error::NormDrift { drift: norm_drift, tolerance: self.opts.norm_tolerance });
            }
            if energy_drift > self.opts.energy_tolerance {
                return Err(Error::EnergyDrift { drift: energy_drift, tolerance: self.opts.energy_tolerance });
            }
            visit(StepInfo { index, t, norm_drift, energy_drift }, &psi)?;
        }
        Ok(())
    }
}

/// States at every grid time.
pub fn evolve(h: &Operator, psi0: &QuantumState, times: &[f64], hbar: f64) -> Result<Vec<QuantumState>> {
    evolve_with(h, psi0, times, hbar, EvolveOptions::default())
}

pub fn evolve_with(
    h: &Operator,
    psi0: &QuantumState,
    times: &[f64],
    hbar: f64,
    opts: EvolveOptions,
) -> Result<Vec<QuantumState>> {
    let prop = Propagator::new(h, hbar, opts)?;
    let mut out = Vec::with_capacity(times.len());
    prop.run(psi0.amplitudes(), times, |_, psi| {
        out.push(QuantumState::from_parts_unchecked(psi.clone(), psi0.factors().to_vec()));
        Ok(())
    })?;
    Ok(out)
}

/// max over grid times t ≥ `t_min` of |⟨ψ₀|ψ(t)⟩|.
pub fn recurrence_fidelity(h: &Operator, psi0: &QuantumState, times: &[f64], t_min: f64, hbar: f64) -> Result<f64> {
    let prop = Propagator::new(h, hbar, EvolveOptions::default())?;
    let mut best: f64 = 0.0;
    prop.run(psi0.amplitudes(), times, |info, psi| {
        if info.t >= t_min {
            best = best.max(psi0.amplitudes().dotc(psi).norm());
        }
        Ok(())
    })?;
    Ok(best)
}

/// Ratios E_k / E_1 of spectral gaps above the ground state, for inspecting
/// rational dependence of frequencies. No integer-relation test is attempted.
pub fn gap_ratios(spectrum: &[f64]) -> Vec<f64> {
    if spectrum.len() < 2 {
        return Vec::new();
    }
    let gaps: Vec<f64> = spectrum.iter().skip(1).map(|e| e - spectrum[0]).collect();
    let base = gaps.iter().copied().find(|g| g.abs() > 1e-12).unwrap_or(1.0);
    gaps.iter().map(|g| g / base).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_su2_rep;

    #[test]
    fn identity_at_zero_and_stationary_states() {
        let rep = build_su2_rep(1.0).unwrap();
        let h = Operator::diagonal(&[0.3, -1.0, 2.0]);
        let psi0 = QuantumState::basis(1, &rep).unwrap();
        let states = evolve(&h, &psi0, &uniform_grid(5.0, 11), 1.0).unwrap();
        assert_eq!(states[0].amplitudes(), psi0.amplitudes());
        for s in &states {
            assert!((s.amplitudes()[1].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn dense_and_krylov_agree() {
        let rep = build_su2_rep(3.0).unwrap();
        let h = rep.require("Jx").unwrap().add(&rep.require("Jz").unwrap().pow(2).unwrap()).unwrap();
        let psi0 = QuantumState::basis(0, &rep).unwrap();
        let times = uniform_grid(3.0, 7);
        let a = evolve_with(&h, &psi0, &times, 1.0, EvolveOptions { method: Method::Dense, ..Default::default() }).unwrap();
        let b = evolve_with(&h, &psi0, &times, 1.0, EvolveOptions { method: Method::Krylov, ..Default::default() }).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.amplitudes() - y.amplitudes()).norm() < 1e-9);
        }
    }

    #[test]
    fn grid_must_start_at_zero() {
        assert!(check_time_grid(&[0.1, 0.2]).is_err());
        assert!(check_time_grid(&[0.0, 0.2, 0.2]).is_err());
        assert!(check_time_grid(&[0.0, 0.5]).is_ok());
    }

    #[test]
    fn hbar_rescales_time() {
        let rep = build_su2_rep(0.5).unwrap();
        let h = rep.require("Jx").unwrap().clone();
        let psi0 = QuantumState::basis(0, &rep).unwrap();
        let a = evolve(&h, &psi0, &[0.0, 1.0], 1.0).unwrap();
        let b = evolve(&h, &psi0, &[0.0, 0.5], 0.5).unwrap();
        assert!((a[1].amplitudes() - b[1].amplitudes()).norm() < 1e-14);
    }
}
