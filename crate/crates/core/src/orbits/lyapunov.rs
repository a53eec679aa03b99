//! Largest Lyapunov exponent by the two-trajectory renormalization method.

use serde::{Deserialize, Serialize};

use super::{hamilton_rhs, relative_drift, Dop853, Dop853Options, PhaseSpaceHamiltonian};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Regular,
    Chaotic,
    Escaped,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LyapunovOptions {
    pub horizon: f64,
    pub renorm_interval: f64,
    /// Initial separation of the shadow trajectory.
    pub d0: f64,
    /// Defaults to 10 / horizon.
    pub threshold: Option<f64>,
    /// λ(T)/λ(T/2) at or above this counts as saturated (not decaying like 1/t).
    pub trend_ratio: f64,
    /// Largest second-half log-growth still counted as polynomial.
    pub growth_bound: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Relative energy drift above which the estimate is Inconclusive.
    pub drift_tolerance: f64,
    /// Record λ(t) every this many renormalizations.
    pub trace_every: usize,
}

impl Default for LyapunovOptions {
    fn default() -> Self {
        LyapunovOptions {
            horizon: 5000.0,
            renorm_interval: 1.0,
            d0: 1e-8,
            threshold: None,
            trend_ratio: 0.75,
            growth_bound: 3.0,
            rtol: 1e-12,
            atol: 1e-12,
            drift_tolerance: 1e-9,
            trace_every: 50,
        }
    }
}

impl LyapunovOptions {
    pub fn threshold(&self) -> f64 {
        self.threshold.unwrap_or(10.0 / self.horizon)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0 && self.renorm_interval > 0.0 && self.renorm_interval <= self.horizon) {
            return Err(Error::InvalidArgument("need 0 < renorm_interval <= horizon".into()));
        }
        if !(self.d0 > 0.0) || !(self.trend_ratio > 0.0) || self.trace_every == 0 {
            return Err(Error::InvalidArgument("d0, trend_ratio and trace_every must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChaosReport {
    pub lambda_max: f64,
    /// Running estimate at half the horizon.
    pub lambda_half: f64,
    pub renorm_interval: f64,
    pub horizon: f64,
    pub threshold: f64,
    pub trend_ratio: f64,
    pub classification: Classification,
    pub z0: Vec<f64>,
    pub d0: f64,
    pub energy_drift: f64,
    /// Time reached (less than the horizon if the orbit escaped or failed).
    pub t_reached: f64,
    pub note: Option<String>,
    /// (t, λ(t)) samples.
    pub convergence: Vec<(f64, f64)>,
    pub hamiltonian: serde_json::Value,
}

impl ChaosReport {
    pub fn is_chaotic(&self) -> bool {
        self.classification == Classification::Chaotic
    }
}

/// Classification rule. Chaotic needs λ(T) above threshold with a saturated
/// running estimate, λ(T)/λ(T/2) ≥ `trend_ratio`. Regular needs λ(T) at or
/// below threshold with sub-exponential separation: the log-growth gained
/// over the second half, λ(T)·T − λ(T/2)·T/2, at most `growth_bound` (≈ ln 2
/// for linear separation, λT/2 for exponential). Anything else is
/// Inconclusive.
pub fn classify(lambda: f64, lambda_half: f64, horizon: f64, threshold: f64, trend_ratio: f64, growth_bound: f64) -> Classification {
    let ratio = if lambda_half > 0.0 { lambda / lambda_half } else { 0.0 };
    let late_growth = lambda * horizon - lambda_half * horizon / 2.0;
    if lambda > threshold && ratio >= trend_ratio {
        Classification::Chaotic
    } else if lambda <= threshold && late_growth <= growth_bound {
        Classification::Regular
    } else {
        Classification::Inconclusive
    }
}

fn norm(z: &[f64]) -> f64 {
    z.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Estimates the largest Lyapunov exponent of the orbit through `z0`.
/// Escape yields an `Escaped` report; leaving a chart domain is an error.
pub fn lyapunov_max<H: PhaseSpaceHamiltonian + ?Sized>(h: &H, z0: &[f64], opts: &LyapunovOptions) -> Result<ChaosReport> {
    opts.validate()?;
    let m = 2 * h.dof();
    if z0.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: z0.len() });
    }
    let e0 = h.energy(z0)?;
    let radius = h.escape_radius().unwrap_or(f64::INFINITY);
    let dir = 1.0 / (m as f64).sqrt();
    let mut y0 = z0.to_vec();
    y0.extend(z0.iter().map(|z| z + opts.d0 * dir));

    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let (a, b) = y.split_at(m);
        let (da, db) = dy.split_at_mut(m);
        hamilton_rhs(h, a, da)?;
        hamilton_rhs(h, b, db)
    };
    let dopts = Dop853Options { rtol: opts.rtol, atol: opts.atol, ..Dop853Options::default() };
    let mut s = Dop853::new(rhs, 0.0, &y0, dopts)?;

    let renorms = (opts.horizon / opts.renorm_interval).round() as usize;
    let half = renorms / 2;
    let mut log_sum = 0.0;
    let mut lambda_half = 0.0;
    let mut drift: f64 = 0.0;
    let mut convergence = Vec::new();
    let mut escaped = false;
    let mut note = None;
    let mut t_reached = 0.0;
    for k in 1..=renorms {
        let target = k as f64 * opts.renorm_interval;
        while s.t < target {
            s.step(target)?;
            if norm(&s.y[..m]) > radius {
                escaped = true;
                break;
            }
        }
        t_reached = s.t;
        if escaped {
            break;
        }
        let e = h.energy(&s.y[..m])?;
        drift = drift.max(relative_drift(e, e0));
        let mut y = s.y.clone();
        let d: Vec<f64> = (0..m).map(|i| y[m + i] - y[i]).collect();
        let len = norm(&d);
        if !(len > 0.0) || !len.is_finite() {
            note = Some(format!("degenerate separation at t = {target}"));
            break;
        }
        log_sum += (len / opts.d0).ln();
        for i in 0..m {
            y[m + i] = y[i] + d[i] * (opts.d0 / len);
        }
        s.reset_state(&y)?;
        let lambda = log_sum / target;
        if k == half {
            lambda_half = lambda;
        }
        if k % opts.trace_every == 0 || k == renorms {
            convergence.push((target, lambda));
        }
    }

    let lambda_max = if t_reached > 0.0 { log_sum / t_reached } else { 0.0 };
    let threshold = opts.threshold();
    let classification = if escaped {
        Classification::Escaped
    } else if note.is_some() {
        Classification::Inconclusive
    } else if drift > opts.drift_tolerance {
        note = Some(format!("energy drift {drift:.2e} above {:.0e}", opts.drift_tolerance));
        Classification::Inconclusive
    } else {
        classify(lambda_max, lambda_half, t_reached, threshold, opts.trend_ratio, opts.growth_bound)
    };
    Ok(ChaosReport {
        lambda_max,
        lambda_half,
        renorm_interval: opts.renorm_interval,
        horizon: opts.horizon,
        threshold,
        trend_ratio: opts.trend_ratio,
        classification,
        z0: z0.to_vec(),
        d0: opts.d0,
        energy_drift: drift,
        t_reached,
        note,
        convergence,
        hamiltonian: h.describe(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::tests::Harmonic;

    #[test]
    fn classification_rule() {
        let c = |l, h| classify(l, h, 5000.0, 0.002, 0.75, 3.0);
        assert_eq!(c(0.05, 0.05), Classification::Chaotic);
        // linear separation: ln(cT)/T
        let lin = |t: f64| (3.0 * t).ln() / t;
        assert_eq!(c(lin(5000.0), lin(2500.0)), Classification::Regular);
        assert_eq!(c(0.0, 0.0), Classification::Regular);
        assert_eq!(c(1e-10, 0.9e-10), Classification::Regular);
        // above threshold but still decaying
        assert_eq!(c(0.003, 0.0055), Classification::Inconclusive);
        // slow exponential growth below threshold
        assert_eq!(c(0.0019, 0.0019), Classification::Inconclusive);
    }

    #[test]
    fn harmonic_is_regular_with_decaying_estimate() {
        let h = Harmonic(vec![1.0, 2f64.sqrt()]);
        let opts = LyapunovOptions { horizon: 400.0, ..Default::default() };
        let r = lyapunov_max(&h, &[0.3, 0.2, 0.1, -0.1], &opts).unwrap();
        assert_eq!(r.classification, Classification::Regular);
        assert!(r.lambda_max * r.horizon < 10.0);
        // linear maps keep the separation bounded: λ ~ C/t
        assert!(r.lambda_max / r.lambda_half < 0.75);
    }

    #[test]
    fn inverted_oscillator_has_unit_exponent() {
        // H = ½p² − ½q² on a huge escape radius: λ = 1
        struct Saddle;
        impl PhaseSpaceHamiltonian for Saddle {
            fn dof(&self) -> usize {
                1
            }
            fn energy(&self, z: &[f64]) -> Result<f64> {
                Ok(0.5 * (z[1] * z[1] - z[0] * z[0]))
            }
            fn gradient(&self, z: &[f64], g: &mut [f64]) -> Result<()> {
                g[0] = -z[0];
                g[1] = z[1];
                Ok(())
            }
        }
        // the stable manifold keeps the orbit at the origin
        let opts = LyapunovOptions { horizon: 20.0, drift_tolerance: 1.0, ..Default::default() };
        let r = lyapunov_max(&Saddle, &[0.0, 0.0], &opts).unwrap();
        assert!((r.lambda_max - 1.0).abs() < 0.05, "{}", r.lambda_max);
        assert_eq!(r.classification, Classification::Chaotic);
    }
}
