//! Adaptive explicit Runge-Kutta integration with the Dormand-Prince 8(5,3)
//! pair, following the error norm and step control of Hairer's DOP853.

use serde::{Deserialize, Serialize};

use super::tableau::{A, B, C, E3, E5, STAGES};
use crate::error::{Error, Result};

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const ERROR_EXPONENT: f64 = -1.0 / 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Dop853Options {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for Dop853Options {
    fn default() -> Self {
        Dop853Options { rtol: 1e-12, atol: 1e-12, max_step: f64::INFINITY, max_steps: 50_000_000 }
    }
}

/// Right-hand side `dy/dt = f(t, y)`; may fail (e.g. leaving a chart).
pub trait Rhs {
    fn eval(&mut self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<()>;
}

impl<F> Rhs for F
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    fn eval(&mut self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        self(t, y, dy)
    }
}

/// Stepper state. `t` and `y` always hold the last accepted point.
pub struct Dop853<F: Rhs> {
    f: F,
    pub t: f64,
    pub y: Vec<f64>,
    f0: Vec<f64>,
    h: f64,
    opts: Dop853Options,
    k: Vec<Vec<f64>>,
    y_new: Vec<f64>,
    f_new: Vec<f64>,
    tmp: Vec<f64>,
    steps: usize,
    rejected: usize,
}

fn rms(v: impl Iterator<Item = f64>, n: usize) -> f64 {
    (v.map(|x| x * x).sum::<f64>() / n as f64).sqrt()
}

impl<F: Rhs> Dop853<F> {
    pub fn new(mut f: F, t0: f64, y0: &[f64], opts: Dop853Options) -> Result<Self> {
        let n = y0.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty state".into()));
        }
        if !(opts.rtol > 0.0) || !(opts.atol >= 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        let mut f0 = vec![0.0; n];
        f.eval(t0, y0, &mut f0)?;
        let mut s = Dop853 {
            f,
            t: t0,
            y: y0.to_vec(),
            f0,
            h: 0.0,
            opts,
            k: vec![vec![0.0; n]; STAGES],
            y_new: vec![0.0; n],
            f_new: vec![0.0; n],
            tmp: vec![0.0; n],
            steps: 0,
            rejected: 0,
        };
        s.h = s.initial_step()?;
        Ok(s)
    }

    pub fn accepted_steps(&self) -> usize {
        self.steps
    }

    pub fn rejected_steps(&self) -> usize {
        self.rejected
    }

    /// Derivative at the current point.
    pub fn derivative(&self) -> &[f64] {
        &self.f0
    }

    fn initial_step(&mut self) -> Result<f64> {
        let n = self.y.len();
        let scale: Vec<f64> = self.y.iter().map(|y| self.opts.atol + y.abs() * self.opts.rtol).collect();
        let d0 = rms(self.y.iter().zip(&scale).map(|(y, s)| y / s), n);
        let d1 = rms(self.f0.iter().zip(&scale).map(|(f, s)| f / s), n);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        for i in 0..n {
            self.tmp[i] = self.y[i] + h0 * self.f0[i];
        }
        let mut f1 = vec![0.0; n];
        self.f.eval(self.t + h0, &self.tmp, &mut f1)?;
        let d2 = rms(f1.iter().zip(&self.f0).zip(&scale).map(|((a, b), s)| (a - b) / s), n) / h0;
        let h1 = if d1 <= 1e-15 && d2 <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(1.0 / 8.0)
        };
        Ok((100.0 * h0).min(h1).min(self.opts.max_step))
    }

    fn attempt(&mut self, h: f64) -> Result<f64> {
        let n = self.y.len();
        self.k[0].copy_from_slice(&self.f0);
        for s in 1..STAGES {
            for i in 0..n {
                let mut acc = 0.0;
                for j in 0..s {
                    acc += A[s][j] * self.k[j][i];
                }
                self.tmp[i] = self.y[i] + h * acc;
            }
            let (_, tail) = self.k.split_at_mut(s);
            self.f.eval(self.t + C[s] * h, &self.tmp, &mut tail[0])?;
        }
        for i in 0..n {
            let mut acc = 0.0;
            for s in 0..STAGES {
                acc += B[s] * self.k[s][i];
            }
            self.y_new[i] = self.y[i] + h * acc;
        }
        self.f.eval(self.t + h, &self.y_new, &mut self.f_new)?;
        let mut e5 = 0.0;
        let mut e3 = 0.0;
        for i in 0..n {
            let scale = self.opts.atol + self.y[i].abs().max(self.y_new[i].abs()) * self.opts.rtol;
            let (mut a5, mut a3) = (0.0, 0.0);
            for s in 0..STAGES {
                a5 += E5[s] * self.k[s][i];
                a3 += E3[s] * self.k[s][i];
            }
            e5 += (a5 / scale).powi(2);
            e3 += (a3 / scale).powi(2);
        }
        if e5 == 0.0 && e3 == 0.0 {
            return Ok(0.0);
        }
        Ok(h.abs() * e5 / ((e5 + 0.01 * e3) * n as f64).sqrt())
    }

    /// Takes one accepted step, never passing `t_limit`.
    pub fn step(&mut self, t_limit: f64) -> Result<()> {
        if !(t_limit > self.t) {
            return Err(Error::InvalidArgument(format!("step limit {t_limit} not ahead of t = {}", self.t)));
        }
        let mut rejected_here = false;
        loop {
            let min_step = 10.0 * f64::EPSILON * self.t.abs().max(1.0);
            let mut h = self.h.min(self.opts.max_step);
            let last = self.t + h >= t_limit;
            if last {
                h = t_limit - self.t;
            }
            if h < min_step && !last {
                return Err(Error::StepCollapse { t: self.t, step: h });
            }
            let err = match self.attempt(h) {
                Ok(e) => e,
                // a failed stage evaluation (chart exit) is treated as a rejection
                Err(Error::Domain(msg)) => {
                    if h < min_step * 10.0 {
                        return Err(Error::Domain(msg));
                    }
                    self.h = h * MIN_FACTOR;
                    self.rejected += 1;
                    rejected_here = true;
                    continue;
                }
                Err(e) => return Err(e),
            };
            if err < 1.0 {
                let mut factor = if err == 0.0 { MAX_FACTOR } else { MAX_FACTOR.min(SAFETY * err.powf(ERROR_EXPONENT)) };
                if rejected_here {
                    factor = factor.min(1.0);
                }
                self.t = if last { t_limit } else { self.t + h };
                std::mem::swap(&mut self.y, &mut self.y_new);
                std::mem::swap(&mut self.f0, &mut self.f_new);
                if !last || factor * h > self.h {
                    self.h = h * factor;
                }
                self.steps += 1;
                if self.steps > self.opts.max_steps {
                    return Err(Error::StepCollapse { t: self.t, step: self.h });
                }
                return Ok(());
            }
            self.h = h * MIN_FACTOR.max(SAFETY * err.powf(ERROR_EXPONENT));
            self.rejected += 1;
            rejected_here = true;
            if self.h < min_step {
                return Err(Error::StepCollapse { t: self.t, step: self.h });
            }
        }
    }

    /// Integrates until exactly `t_target`.
    pub fn advance_to(&mut self, t_target: f64) -> Result<()> {
        while self.t < t_target {
            self.step(t_target)?;
        }
        Ok(())
    }

    /// Restarts from a new state at the current time (e.g. after renormalizing
    /// a deviation vector), keeping the step size.
    pub fn reset_state(&mut self, y: &[f64]) -> Result<()> {
        self.y.copy_from_slice(y);
        self.f.eval(self.t, &self.y, &mut self.f0)
    }
}

/// Samples of `y` at each time in `times` (ascending, first = t0).
pub fn solve_at<F: Rhs>(f: F, y0: &[f64], times: &[f64], opts: Dop853Options) -> Result<Vec<Vec<f64>>> {
    let Some(&t0) = times.first() else { return Ok(Vec::new()) };
    let mut s = Dop853::new(f, t0, y0, opts)?;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        s.advance_to(t)?;
        out.push(s.y.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let f = |_t: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
            dy[0] = -y[0];
            Ok(())
        };
        let out = solve_at(f, &[1.0], &[0.0, 1.0, 5.0], Dop853Options::default()).unwrap();
        assert!((out[1][0] - (-1f64).exp()).abs() < 1e-12);
        assert!((out[2][0] - (-5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn harmonic_period() {
        let f = |_t: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
            dy[0] = y[1];
            dy[1] = -y[0];
            Ok(())
        };
        let tp = 2.0 * std::f64::consts::PI;
        let out = solve_at(f, &[1.0, 0.0], &[0.0, tp, 100.0 * tp], Dop853Options::default()).unwrap();
        assert!((out[1][0] - 1.0).abs() < 1e-10 && out[1][1].abs() < 1e-10);
        assert!((out[2][0] - 1.0).abs() < 1e-9 && out[2][1].abs() < 1e-9);
    }

    #[test]
    fn eighth_order_convergence() {
        // fixed step via max_step with loose tolerances: error ratio ≈ 2^8
        let f = |t: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
            dy[0] = y[0] * t.cos();
            Ok(())
        };
        let exact = (3f64).sin().exp();
        let run = |h: f64| {
            let opts = Dop853Options { rtol: 1.0, atol: 1.0, max_step: h, ..Default::default() };
            (solve_at(f, &[1.0], &[0.0, 3.0], opts).unwrap()[1][0] - exact).abs()
        };
        let ratio = run(0.3) / run(0.15);
        assert!(ratio > 150.0 && ratio < 600.0, "ratio {ratio}");
    }

    #[test]
    fn backward_limit_rejected() {
        let f = |_t: f64, _y: &[f64], dy: &mut [f64]| -> Result<()> {
            dy[0] = 1.0;
            Ok(())
        };
        let mut s = Dop853::new(f, 1.0, &[0.0], Dop853Options::default()).unwrap();
        assert!(s.step(0.5).is_err());
    }
}
