//! Fixed-step two-stage Gauss-Legendre collocation (order 4, symplectic).

use super::dop853::Rhs;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussLegendre {
    pub dt: f64,
    /// convergence tolerance of the stage fixed-point iteration
    pub tol: f64,
    pub max_iter: usize,
}

const SQRT3_6: f64 = 0.288_675_134_594_812_9;

impl GaussLegendre {
    pub fn new(dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidArgument(format!("step must be positive, got {dt}")));
        }
        Ok(GaussLegendre { dt, tol: 1e-15, max_iter: 100 })
    }

    /// One step of size `h` from (t, y).
    pub fn step<F: Rhs>(&self, f: &mut F, t: f64, y: &[f64], h: f64) -> Result<Vec<f64>> {
        let n = y.len();
        let a = [[0.25, 0.25 - SQRT3_6], [0.25 + SQRT3_6, 0.25]];
        let c = [0.5 - SQRT3_6, 0.5 + SQRT3_6];
        let mut k = [vec![0.0; n], vec![0.0; n]];
        f.eval(t, y, &mut k[0])?;
        k[1] = k[0].clone();
        let mut stage = vec![0.0; n];
        let mut next = [vec![0.0; n], vec![0.0; n]];
        for iter in 0..self.max_iter {
            let mut delta: f64 = 0.0;
            for s in 0..2 {
                for i in 0..n {
                    stage[i] = y[i] + h * (a[s][0] * k[0][i] + a[s][1] * k[1][i]);
                }
                f.eval(t + c[s] * h, &stage, &mut next[s])?;
            }
            for s in 0..2 {
                for i in 0..n {
                    let scale = 1.0 + k[s][i].abs();
                    delta = delta.max((next[s][i] - k[s][i]).abs() / scale);
                }
                k[s].clone_from(&next[s]);
            }
            if delta < self.tol {
                break;
            }
            if iter + 1 == self.max_iter && delta > 1e3 * self.tol {
                return Err(Error::StepCollapse { t, step: h });
            }
        }
        Ok((0..n).map(|i| y[i] + h * 0.5 * (k[0][i] + k[1][i])).collect())
    }

    /// Integrates from t0 to t_end, calling `visit` after every step.
    pub fn integrate<F, V>(&self, mut f: F, t0: f64, y0: &[f64], t_end: f64, mut visit: V) -> Result<Vec<f64>>
    where
        F: Rhs,
        V: FnMut(f64, &[f64]) -> Result<bool>,
    {
        let mut t = t0;
        let mut y = y0.to_vec();
        let steps = ((t_end - t0) / self.dt).ceil().max(0.0) as usize;
        for k in 0..steps {
            let t_next = if k + 1 == steps { t_end } else { t0 + (k + 1) as f64 * self.dt };
            y = self.step(&mut f, t, &y, t_next - t)?;
            t = t_next;
            if !visit(t, &y)? {
                break;
            }
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_energy_bounded() {
        let f = |_t: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
            dy[0] = y[1];
            dy[1] = -y[0];
            Ok(())
        };
        let gl = GaussLegendre::new(0.1).unwrap();
        let mut worst: f64 = 0.0;
        gl.integrate(f, 0.0, &[1.0, 0.0], 1000.0, |_, y| {
            worst = worst.max((0.5 * (y[0] * y[0] + y[1] * y[1]) - 0.5).abs());
            Ok(true)
        })
        .unwrap();
        // quadratic invariants are preserved exactly by Gauss collocation
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn fourth_order() {
        let f = |_t: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
            dy[0] = y[1];
            dy[1] = -y[0].sin();
            Ok(())
        };
        let run = |h: f64| GaussLegendre::new(h).unwrap().integrate(f, 0.0, &[1.0, 0.0], 4.0, |_, _| Ok(true)).unwrap();
        let fine = run(0.005);
        let e1 = (run(0.2)[0] - fine[0]).abs();
        let e2 = (run(0.1)[0] - fine[0]).abs();
        let ratio = e1 / e2;
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
    }
}
