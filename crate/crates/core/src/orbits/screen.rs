//! Integrability screens over grids of initial conditions on an energy shell.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{lyapunov_max, ChaosReport, Classification, LyapunovOptions, PhaseSpaceHamiltonian};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScreenSummary {
    pub total: usize,
    pub chaotic: usize,
    pub regular: usize,
    pub escaped: usize,
    pub inconclusive: usize,
    pub chaotic_fraction: f64,
    /// No chaotic orbit found at this horizon (necessary, not sufficient).
    pub screened_integrable: bool,
    pub reports: Vec<ChaosReport>,
}

/// Extent of the energy-allowed segment through the origin along coordinate
/// `k`, scanning outward in steps of `step` until H exceeds `energy` or the
/// chart ends.
fn allowed_extent<H: PhaseSpaceHamiltonian + ?Sized>(h: &H, energy: f64, k: usize, sign: f64, step: f64) -> f64 {
    let mut z = vec![0.0; 2 * h.dof()];
    let mut last = 0.0;
    for i in 1..100_000 {
        let x = sign * step * i as f64;
        z[k] = x;
        match h.energy(&z) {
            Ok(e) if e <= energy => last = x,
            _ => break,
        }
    }
    last
}

/// Initial conditions on the shell H = `energy` of a two-degree-of-freedom
/// system: an n×n grid of cell centres over the allowed (q2, p2) box with
/// q1 = 0 and p1 ≥ 0 solved by bisection. Cells off the shell are skipped.
pub fn energy_shell_grid<H: PhaseSpaceHamiltonian + ?Sized>(h: &H, energy: f64, n: usize) -> Result<Vec<Vec<f64>>> {
    if h.dof() != 2 {
        return Err(Error::InvalidArgument("energy_shell_grid needs two degrees of freedom".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let origin = h.energy(&[0.0; 4])?;
    if energy < origin {
        return Err(Error::InvalidArgument(format!("energy {energy} below the origin value {origin}")));
    }
    let step = 1e-4;
    let (q_lo, q_hi) = (allowed_extent(h, energy, 1, -1.0, step), allowed_extent(h, energy, 1, 1.0, step));
    let (p_lo, p_hi) = (allowed_extent(h, energy, 3, -1.0, step), allowed_extent(h, energy, 3, 1.0, step));
    let mut grid = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let q2 = q_lo + (i as f64 + 0.5) * (q_hi - q_lo) / n as f64;
            let p2 = p_lo + (j as f64 + 0.5) * (p_hi - p_lo) / n as f64;
            if let Some(p1) = solve_p1(h, energy, q2, p2) {
                grid.push(vec![0.0, q2, p1, p2]);
            }
        }
    }
    Ok(grid)
}

fn solve_p1<H: PhaseSpaceHamiltonian + ?Sized>(h: &H, energy: f64, q2: f64, p2: f64) -> Option<f64> {
    let f = |p1: f64| h.energy(&[0.0, q2, p1, p2]).ok().map(|e| e - energy);
    if f(0.0)? > 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (0.0, 0.05);
    loop {
        match f(hi) {
            Some(v) if v > 0.0 => break,
            Some(_) => {
                lo = hi;
                hi *= 1.5;
                if hi > 1e3 {
                    return None;
                }
            }
            None => return None,
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(lo)
}

/// Classifies every grid point in parallel. Per-orbit failures count as
/// Inconclusive with the error recorded in the report note.
pub fn integrability_screen<H: PhaseSpaceHamiltonian + ?Sized>(
    h: &H,
    grid: &[Vec<f64>],
    opts: &LyapunovOptions,
) -> ScreenSummary {
    let reports: Vec<ChaosReport> = grid
        .par_iter()
        .map(|z0| {
            lyapunov_max(h, z0, opts).unwrap_or_else(|e| ChaosReport {
                lambda_max: f64::NAN,
                lambda_half: f64::NAN,
                renorm_interval: opts.renorm_interval,
                horizon: opts.horizon,
                threshold: opts.threshold(),
                trend_ratio: opts.trend_ratio,
                classification: Classification::Inconclusive,
                z0: z0.clone(),
                d0: opts.d0,
                energy_drift: f64::NAN,
                t_reached: 0.0,
                note: Some(e.to_string()),
                convergence: Vec::new(),
                hamiltonian: h.describe(),
            })
        })
        .collect();
    let count = |c: Classification| reports.iter().filter(|r| r.classification == c).count();
    let chaotic = count(Classification::Chaotic);
    let total = reports.len();
    ScreenSummary {
        total,
        chaotic,
        regular: count(Classification::Regular),
        escaped: count(Classification::Escaped),
        inconclusive: count(Classification::Inconclusive),
        chaotic_fraction: if total == 0 { 0.0 } else { chaotic as f64 / total as f64 },
        screened_integrable: chaotic == 0,
        reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::tests::Harmonic;

    #[test]
    fn shell_grid_points_have_the_energy() {
        let h = Harmonic(vec![1.0, 1.0]);
        let grid = energy_shell_grid(&h, 0.125, 8).unwrap();
        assert!(grid.len() > 30 && grid.len() <= 64);
        for z in &grid {
            assert!((h.energy(z).unwrap() - 0.125).abs() < 1e-12);
            assert!(z[2] >= 0.0 && z[0] == 0.0);
        }
    }

    #[test]
    fn harmonic_screen_has_no_chaos() {
        let h = Harmonic(vec![1.0, 1.3]);
        let grid = energy_shell_grid(&h, 0.1, 3).unwrap();
        let opts = LyapunovOptions { horizon: 300.0, ..Default::default() };
        let s = integrability_screen(&h, &grid, &opts);
        assert_eq!(s.total, grid.len());
        assert!(s.screened_integrable);
        assert_eq!(s.regular, s.total);
    }
}
