use std::fs;
use std::path::Path;

use serde::Serialize;

use super::{Check, Conventions, Report};
use super::params::*;
use crate::cmodel::{henon_heiles_escape_energy, ClassicalHamiltonian};
use crate::error::{Error, Result};
use crate::orbits::section::Direction;
use crate::orbits::{
    energy_shell_grid, integrability_screen, integrate, poincare_section, write_chaos_report, write_orbit_csv,
    write_section_csv, IntegrateOptions, LyapunovOptions, PhaseSpaceHamiltonian, ScreenSummary, SectionPlane,
};
use crate::linalg::Operator;
use crate::qdyn::{
    build_hamiltonian, quantumness_trace_with, symmetry_residual, uniform_grid, HamiltonianSpec, QuantumnessTrace,
};
use crate::states::CoherentPoint;

pub(crate) fn write_json(dir: &Path, name: &str, value: &impl Serialize, report: &mut Report) -> Result<()> {
    fs::write(dir.join(name), serde_json::to_string_pretty(value)?)?;
    report.files.push(name.into());
    Ok(())
}

pub(crate) fn write_trace(dir: &Path, stem: &str, trace: &QuantumnessTrace, seed: u64, report: &mut Report) -> Result<()> {
    trace.write(dir, stem, Some(seed))?;
    report.files.push(format!("{stem}.csv"));
    report.files.push(format!("{stem}.json"));
    Ok(())
}

/// Trace from the coherent state at `start` (the reference state when empty).
pub(crate) fn coherent_trace(
    spec: &HamiltonianSpec,
    start: &[f64],
    t_end: f64,
    samples: usize,
    conv: &Conventions,
) -> Result<QuantumnessTrace> {
    let family = spec
        .coherent_family()
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no coherent-state chart", spec.family_name())))?;
    let point = if start.is_empty() {
        CoherentPoint::origin(2, spec.hbar(), family)?
    } else {
        CoherentPoint::new(start.to_vec(), spec.hbar(), family)?
    };
    quantumness_trace_with(spec, &point, &uniform_grid(t_end, samples), &conv.trace_options())
}

/// ‖[Ĥ, C]‖ for each Casimir of the family's SDF, away from the Fock cutoff.
pub(crate) fn sdf_symmetry(spec: &HamiltonianSpec) -> Result<Vec<f64>> {
    let rep = spec.build_rep()?.ok_or_else(|| Error::InvalidArgument("no representation for custom matrices".into()))?;
    let h = build_hamiltonian(spec, &rep)?;
    let cas: Vec<&Operator> = spec.sdf_casimirs().iter().map(|l| rep.require(l)).collect::<Result<_>>()?;
    let interior = rep.truncated.then(|| rep.interior_mask(spec.interior_margin()));
    symmetry_residual(&h, &cas, interior.as_deref())
}

/// Energy shell used by the default scans, or None when the model has no
/// non-degenerate shell through the q₁ = 0 plane.
pub(crate) fn default_shell(model: &ClassicalHamiltonian, hh_fraction: f64) -> Result<Option<f64>> {
    let origin = vec![0.0; 2 * model.dof()];
    let e0 = model.energy(&origin)?;
    Ok(match model {
        ClassicalHamiltonian::SpinPairModel { j, .. } => {
            // midway between the reference point and the opposite pole
            let p = (4.0 * j).sqrt() * (1.0 - 1e-12);
            let top = model.energy(&[0.0, 0.0, p, p])?;
            Some(0.5 * (e0 + top))
        }
        ClassicalHamiltonian::OscillatorModel { mu1, mu2, .. } | ClassicalHamiltonian::HenonHeilesLimit { mu1, mu2 } => {
            let esc = henon_heiles_escape_energy(*mu1, *mu2);
            Some(e0 + if esc.is_finite() { hh_fraction * esc } else { 0.125 })
        }
        ClassicalHamiltonian::OscillatorBilinearModel { .. } | ClassicalHamiltonian::OscillatorNNModel { .. } => {
            Some(e0 + 0.125)
        }
        ClassicalHamiltonian::LipkinModel { n, .. } => {
            // a quarter of the population in the third level, with the phase
            // that raises the pairing energy
            let x = (*n as f64 / 2.0).sqrt();
            let e = model.energy(&[0.0, 0.0, 0.0, x])?;
            ((e - e0).abs() > 1e-12 * e0.abs().max(1.0)).then_some(e)
        }
        ClassicalHamiltonian::GenericExpectation { .. } => None,
    })
}

pub(crate) fn lyapunov_options(horizon: f64, renorm_interval: f64) -> LyapunovOptions {
    LyapunovOptions { horizon, renorm_interval, ..LyapunovOptions::default() }
}

pub(crate) fn screen(model: &ClassicalHamiltonian, energy: f64, grid: usize, opts: &LyapunovOptions) -> Result<ScreenSummary> {
    let points = energy_shell_grid(model, energy, grid)?;
    if points.is_empty() {
        return Err(Error::InvalidArgument(format!("no grid point found on the shell E = {energy}")));
    }
    Ok(integrability_screen(model, &points, opts))
}

/// Index of the report with the largest finite λ.
fn most_chaotic(summary: &ScreenSummary) -> Option<usize> {
    summary
        .reports
        .iter()
        .enumerate()
        .filter(|(_, r)| r.lambda_max.is_finite())
        .max_by(|a, b| a.1.lambda_max.total_cmp(&b.1.lambda_max))
        .map(|(i, _)| i)
}

fn store_orbit(
    model: &ClassicalHamiltonian,
    z0: &[f64],
    t_end: f64,
    sample_dt: f64,
    dir: &Path,
    stem: &str,
    report: &mut Report,
) -> Result<()> {
    let opts = IntegrateOptions { sample_dt, ..IntegrateOptions::default() };
    let orbit = integrate(model, z0, t_end, &opts)?;
    write_orbit_csv(&orbit, &dir.join(format!("{stem}.csv")))?;
    report.files.push(format!("{stem}.csv"));
    let plane = SectionPlane { coordinate: 0, value: 0.0, direction: Direction::Upward };
    match poincare_section(&orbit, plane) {
        Ok(section) => {
            let name = format!("{stem}_section.csv");
            write_section_csv(&section, &dir.join(&name))?;
            report.files.push(name);
        }
        Err(Error::Inconclusive(msg)) => report.note(&format!("{stem}_section"), msg)?,
        Err(e) => return Err(e),
    }
    Ok(())
}

pub(crate) fn fig1_spin(p: &Fig1SpinParams, conv: &Conventions, dir: &Path, seed: u64) -> Result<Report> {
    let mut report = Report::default();
    let sym = p.spec(p.symmetric);
    let brk = p.spec(p.broken);
    let t_sym = coherent_trace(&sym, &p.start, p.t_end, p.samples, conv)?;
    let t_brk = coherent_trace(&brk, &p.start, p.t_end, p.samples, conv)?;
    write_trace(dir, "trace_symmetric", &t_sym, seed, &mut report)?;
    write_trace(dir, "trace_broken", &t_brk, seed, &mut report)?;
    let r_sym = sdf_symmetry(&sym)?;
    let r_brk = sdf_symmetry(&brk)?;
    report.note("symmetry_residual_symmetric", &r_sym)?;
    report.note("symmetry_residual_broken", &r_brk)?;
    report.note("excursion_symmetric", t_sym.excursion())?;
    report.note("excursion_broken", t_brk.excursion())?;
    report.checks = Some(vec![
        Check::below("symmetric excursion", t_sym.excursion(), p.constancy_tol),
        Check::above("broken excursion", t_brk.excursion(), p.excursion_min),
        Check::flag("symmetric case commutes", crate::qdyn::has_dynamical_symmetry(&r_sym), true),
        Check::flag("broken case commutes", crate::qdyn::has_dynamical_symmetry(&r_brk), false),
    ]);
    Ok(report)
}

pub(crate) fn fig2_spin_chaos(p: &Fig2SpinChaosParams, dir: &Path) -> Result<Report> {
    let mut report = Report::default();
    let model = ClassicalHamiltonian::SpinPairModel { omega: p.omega, mu_x: p.mu_x, mu_z: p.mu_z, j: p.j, form: p.form };
    let energy = match p.energy {
        Some(e) => e,
        None => default_shell(&model, 0.0)?.expect("spin models have a shell"),
    };
    report.note("energy", energy)?;
    let opts = lyapunov_options(p.horizon, p.renorm_interval);
    let summary = screen(&model, energy, p.grid, &opts)?;
    write_json(dir, "screen.json", &summary, &mut report)?;
    let best = most_chaotic(&summary).ok_or_else(|| Error::Tolerance("no orbit of the scan produced a finite exponent".into()))?;
    let chaos = &summary.reports[best];
    write_chaos_report(chaos, &dir.join("chaos_report.json"))?;
    report.files.push("chaos_report.json".into());
    store_orbit(&model, &chaos.z0, p.orbit_t_end, p.sample_dt, dir, "orbit_chaotic", &mut report)?;

    let symmetric =
        ClassicalHamiltonian::SpinPairModel { omega: p.omega, mu_x: 0.0, mu_z: p.symmetric_mu_z, j: p.j, form: p.form };
    let opts = IntegrateOptions { sample_dt: p.sample_dt, ..IntegrateOptions::default() };
    let orbit = integrate(&symmetric, &chaos.z0, p.orbit_t_end, &opts)?;
    write_orbit_csv(&orbit, &dir.join("orbit_symmetric.csv"))?;
    report.files.push("orbit_symmetric.csv".into());
    let drift = orbit.action_drift().into_iter().fold(0.0, f64::max);
    report.note("chaotic", summary.chaotic)?;
    report.note("chaotic_fraction", summary.chaotic_fraction)?;
    report.note("lambda_max", chaos.lambda_max)?;
    report.note("symmetric_action_drift", drift)?;
    report.checks = Some(vec![
        Check::above("chaotic orbits in scan", summary.chaotic as f64, 0.5),
        Check::below("symmetric action drift", drift, p.action_tol),
    ]);
    Ok(report)
}

pub(crate) fn fig3_osc(p: &Fig3OscParams, conv: &Conventions, dir: &Path, seed: u64) -> Result<Report> {
    let mut report = Report::default();
    let constant = coherent_trace(&p.spec(p.constant_case, p.n_max), &p.start, p.t_end, p.samples, conv)?;
    let refined =
        coherent_trace(&p.spec(p.constant_case, p.n_max + p.n_extra), &p.start, p.t_end, p.samples, conv)?;
    let broken = coherent_trace(&p.spec(p.broken_case, p.n_max), &p.start, p.t_end, p.samples, conv)?;
    write_trace(dir, "trace_constant", &constant, seed, &mut report)?;
    write_trace(dir, "trace_constant_refined", &refined, seed, &mut report)?;
    write_trace(dir, "trace_broken", &broken, seed, &mut report)?;
    let truncation = constant.max_difference(&refined)?;
    report.note("excursion_constant", constant.excursion())?;
    report.note("excursion_broken", broken.excursion())?;
    report.note("family_minimum", constant.family_minimum)?;
    report.note("truncation_difference", truncation)?;
    report.note("symmetry_residual_constant", sdf_symmetry(&p.spec(p.constant_case, p.n_max))?)?;
    report.note("symmetry_residual_broken", sdf_symmetry(&p.spec(p.broken_case, p.n_max))?)?;
    report.checks = Some(vec![
        Check::below("constant-case excursion", constant.excursion(), p.constancy_tol),
        Check::below("truncation difference", truncation, p.truncation_tol),
        Check::above("broken-case excursion", broken.excursion(), p.constancy_tol),
    ]);
    Ok(report)
}

/// Coupling ratios μ1/μ2 with a known second integral.
pub const INTEGRABLE_RATIOS: [f64; 3] = [0.0, -1.0, -1.0 / 6.0];

pub(crate) fn integrable_ratio(mu1: f64, mu2: f64) -> bool {
    mu2 != 0.0 && INTEGRABLE_RATIOS.iter().any(|r| (mu1 / mu2 - r).abs() < 1e-12)
}

pub(crate) fn fig4_osc_orbits(p: &Fig4OscOrbitsParams, dir: &Path) -> Result<Report> {
    let mut report = Report::default();
    let opts = lyapunov_options(p.horizon, p.renorm_interval);
    let mut checks = Vec::new();
    let mut cases = Vec::new();
    for (i, &[mu1, mu2]) in p.cases.iter().enumerate() {
        let model = ClassicalHamiltonian::HenonHeilesLimit { mu1, mu2 };
        let energy = default_shell(&model, p.energy_fraction)?.expect("Henon-Heiles has a shell");
        let summary = screen(&model, energy, p.grid, &opts)?;
        write_json(dir, &format!("screen_case{i}.json"), &summary, &mut report)?;
        if let Some(best) = most_chaotic(&summary) {
            store_orbit(&model, &summary.reports[best].z0, p.orbit_t_end, p.sample_dt, dir, &format!("orbit_case{i}"), &mut report)?;
        }
        let label = format!("({mu1}, {mu2})");
        if integrable_ratio(mu1, mu2) {
            checks.push(Check::below(format!("chaotic fraction {label}"), summary.chaotic_fraction, 1e-12));
        } else if mu1 == 1.0 && mu2 == 1.0 {
            checks.push(Check::above(format!("chaotic fraction {label}"), summary.chaotic_fraction, 0.0));
        }
        cases.push(serde_json::json!({
            "mu1": mu1, "mu2": mu2, "energy": energy,
            "chaotic": summary.chaotic, "regular": summary.regular,
            "escaped": summary.escaped, "inconclusive": summary.inconclusive,
            "chaotic_fraction": summary.chaotic_fraction,
        }));
    }
    report.note("cases", cases)?;
    report.checks = (!checks.is_empty()).then_some(checks);
    Ok(report)
}

pub(crate) fn fig5_bilinear(p: &Fig5BilinearParams, conv: &Conventions, dir: &Path, seed: u64) -> Result<Report> {
    let mut report = Report::default();
    let nn = coherent_trace(&p.nn_spec(), &p.start, p.t_end, p.samples, conv)?;
    let bl = coherent_trace(&p.bilinear_spec(), &p.start, p.t_end, p.samples, conv)?;
    write_trace(dir, "trace_nn", &nn, seed, &mut report)?;
    write_trace(dir, "trace_bilinear", &bl, seed, &mut report)?;
    report.note("excursion_nn", nn.excursion())?;
    report.note("excursion_bilinear", bl.excursion())?;
    report.note("symmetry_residual_nn", sdf_symmetry(&p.nn_spec())?)?;
    report.note("symmetry_residual_bilinear", sdf_symmetry(&p.bilinear_spec())?)?;
    report.checks = Some(vec![
        Check::below("number-number excursion", nn.excursion(), p.constancy_tol),
        Check::above("bilinear excursion", bl.excursion(), p.excursion_factor * p.constancy_tol),
    ]);
    Ok(report)
}

pub(crate) fn fig6_lipkin(p: &Fig6LipkinParams, conv: &Conventions, dir: &Path, seed: u64) -> Result<Report> {
    let mut report = Report::default();
    let sym = coherent_trace(&p.spec(p.symmetric_mu), &p.start, p.t_end, p.samples, conv)?;
    let brk = coherent_trace(&p.spec(p.broken_mu), &p.start, p.t_end, p.samples, conv)?;
    write_trace(dir, "trace_symmetric", &sym, seed, &mut report)?;
    write_trace(dir, "trace_broken", &brk, seed, &mut report)?;
    report.note("excursion_symmetric", sym.excursion())?;
    report.note("excursion_broken", brk.excursion())?;
    report.note("symmetry_residual_broken", sdf_symmetry(&p.spec(p.broken_mu))?)?;
    report.checks = Some(vec![
        Check::below("symmetric excursion", sym.excursion(), p.constancy_tol),
        Check::above("broken excursion", brk.excursion(), p.constancy_tol),
    ]);
    Ok(report)
}
