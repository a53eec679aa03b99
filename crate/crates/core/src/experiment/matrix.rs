use std::path::Path;

use serde::{Deserialize, Serialize};

use super::figures::{coherent_trace, default_shell, lyapunov_options, screen, sdf_symmetry, write_json};
use super::params::{ConjectureMatrixParams, SweepParams};
use super::{Check, Conventions, Report};
use crate::cmodel::ClassicalHamiltonian;
use crate::error::Result;
use crate::qdyn::{has_dynamical_symmetry, HamiltonianSpec};

pub const MATRIX_COLUMNS: [&str; 11] = [
    "row",
    "family",
    "symmetry_residual",
    "symmetric",
    "excursion",
    "constant",
    "chaotic_fraction",
    "expected_symmetric",
    "expected_constant",
    "expected_chaotic",
    "matches",
];

/// One family × coupling case of the conjecture matrix. `expected_*` hold
/// the published claims; None where nothing is claimed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub label: String,
    pub spec: HamiltonianSpec,
    pub start: Vec<f64>,
    pub symmetry_residual: f64,
    pub symmetric: bool,
    pub excursion: f64,
    pub constant: bool,
    pub chaotic_fraction: Option<f64>,
    pub screen_energy: Option<f64>,
    pub note: Option<String>,
    pub expected_symmetric: Option<bool>,
    pub expected_constant: Option<bool>,
    pub expected_chaotic: Option<bool>,
}

impl MatrixRow {
    pub fn chaotic(&self) -> Option<bool> {
        self.chaotic_fraction.map(|f| f > 0.0)
    }

    pub fn checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        let mut cell = |name: &str, observed: Option<bool>, expected: Option<bool>| {
            if let Some(e) = expected {
                let label = format!("{}: {name}", self.label);
                out.push(match observed {
                    Some(o) => Check::flag(label, o, e),
                    None => Check { name: label, value: f64::NAN, relation: "==".into(), bound: e as u8 as f64, pass: false },
                });
            }
        };
        cell("symmetric", Some(self.symmetric), self.expected_symmetric);
        cell("constant", Some(self.constant), self.expected_constant);
        cell("chaotic", self.chaotic(), self.expected_chaotic);
        out
    }

    pub fn matches(&self) -> bool {
        self.checks().iter().all(|c| c.pass)
    }
}

struct Case {
    label: &'static str,
    spec: HamiltonianSpec,
    start: Vec<f64>,
    expected: [Option<bool>; 3],
}

fn cases(p: &ConjectureMatrixParams) -> Vec<Case> {
    let (hbar, n_max) = (p.hbar, p.n_max);
    let osc_start = vec![0.1, 0.0, 0.1, 0.0];
    let su3_start = vec![0.4, 0.0, 0.3, 0.0];
    let spin = |mu_x, mu_z| HamiltonianSpec::SpinPair { omega: 1.0, mu_x, mu_z, j: p.spin_j };
    let cubic = |mu1, mu2| HamiltonianSpec::OscillatorCubic { mu1, mu2, hbar, n_max };
    let lipkin = |mu| HamiltonianSpec::Su3Lipkin { omega: [1.0; 3], mu, n: p.lipkin_n };
    let (t, f) = (Some(true), Some(false));
    vec![
        Case { label: "spin mu_x=0", spec: spin(0.0, 1.0), start: vec![], expected: [t, t, f] },
        Case { label: "spin mu_x=1", spec: spin(1.0, 0.0), start: vec![], expected: [f, f, t] },
        Case { label: "osc mu1=0", spec: cubic(0.0, 1.0), start: osc_start.clone(), expected: [None, t, f] },
        Case { label: "osc mu1=mu2=1", spec: cubic(1.0, 1.0), start: osc_start.clone(), expected: [f, f, t] },
        Case { label: "nn", spec: HamiltonianSpec::OscillatorNN { hbar, n_max }, start: vec![], expected: [t, t, f] },
        Case {
            label: "bilinear",
            spec: HamiltonianSpec::OscillatorBilinear { lambda: p.bilinear_lambda, hbar, n_max },
            start: vec![],
            expected: [f, f, f],
        },
        Case { label: "hh ratio -1", spec: cubic(-1.0, 1.0), start: osc_start, expected: [f, f, f] },
        Case { label: "lipkin mu=0", spec: lipkin(0.0), start: su3_start.clone(), expected: [t, t, None] },
        Case { label: "lipkin mu=1/6", spec: lipkin(1.0 / 6.0), start: su3_start, expected: [f, f, None] },
    ]
}

fn evaluate(case: Case, p: &ConjectureMatrixParams, conv: &Conventions) -> Result<MatrixRow> {
    let residuals = sdf_symmetry(&case.spec)?;
    let trace = coherent_trace(&case.spec, &case.start, p.t_end, p.samples, conv)?;
    let model = ClassicalHamiltonian::for_spec(&case.spec)?;
    let opts = lyapunov_options(p.horizon, 1.0);
    let (chaotic_fraction, screen_energy, note) = match default_shell(&model, 0.75)? {
        Some(e) => match screen(&model, e, p.grid, &opts) {
            Ok(s) => (Some(s.chaotic_fraction), Some(e), None),
            Err(err) => (None, Some(e), Some(err.to_string())),
        },
        None => (None, None, Some("no energy shell: the classical model is constant".into())),
    };
    Ok(MatrixRow {
        label: case.label.into(),
        spec: case.spec,
        start: case.start,
        symmetry_residual: residuals.iter().copied().fold(0.0, f64::max),
        symmetric: has_dynamical_symmetry(&residuals),
        excursion: trace.excursion(),
        constant: trace.excursion() < p.constancy_tol,
        chaotic_fraction,
        screen_energy,
        note,
        expected_symmetric: case.expected[0],
        expected_constant: case.expected[1],
        expected_chaotic: case.expected[2],
    })
}

/// Evaluates every row of the matrix.
pub fn matrix_rows(p: &ConjectureMatrixParams, conv: &Conventions) -> Result<Vec<MatrixRow>> {
    cases(p).into_iter().map(|c| evaluate(c, p, conv)).collect()
}

fn cell(b: Option<bool>) -> String {
    b.map(|b| b.to_string()).unwrap_or_default()
}

pub(crate) fn conjecture_matrix(p: &ConjectureMatrixParams, conv: &Conventions, dir: &Path) -> Result<Report> {
    let mut report = Report::default();
    let rows = matrix_rows(p, conv)?;
    let mut w = csv::Writer::from_path(dir.join("matrix.csv"))?;
    w.write_record(MATRIX_COLUMNS)?;
    for r in &rows {
        w.write_record([
            r.label.clone(),
            r.spec.family_name().to_string(),
            r.symmetry_residual.to_string(),
            r.symmetric.to_string(),
            r.excursion.to_string(),
            r.constant.to_string(),
            r.chaotic_fraction.map(|f| f.to_string()).unwrap_or_default(),
            cell(r.expected_symmetric),
            cell(r.expected_constant),
            cell(r.expected_chaotic),
            r.matches().to_string(),
        ])?;
    }
    w.flush()?;
    report.files.push("matrix.csv".into());
    write_json(dir, "matrix.json", &rows, &mut report)?;
    report.checks = Some(rows.iter().flat_map(MatrixRow::checks).collect());
    Ok(report)
}

pub(crate) fn sweep(p: &SweepParams, conv: &Conventions, dir: &Path) -> Result<Report> {
    let mut report = Report::default();
    let mut w = csv::Writer::from_path(dir.join("sweep.csv"))?;
    w.write_record([p.parameter.as_str(), "excursion", "max_leakage", "family_minimum"])?;
    for v in p.values() {
        let trace = coherent_trace(&p.spec_at(v)?, &p.start, p.t_end, p.samples, conv)?;
        w.write_record([
            v.to_string(),
            trace.excursion().to_string(),
            trace.max_leakage().to_string(),
            trace.family_minimum.to_string(),
        ])?;
    }
    w.flush()?;
    report.files.push("sweep.csv".into());
    Ok(report)
}
