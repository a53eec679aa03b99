use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    build_h4_rep, build_su2_rep, build_su3_symmetric_rep, direct_sum_rep, AlgebraRep, Factor,
};
use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::states::{quadratures, CoherentFamily, Measure};

/// Oscillator truncations below this are rejected.
pub const MIN_FOCK_CUTOFF: usize = 16;

const HERMITIAN_TOL: f64 = 1e-12;

/// Explicit matrix element of a custom Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntry {
    pub row: usize,
    pub col: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// A quantum Hamiltonian family with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum HamiltonianSpec {
    /// ω(Jz¹ + Jz²) + μx Jx¹Jx² + μz Jz¹Jz² on two spin-j factors
    SpinPair { omega: f64, mu_x: f64, mu_z: f64, j: f64 },
    /// Σ ½(p̂ᵢ² + q̂ᵢ²) + μ₁ q̂₁²q̂₂ − (μ₂/3) q̂₂³
    OscillatorCubic { mu1: f64, mu2: f64, hbar: f64, n_max: usize },
    /// Σ ½(p̂ᵢ² + q̂ᵢ²) + λ q̂₁q̂₂
    OscillatorBilinear { lambda: f64, hbar: f64, n_max: usize },
    /// Σ ½(p̂ᵢ² + q̂ᵢ²) + ¼(p̂₁² + q̂₁²)(p̂₂² + q̂₂²)
    OscillatorNN { hbar: f64, n_max: usize },
    /// Σ ωᵢ Eᵢᵢ − μ Σ_{i≠j} Eᵢⱼ² on the symmetric irrep with N particles
    Su3Lipkin { omega: [f64; 3], mu: f64, n: usize },
    /// Explicit Hermitian matrix; used with a caller-supplied rep.
    CustomMatrix { dim: usize, entries: Vec<MatrixEntry> },
}

impl HamiltonianSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            HamiltonianSpec::SpinPair { .. } => "SpinPair",
            HamiltonianSpec::OscillatorCubic { .. } => "OscillatorCubic",
            HamiltonianSpec::OscillatorBilinear { .. } => "OscillatorBilinear",
            HamiltonianSpec::OscillatorNN { .. } => "OscillatorNN",
            HamiltonianSpec::Su3Lipkin { .. } => "Su3Lipkin",
            HamiltonianSpec::CustomMatrix { .. } => "CustomMatrix",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name} must be finite")))
            }
        };
        let osc = |hbar: f64, n_max: usize| {
            if !(hbar > 0.0) || !hbar.is_finite() {
                return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
            }
            if n_max < MIN_FOCK_CUTOFF {
                return Err(Error::InvalidArgument(format!(
                    "n_max = {n_max} is below the fidelity floor of {MIN_FOCK_CUTOFF}"
                )));
            }
            Ok(())
        };
        match *self {
            HamiltonianSpec::SpinPair { omega, mu_x, mu_z, j } => {
                finite("omega", omega)?;
                finite("mu_x", mu_x)?;
                finite("mu_z", mu_z)?;
                if !(j > 0.0) {
                    return Err(Error::InvalidArgument(format!("spin must be positive, got {j}")));
                }
                crate::algebra::Spin::new(j).map(|_| ())
            }
            HamiltonianSpec::OscillatorCubic { mu1, mu2, hbar, n_max } => {
                finite("mu1", mu1)?;
                finite("mu2", mu2)?;
                osc(hbar, n_max)
            }
            HamiltonianSpec::OscillatorBilinear { lambda, hbar, n_max } => {
                finite("lambda", lambda)?;
                osc(hbar, n_max)
            }
            HamiltonianSpec::OscillatorNN { hbar, n_max } => osc(hbar, n_max),
            HamiltonianSpec::Su3Lipkin { omega, mu, n } => {
                omega.iter().try_for_each(|&w| finite("omega", w))?;
                finite("mu", mu)?;
                if n < 1 {
                    return Err(Error::InvalidArgument("Lipkin particle number must be >= 1".into()));
                }
                Ok(())
            }
            HamiltonianSpec::CustomMatrix { dim, ref entries } => {
                for e in entries {
                    if e.row >= dim || e.col >= dim {
                        return Err(Error::InvalidArgument(format!("entry ({}, {}) outside dim {dim}", e.row, e.col)));
                    }
                    finite("entry", e.re)?;
                    finite("entry", e.im)?;
                }
                Ok(())
            }
        }
    }

    /// The representation this family lives on; `None` for custom matrices.
    pub fn build_rep(&self) -> Result<Option<AlgebraRep>> {
        self.validate()?;
        Ok(Some(match *self {
            HamiltonianSpec::SpinPair { j, .. } => {
                let s = build_su2_rep(j)?;
                direct_sum_rep(&[s.clone(), s])?
            }
            HamiltonianSpec::OscillatorCubic { n_max, .. }
            | HamiltonianSpec::OscillatorBilinear { n_max, .. }
            | HamiltonianSpec::OscillatorNN { n_max, .. } => {
                let h = build_h4_rep(n_max)?;
                direct_sum_rep(&[h.clone(), h])?
            }
            HamiltonianSpec::Su3Lipkin { n, .. } => build_su3_symmetric_rep(n)?,
            HamiltonianSpec::CustomMatrix { .. } => return Ok(None),
        }))
    }

    pub fn hbar(&self) -> f64 {
        match *self {
            HamiltonianSpec::OscillatorCubic { hbar, .. }
            | HamiltonianSpec::OscillatorBilinear { hbar, .. }
            | HamiltonianSpec::OscillatorNN { hbar, .. } => hbar,
            _ => 1.0,
        }
    }

    pub fn is_oscillator(&self) -> bool {
        matches!(
            self,
            HamiltonianSpec::OscillatorCubic { .. }
                | HamiltonianSpec::OscillatorBilinear { .. }
                | HamiltonianSpec::OscillatorNN { .. }
        )
    }

    pub fn measure(&self) -> Measure {
        if self.is_oscillator() {
            Measure::DispersionProduct
        } else {
            Measure::VarianceSum
        }
    }

    pub fn coherent_family(&self) -> Option<CoherentFamily> {
        match self {
            HamiltonianSpec::SpinPair { .. } => Some(CoherentFamily::SpinStereo),
            HamiltonianSpec::Su3Lipkin { .. } => Some(CoherentFamily::SU3Symmetric),
            HamiltonianSpec::CustomMatrix { .. } => None,
            _ => Some(CoherentFamily::OscillatorGlauber),
        }
    }

    /// Fock levels next to the cutoff that truncated products corrupt.
    pub fn interior_margin(&self) -> usize {
        match self {
            HamiltonianSpec::OscillatorCubic { .. } => 3,
            HamiltonianSpec::OscillatorBilinear { .. } => 2,
            HamiltonianSpec::OscillatorNN { .. } => 4,
            _ => 0,
        }
    }

    /// Labels of the Casimirs that define the SDF of this family.
    pub fn sdf_casimirs(&self) -> Vec<&'static str> {
        match self {
            HamiltonianSpec::SpinPair { .. } => vec!["Jz_1", "Jz_2"],
            HamiltonianSpec::Su3Lipkin { .. } => vec!["T2", "Tz"],
            HamiltonianSpec::CustomMatrix { .. } => vec![],
            _ => vec!["n_1", "n_2"],
        }
    }
}

fn require_factors(spec: &HamiltonianSpec, rep: &AlgebraRep, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::FamilyMismatch { family: spec.family_name().into(), rep: rep.kind.to_string() })
    }
}

fn oscillator_pair(spec: &HamiltonianSpec, rep: &AlgebraRep) -> Result<[(Operator, Operator); 2]> {
    require_factors(
        spec,
        rep,
        matches!(rep.factors.as_slice(), [Factor::H4 { .. }, Factor::H4 { .. }]),
    )?;
    let hbar = spec.hbar();
    Ok([quadratures(rep, 0, hbar)?, quadratures(rep, 1, hbar)?])
}

fn sum(terms: &[(f64, &Operator)], dim: usize) -> Result<Operator> {
    terms
        .iter()
        .try_fold(Operator::zeros(dim, dim), |acc, (s, op)| acc.add_scaled(op, Complex64::new(*s, 0.0)))
}

/// Assembles the Hamiltonian matrix of `spec` on `rep`. Products of quadratures
/// are formed by truncated matrix multiplication; every monomial is a product
/// of commuting factors, so no ordering choice is involved.
pub fn build_hamiltonian(spec: &HamiltonianSpec, rep: &AlgebraRep) -> Result<Operator> {
    spec.validate()?;
    let n = rep.dim_hilbert;
    let h = match *spec {
        HamiltonianSpec::SpinPair { omega, mu_x, mu_z, j } => {
            let spin = crate::algebra::Spin::new(j)?;
            require_factors(
                spec,
                rep,
                rep.factors == [Factor::Su2 { spin }, Factor::Su2 { spin }],
            )?;
            let g = |l: &str| rep.require(l);
            let xx = g("Jx_1")?.matmul(g("Jx_2")?)?;
            let zz = g("Jz_1")?.matmul(g("Jz_2")?)?;
            sum(&[(omega, g("Jz_1")?), (omega, g("Jz_2")?), (mu_x, &xx), (mu_z, &zz)], n)?
        }
        HamiltonianSpec::OscillatorCubic { mu1, mu2, .. } => {
            let [(q1, p1), (q2, p2)] = oscillator_pair(spec, rep)?;
            let free = free_part(&q1, &p1, &q2, &p2)?;
            let q1sq_q2 = q1.matmul(&q1)?.matmul(&q2)?;
            let q2cube = q2.pow(3)?;
            sum(&[(1.0, &free), (mu1, &q1sq_q2), (-mu2 / 3.0, &q2cube)], n)?
        }
        HamiltonianSpec::OscillatorBilinear { lambda, .. } => {
            let [(q1, p1), (q2, p2)] = oscillator_pair(spec, rep)?;
            let free = free_part(&q1, &p1, &q2, &p2)?;
            sum(&[(1.0, &free), (lambda, &q1.matmul(&q2)?)], n)?
        }
        HamiltonianSpec::OscillatorNN { .. } => {
            let [(q1, p1), (q2, p2)] = oscillator_pair(spec, rep)?;
            let k1 = q1.pow(2)?.add(&p1.pow(2)?)?;
            let k2 = q2.pow(2)?.add(&p2.pow(2)?)?;
            sum(&[(0.5, &k1), (0.5, &k2), (0.25, &k1.matmul(&k2)?)], n)?
        }
        HamiltonianSpec::Su3Lipkin { omega, mu, n: particles } => {
            require_factors(spec, rep, rep.factors == [Factor::Su3 { particles }])?;
            let mut terms = Vec::new();
            for (i, w) in omega.iter().enumerate() {
                terms.push((*w, rep.require(&format!("E{}{}", i + 1, i + 1))?.clone()));
            }
            for i in 1..=3 {
                for j in 1..=3 {
                    if i != j {
                        terms.push((-mu, rep.require(&format!("E{i}{j}"))?.pow(2)?));
                    }
                }
            }
            let refs: Vec<(f64, &Operator)> = terms.iter().map(|(s, o)| (*s, o)).collect();
            sum(&refs, n)?
        }
        HamiltonianSpec::CustomMatrix { dim, ref entries } => {
            if dim != n {
                return Err(Error::DimensionMismatch { expected: n, found: dim });
            }
            Operator::from_triplets(dim, dim, entries.iter().map(|e| (e.row, e.col, Complex64::new(e.re, e.im))))
        }
    };
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(h)
}

fn free_part(q1: &Operator, p1: &Operator, q2: &Operator, p2: &Operator) -> Result<Operator> {
    let n = q1.nrows();
    sum(&[(0.5, &q1.pow(2)?), (0.5, &p1.pow(2)?), (0.5, &q2.pow(2)?), (0.5, &p2.pow(2)?)], n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigh;

    #[test]
    fn zeeman_spectrum() {
        let spec = HamiltonianSpec::SpinPair { omega: 1.0, mu_x: 0.0, mu_z: 0.0, j: 0.5 };
        let rep = spec.build_rep().unwrap().unwrap();
        let h = build_hamiltonian(&spec, &rep).unwrap();
        let e = eigh(&h).values;
        for (a, b) in e.iter().zip([-1.0, 0.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn lipkin_without_pairing_is_diagonal() {
        let spec = HamiltonianSpec::Su3Lipkin { omega: [1.0, 2.0, 3.5], mu: 0.0, n: 3 };
        let rep = spec.build_rep().unwrap().unwrap();
        let h = build_hamiltonian(&spec, &rep).unwrap();
        for (k, occ) in crate::algebra::su3_basis(3).iter().enumerate() {
            let want = occ[0] as f64 + 2.0 * occ[1] as f64 + 3.5 * occ[2] as f64;
            assert!((h.get(k, k).re - want).abs() < 1e-14);
        }
        assert_eq!(h.triplets().filter(|(r, c, _)| r != c).count(), 0);
    }

    #[test]
    fn nn_commutes_with_numbers_in_interior() {
        let spec = HamiltonianSpec::OscillatorNN { hbar: 1.0, n_max: 16 };
        let rep = spec.build_rep().unwrap().unwrap();
        let h = build_hamiltonian(&spec, &rep).unwrap();
        let mask = rep.interior_mask(spec.interior_margin());
        for l in ["n_1", "n_2"] {
            let c = h.commutator(rep.require(l).unwrap()).unwrap();
            assert!(c.max_abs_where(&mask) < 1e-10);
        }
    }

    #[test]
    fn cubic_cutoff_floor() {
        let spec = HamiltonianSpec::OscillatorCubic { mu1: 1.0, mu2: 1.0, hbar: 1.0, n_max: 10 };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn harmonic_spectrum_interior() {
        let spec = HamiltonianSpec::OscillatorCubic { mu1: 0.0, mu2: 0.0, hbar: 0.5, n_max: 16 };
        let rep = spec.build_rep().unwrap().unwrap();
        let h = build_hamiltonian(&spec, &rep).unwrap();
        // H = ħ(n₁ + n₂ + 1) away from the cutoff
        let e = h.get(0, 0).re;
        assert!((e - 0.5).abs() < 1e-14);
    }

    #[test]
    fn family_mismatch() {
        let spec = HamiltonianSpec::SpinPair { omega: 1.0, mu_x: 0.0, mu_z: 0.0, j: 0.5 };
        let rep = build_su2_rep(0.5).unwrap();
        assert!(matches!(build_hamiltonian(&spec, &rep), Err(Error::FamilyMismatch { .. })));
    }

    #[test]
    fn custom_must_be_hermitian() {
        let spec = HamiltonianSpec::CustomMatrix {
            dim: 2,
            entries: vec![MatrixEntry { row: 0, col: 1, re: 1.0, im: 0.0 }],
        };
        let rep = build_su2_rep(0.5).unwrap();
        assert!(matches!(build_hamiltonian(&spec, &rep), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn spec_json_is_tagged() {
        let spec = HamiltonianSpec::OscillatorNN { hbar: 1.0, n_max: 20 };
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"family\":\"OscillatorNN\""));
        assert_eq!(serde_json::from_str::<HamiltonianSpec>(&text).unwrap(), spec);
        assert!(serde_json::from_str::<HamiltonianSpec>(r#"{"family":"OscillatorNN","hbar":1,"n_max":20,"x":1}"#).is_err());
    }
}
