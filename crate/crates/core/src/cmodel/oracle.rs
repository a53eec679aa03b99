use nalgebra::DVector;
use num_complex::Complex64;

use super::polynomial::Polynomial;
use super::CorrectionForm;
use crate::algebra::AlgebraRep;
use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::qdyn::{build_hamiltonian, HamiltonianSpec};
use crate::states::{coherent_state, su3_product_amplitudes, CoherentPoint, QuantumState};

/// Brute-force ⟨α|Ĥ|α⟩ at a coherent point; fails on excessive truncation
/// leakage.
pub fn coherent_expectation_oracle(h: &Operator, point: &CoherentPoint, rep: &AlgebraRep) -> Result<f64> {
    if h.nrows() != rep.dim_hilbert {
        return Err(Error::DimensionMismatch { expected: rep.dim_hilbert, found: h.nrows() });
    }
    let c = coherent_state(point, rep)?;
    Ok(h.expectation(c.state.as_slice()).re)
}

/// N-boson su(3) coherent state at Darboux coordinates z = (q₁, q₂, p₁, p₂)
/// with q_k + ip_k = √(2N) u_k and u₀ = √(1 − |u₁|² − |u₂|²).
pub fn lipkin_coherent_state(z: &[f64], rep: &AlgebraRep) -> Result<QuantumState> {
    let n = match rep.factors.as_slice() {
        [crate::algebra::Factor::Su3 { particles }] => *particles,
        _ => return Err(Error::FamilyMismatch { family: "SU3Symmetric".into(), rep: rep.kind.to_string() }),
    };
    let s = 1.0 / (2.0 * n as f64).sqrt();
    let u1 = Complex64::new(z[0], z[2]) * s;
    let u2 = Complex64::new(z[1], z[3]) * s;
    let rest = 1.0 - u1.norm_sqr() - u2.norm_sqr();
    if !(rest > 0.0) {
        return Err(Error::Domain(format!("point {z:?} lies outside the Lipkin chart")));
    }
    let u = [Complex64::new(rest.sqrt(), 0.0), u1, u2];
    QuantumState::normalized(DVector::from_vec(su3_product_amplitudes(u, n)), rep)
}

/// ⟨Ĥ⟩ for a quantum family evaluated in the phase-space coordinates of its
/// classical model, z = (q₁, q₂, p₁, p₂).
pub struct ExpectationOracle {
    pub spec: HamiltonianSpec,
    pub rep: AlgebraRep,
    pub hamiltonian: Operator,
}

impl ExpectationOracle {
    pub fn at(&self, z: &[f64]) -> Result<f64> {
        if z.len() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: z.len() });
        }
        if let HamiltonianSpec::Su3Lipkin { .. } = self.spec {
            let psi = lipkin_coherent_state(z, &self.rep)?;
            return Ok(self.hamiltonian.expectation(psi.as_slice()).re);
        }
        let family = self.spec.coherent_family().ok_or_else(|| Error::InvalidArgument("no coherent family".into()))?;
        let point = CoherentPoint::new(vec![z[0], z[2], z[1], z[3]], self.spec.hbar(), family)?;
        coherent_expectation_oracle(&self.hamiltonian, &point, &self.rep)
    }
}

pub fn oracle_for_spec(spec: &HamiltonianSpec) -> Result<ExpectationOracle> {
    let rep = spec.build_rep()?.ok_or_else(|| Error::InvalidArgument("custom matrices carry no representation".into()))?;
    let hamiltonian = build_hamiltonian(spec, &rep)?;
    Ok(ExpectationOracle { spec: spec.clone(), rep, hamiltonian })
}

/// V plus Σ_k (ħ/(2mω))^k / (2^k k!) · ∇^{2k} V, where ∇^{2k} is the k-th
/// iterated Laplacian in all of V's variables. The series stops once the
/// derivatives vanish.
pub fn expectation_correction(v: &Polynomial, hbar: f64, m: f64, omega: f64) -> Result<Polynomial> {
    if !(hbar >= 0.0) || !(m > 0.0) || !(omega > 0.0) {
        return Err(Error::InvalidArgument("need hbar >= 0 and positive m, omega".into()));
    }
    let vars: Vec<usize> = (0..v.nvars()).collect();
    let half_var = hbar / (2.0 * m * omega) / 2.0;
    let mut out = v.clone();
    let mut lap = v.clone();
    let mut coeff = 1.0;
    for k in 1.. {
        lap = lap.laplacian(&vars);
        if lap.is_zero() {
            break;
        }
        coeff *= half_var / k as f64;
        out = out.add(&lap.scale(coeff))?;
    }
    Ok(out)
}

/// Full coherent expectation of Σ p_i²/2 + V(q) for unit mass and frequency,
/// as a polynomial in (q₁..q_n, p₁..p_n): the kinetic term contributes ħ/4
/// per mode on top of [`expectation_correction`].
pub fn oscillator_expectation_polynomial(v: &Polynomial, hbar: f64) -> Result<Polynomial> {
    let n = v.nvars();
    let mut h = expectation_correction(v, hbar, 1.0, 1.0)?.extend_vars(2 * n)?;
    for i in 0..n {
        h = h.add(&Polynomial::monomial(2 * n, 0.5, &[(n + i, 2)]))?;
    }
    h.add(&Polynomial::constant(2 * n, n as f64 * hbar / 4.0))
}

/// The cubic oscillator model as a polynomial in (q₁, q₂, p₁, p₂).
pub fn oscillator_model_polynomial(mu1: f64, mu2: f64, hbar: f64, form: CorrectionForm) -> Polynomial {
    let mono = |c: f64, powers: &[(usize, u32)]| Polynomial::monomial(4, c, powers);
    let mut terms = vec![
        mono(0.5, &[(0, 2)]),
        mono(0.5, &[(1, 2)]),
        mono(0.5, &[(2, 2)]),
        mono(0.5, &[(3, 2)]),
        mono(mu1, &[(0, 2), (1, 1)]),
        mono(-mu2 / 3.0, &[(1, 3)]),
    ];
    match form {
        CorrectionForm::Exact => {
            terms.push(Polynomial::constant(4, hbar));
            terms.push(mono(0.5 * hbar * (mu1 - mu2), &[(1, 1)]));
        }
        CorrectionForm::AsPublished => {
            terms.push(Polynomial::constant(4, 0.5 * hbar));
            terms.push(mono(0.5 * hbar * mu1, &[(0, 1)]));
            terms.push(mono(0.5 * hbar * (mu1 - mu2), &[(1, 1)]));
        }
    }
    terms.iter().fold(Polynomial::zero(4), |acc, t| acc.add(t).expect("same arity"))
}

/// Published minus exact correction: (ħ/2)μ₁q₁ − ħ/2.
pub fn published_correction_discrepancy(mu1: f64, mu2: f64, hbar: f64) -> Polynomial {
    oscillator_model_polynomial(mu1, mu2, hbar, CorrectionForm::AsPublished)
        .add(&oscillator_model_polynomial(mu1, mu2, hbar, CorrectionForm::Exact).scale(-1.0))
        .expect("same arity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_h4_rep;
    use crate::cmodel::{build_nn_model, build_oscillator_model, build_spin_pair_model, ClassicalHamiltonian, NnForm};
    use crate::orbits::PhaseSpaceHamiltonian;
    use crate::states::{quadratures, CoherentFamily};

    fn grid(n: usize, half_width: f64) -> Vec<[f64; 4]> {
        let axis: Vec<f64> = (0..n).map(|i| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64).collect();
        let mut out = Vec::new();
        for &a in &axis {
            for &b in &axis {
                for &c in &axis {
                    for &d in &axis {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn number_operator_gives_mean_occupation() {
        let rep = build_h4_rep(40).unwrap();
        let n = rep.require("n").unwrap();
        for hbar in [1.0, 0.1] {
            let p = CoherentPoint::new(vec![0.3, -0.2], hbar, CoherentFamily::OscillatorGlauber).unwrap();
            let got = coherent_expectation_oracle(n, &p, &rep).unwrap();
            assert!((got - 0.13 / (2.0 * hbar)).abs() < 1e-12);
        }
    }

    #[test]
    fn correction_series() {
        // ⟨(q+δ)⁴⟩ = q⁴ + 6σ²q² + 3σ⁴, σ² = ħ/(2mω)
        let v: Polynomial = "q1^4".parse().unwrap();
        let (hbar, m, w) = (0.3, 2.0, 1.5);
        let s2 = hbar / (2.0 * m * w);
        let got = expectation_correction(&v, hbar, m, w).unwrap();
        let want: Polynomial = format!("q1^4 + {}*q1^2 + {}", 6.0 * s2, 3.0 * s2 * s2).parse().unwrap();
        assert!(got.max_coeff_diff(&want) < 1e-15);
        // harmonic case: V = q² gains ħ/2 at m = ω = 1
        let q2: Polynomial = "q1^2".parse().unwrap();
        let c = expectation_correction(&q2, 0.8, 1.0, 1.0).unwrap();
        assert!(c.max_coeff_diff(&"q1^2 + 0.4".parse().unwrap()) < 1e-15);
    }

    #[test]
    fn cubic_correction_symbolically() {
        let (mu1, mu2, hbar) = (0.7, 1.3, 0.4);
        let v = Polynomial::parse(&format!("0.5*q1^2 + 0.5*q2^2 + {mu1}*q1^2*q2 - {}*q2^3", mu2 / 3.0), 2, false).unwrap();
        let derived = oscillator_expectation_polynomial(&v, hbar).unwrap();
        let exact = oscillator_model_polynomial(mu1, mu2, hbar, CorrectionForm::Exact);
        assert!(derived.max_coeff_diff(&exact) < 1e-15);
        let diff = published_correction_discrepancy(mu1, mu2, hbar);
        let want = Polynomial::parse(&format!("{}*q1 - {}", 0.5 * hbar * mu1, 0.5 * hbar), 2, true).unwrap();
        assert!(diff.max_coeff_diff(&want) < 1e-15);
    }

    #[test]
    fn cubic_matrix_agrees_with_exact_model() {
        let spec = HamiltonianSpec::OscillatorCubic { mu1: 1.0, mu2: 1.0, hbar: 0.5, n_max: 40 };
        let oracle = oracle_for_spec(&spec).unwrap();
        let model = build_oscillator_model(1.0, 1.0, 0.5);
        let published = ClassicalHamiltonian::OscillatorModel {
            mu1: 1.0,
            mu2: 1.0,
            hbar: 0.5,
            form: CorrectionForm::AsPublished,
        };
        let mut worst_published: f64 = 0.0;
        for z in grid(3, 0.4) {
            let o = oracle.at(&z).unwrap();
            assert!((o - model.energy(&z).unwrap()).abs() < 1e-9, "{z:?}");
            worst_published = worst_published.max((o - published.energy(&z).unwrap()).abs());
        }
        assert!(worst_published > 0.2);
    }

    #[test]
    fn quartic_matrix_agrees_with_series() {
        let hbar = 0.5;
        let rep = build_h4_rep(60).unwrap();
        let (q, p) = quadratures(&rep, 0, hbar).unwrap();
        let h = q.pow(4).unwrap().add(&q.pow(2).unwrap().scale_real(0.5)).unwrap().add(&p.pow(2).unwrap().scale_real(0.5)).unwrap();
        let v: Polynomial = "q1^4 + 0.5*q1^2".parse().unwrap();
        let model = oscillator_expectation_polynomial(&v, hbar).unwrap();
        for (x, y) in [(0.0, 0.0), (0.3, -0.4), (-0.5, 0.2)] {
            let pt = CoherentPoint::new(vec![x, y], hbar, CoherentFamily::OscillatorGlauber).unwrap();
            let o = coherent_expectation_oracle(&h, &pt, &rep).unwrap();
            assert!((o - model.evaluate(&[x, y])).abs() < 1e-9);
        }
    }

    #[test]
    fn spin_matrix_agrees_with_expectation_model() {
        for j in [0.5, 1.0] {
            let spec = HamiltonianSpec::SpinPair { omega: 0.8, mu_x: 0.6, mu_z: -0.3, j };
            let oracle = oracle_for_spec(&spec).unwrap();
            let model = build_spin_pair_model(0.8, 0.6, -0.3, j).unwrap();
            for z in grid(3, 0.6) {
                assert!((oracle.at(&z).unwrap() - model.energy(&z).unwrap()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn nn_and_bilinear_agree() {
        let nn = oracle_for_spec(&HamiltonianSpec::OscillatorNN { hbar: 1.0, n_max: 40 }).unwrap();
        let model = build_nn_model(1.0);
        let shifted = ClassicalHamiltonian::OscillatorNNModel { hbar: 1.0, form: NnForm::ConstantShift };
        let origin = [0.0; 4];
        assert!((nn.at(&origin).unwrap() - shifted.energy(&origin).unwrap()).abs() < 1e-10);
        let bl = oracle_for_spec(&HamiltonianSpec::OscillatorBilinear { lambda: 0.5, hbar: 1.0, n_max: 30 }).unwrap();
        let bl_model = ClassicalHamiltonian::OscillatorBilinearModel { lambda: 0.5, hbar: 1.0 };
        for z in grid(3, 0.5) {
            assert!((nn.at(&z).unwrap() - model.energy(&z).unwrap()).abs() < 1e-9);
            assert!((bl.at(&z).unwrap() - bl_model.energy(&z).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn lipkin_matrix_agrees_with_mean_field_model() {
        let spec = HamiltonianSpec::Su3Lipkin { omega: [1.0, 1.4, 0.6], mu: 1.0 / 6.0, n: 5 };
        let oracle = oracle_for_spec(&spec).unwrap();
        let model = ClassicalHamiltonian::LipkinModel { omega: [1.0, 1.4, 0.6], mu: 1.0 / 6.0, n: 5 };
        for z in grid(3, 1.2) {
            assert!((oracle.at(&z).unwrap() - model.energy(&z).unwrap()).abs() < 1e-10, "{z:?}");
        }
    }
}
