//! Classical models: Hamilton functions on coherent-state manifolds and the
//! matrix oracle ⟨α|Ĥ|α⟩ that validates them.

mod oracle;
pub mod polynomial;

use serde::{Deserialize, Serialize};

pub use oracle::{
    coherent_expectation_oracle, expectation_correction, lipkin_coherent_state, oracle_for_spec,
    oscillator_expectation_polynomial, oscillator_model_polynomial, published_correction_discrepancy,
    ExpectationOracle,
};
pub use polynomial::Polynomial;

use crate::error::{Error, Result};
use crate::orbits::PhaseSpaceHamiltonian;
use crate::qdyn::HamiltonianSpec;

/// Escape radius for the oscillator families.
pub const OSCILLATOR_ESCAPE_RADIUS: f64 = 10.0;

/// Which normalization of the spin-pair model to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinModelForm {
    /// ⟨Ĥ⟩ on the coherent-state product, matching the matrix oracle.
    #[default]
    Expectation,
    /// `ω(r₁²+r₂²) + μz(r₁²−2J)(r₂²−2J) + μx q₁q₂√((4J−r₁²)(4J−r₂²))`,
    /// equal to 4·Expectation(ω/2) + 4ωJ.
    AsPublished,
}

/// ħ-correction term of the cubic oscillator model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectionForm {
    /// `ħ + (ħ/2)(μ₁ − μ₂) q₂`, which the oracle confirms.
    #[default]
    Exact,
    /// `(ħ/2)[1 + μ₁(q₁ + q₂) − μ₂ q₂]`.
    AsPublished,
}

/// Form of the product-of-oscillators model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NnForm {
    /// `(½ + ħ/4)(r₁² + r₂²) + ¼r₁²r₂² + ħ + ħ²/4`, the coherent expectation.
    #[default]
    Exact,
    /// `½(r₁² + r₂²) + ¼r₁²r₂²` plus the oracle's value at the origin.
    ConstantShift,
}

/// A classical Hamilton function on z = (q₁, q₂, p₁, p₂) or (q.., p..).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum ClassicalHamiltonian {
    SpinPairModel {
        omega: f64,
        mu_x: f64,
        mu_z: f64,
        j: f64,
        #[serde(default)]
        form: SpinModelForm,
    },
    OscillatorModel {
        mu1: f64,
        mu2: f64,
        hbar: f64,
        #[serde(default)]
        form: CorrectionForm,
    },
    HenonHeilesLimit {
        mu1: f64,
        mu2: f64,
    },
    OscillatorBilinearModel {
        lambda: f64,
        hbar: f64,
    },
    OscillatorNNModel {
        hbar: f64,
        #[serde(default)]
        form: NnForm,
    },
    /// Mean-field su(3) model in Darboux coordinates q_k + ip_k = √(2N) u_k
    /// with u₀ real (k = 1, 2).
    LipkinModel {
        omega: [f64; 3],
        mu: f64,
        n: usize,
    },
    /// Arbitrary polynomial in (q₁..q_n, p₁..p_n).
    GenericExpectation {
        dof: usize,
        hamiltonian: Polynomial,
    },
}

pub fn build_spin_pair_model(omega: f64, mu_x: f64, mu_z: f64, j: f64) -> Result<ClassicalHamiltonian> {
    if !(j > 0.0) {
        return Err(Error::InvalidArgument(format!("J must be positive, got {j}")));
    }
    Ok(ClassicalHamiltonian::SpinPairModel { omega, mu_x, mu_z, j, form: SpinModelForm::Expectation })
}

pub fn build_oscillator_model(mu1: f64, mu2: f64, hbar: f64) -> ClassicalHamiltonian {
    ClassicalHamiltonian::OscillatorModel { mu1, mu2, hbar, form: CorrectionForm::Exact }
}

pub fn build_henon_heiles(mu1: f64, mu2: f64) -> ClassicalHamiltonian {
    ClassicalHamiltonian::HenonHeilesLimit { mu1, mu2 }
}

pub fn build_nn_model(hbar: f64) -> ClassicalHamiltonian {
    ClassicalHamiltonian::OscillatorNNModel { hbar, form: NnForm::Exact }
}

/// Escape energy of ½|z|² + μ₁q₁²q₂ − (μ₂/3)q₂³: the lowest saddle value,
/// infinite when the potential is bounded below along every ray.
pub fn henon_heiles_escape_energy(mu1: f64, mu2: f64) -> f64 {
    let mut best = f64::INFINITY;
    if mu2 != 0.0 {
        best = best.min(1.0 / (6.0 * mu2 * mu2));
    }
    if mu1 != 0.0 {
        let q1sq = (mu2 + 2.0 * mu1) / (4.0 * mu1.powi(3));
        if q1sq > 0.0 {
            best = best.min(1.0 / (8.0 * mu1 * mu1) + mu2 / (24.0 * mu1.powi(3)));
        }
    }
    best
}

impl ClassicalHamiltonian {
    /// The classical model belonging to a quantum family.
    pub fn for_spec(spec: &HamiltonianSpec) -> Result<Self> {
        Ok(match *spec {
            HamiltonianSpec::SpinPair { omega, mu_x, mu_z, j } => build_spin_pair_model(omega, mu_x, mu_z, j)?,
            HamiltonianSpec::OscillatorCubic { mu1, mu2, hbar, .. } => build_oscillator_model(mu1, mu2, hbar),
            HamiltonianSpec::OscillatorBilinear { lambda, hbar, .. } => {
                ClassicalHamiltonian::OscillatorBilinearModel { lambda, hbar }
            }
            HamiltonianSpec::OscillatorNN { hbar, .. } => build_nn_model(hbar),
            HamiltonianSpec::Su3Lipkin { omega, mu, n } => ClassicalHamiltonian::LipkinModel { omega, mu, n },
            HamiltonianSpec::CustomMatrix { .. } => {
                return Err(Error::InvalidArgument("custom matrices have no closed-form classical model".into()))
            }
        })
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            ClassicalHamiltonian::SpinPairModel { .. } => "SpinPairModel",
            ClassicalHamiltonian::OscillatorModel { .. } => "OscillatorModel",
            ClassicalHamiltonian::HenonHeilesLimit { .. } => "HenonHeilesLimit",
            ClassicalHamiltonian::OscillatorBilinearModel { .. } => "OscillatorBilinearModel",
            ClassicalHamiltonian::OscillatorNNModel { .. } => "OscillatorNNModel",
            ClassicalHamiltonian::LipkinModel { .. } => "LipkinModel",
            ClassicalHamiltonian::GenericExpectation { .. } => "GenericExpectation",
        }
    }

    /// Whether `z` lies inside the chart.
    pub fn in_domain(&self, z: &[f64]) -> bool {
        match self {
            ClassicalHamiltonian::SpinPairModel { j, .. } => {
                z.len() == 4 && (0..2).all(|i| z[i] * z[i] + z[2 + i] * z[2 + i] < 4.0 * j)
            }
            ClassicalHamiltonian::LipkinModel { n, .. } => z.len() == 4 && z.iter().map(|x| x * x).sum::<f64>() < 2.0 * *n as f64,
            _ => z.len() == 2 * self.dof(),
        }
    }

    /// Coefficients (a, c₀, b_z, b_x) of a(r₁²+r₂²) + c₀ + b_z u₁u₂ + b_x q₁q₂s₁s₂.
    fn spin_coefficients(omega: f64, mu_x: f64, mu_z: f64, j: f64, form: SpinModelForm) -> [f64; 4] {
        match form {
            SpinModelForm::Expectation => [omega / 2.0, -2.0 * omega * j, mu_z / 4.0, mu_x / 4.0],
            SpinModelForm::AsPublished => [omega, 0.0, mu_z, mu_x],
        }
    }

    fn check_len(&self, z: &[f64]) -> Result<()> {
        let m = 2 * self.dof();
        if z.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: z.len() });
        }
        Ok(())
    }

    fn lipkin_parts(omega: &[f64; 3], mu: f64, n: usize, z: &[f64]) -> Result<(f64, [f64; 4])> {
        let nf = n as f64;
        let s = 1.0 / (2.0 * nf).sqrt();
        let (x1, x2, y1, y2) = (s * z[0], s * z[1], s * z[2], s * z[3]);
        let rho1 = x1 * x1 + y1 * y1;
        let rho2 = x2 * x2 + y2 * y2;
        let rest = 1.0 - rho1 - rho2;
        if !(rest > 0.0) {
            return Err(Error::Domain(format!("q² + p² = {} must be below 2N = {}", 2.0 * nf * (rho1 + rho2), 2.0 * nf)));
        }
        let c = 2.0 * mu * nf * (nf - 1.0);
        let (w1, w2) = (x1 * x1 - y1 * y1, x2 * x2 - y2 * y2);
        let a = x1 * x2 + y1 * y2;
        let b = x1 * y2 - y1 * x2;
        let e = nf * (omega[0] * rest + omega[1] * rho1 + omega[2] * rho2) - c * (rest * (w1 + w2) + a * a - b * b);
        let w = w1 + w2;
        let d = [
            nf * 2.0 * (omega[1] - omega[0]) * x1 - c * (-2.0 * x1 * w + 2.0 * rest * x1 + 2.0 * a * x2 - 2.0 * b * y2),
            nf * 2.0 * (omega[2] - omega[0]) * x2 - c * (-2.0 * x2 * w + 2.0 * rest * x2 + 2.0 * a * x1 + 2.0 * b * y1),
            nf * 2.0 * (omega[1] - omega[0]) * y1 - c * (-2.0 * y1 * w - 2.0 * rest * y1 + 2.0 * a * y2 + 2.0 * b * x2),
            nf * 2.0 * (omega[2] - omega[0]) * y2 - c * (-2.0 * y2 * w - 2.0 * rest * y2 + 2.0 * a * y1 - 2.0 * b * x1),
        ];
        Ok((e, d.map(|v| v * s)))
    }
}

impl PhaseSpaceHamiltonian for ClassicalHamiltonian {
    fn dof(&self) -> usize {
        match self {
            ClassicalHamiltonian::GenericExpectation { dof, .. } => *dof,
            _ => 2,
        }
    }

    fn energy(&self, z: &[f64]) -> Result<f64> {
        self.check_len(z)?;
        Ok(match self {
            &ClassicalHamiltonian::SpinPairModel { omega, mu_x, mu_z, j, form } => {
                let [a, c0, bz, bx] = Self::spin_coefficients(omega, mu_x, mu_z, j, form);
                let (q1, q2, p1, p2) = (z[0], z[1], z[2], z[3]);
                let (r1, r2) = (q1 * q1 + p1 * p1, q2 * q2 + p2 * p2);
                if !(r1 < 4.0 * j && r2 < 4.0 * j) {
                    return Err(Error::Domain(format!("q_i² + p_i² = ({r1}, {r2}) must be below 4J = {}", 4.0 * j)));
                }
                let (s1, s2) = ((4.0 * j - r1).sqrt(), (4.0 * j - r2).sqrt());
                a * (r1 + r2) + c0 + bz * (r1 - 2.0 * j) * (r2 - 2.0 * j) + bx * q1 * q2 * s1 * s2
            }
            &ClassicalHamiltonian::OscillatorModel { mu1, mu2, hbar, form } => {
                let (q1, q2) = (z[0], z[1]);
                let hh = henon_heiles(mu1, mu2, z);
                match form {
                    CorrectionForm::Exact => hh + hbar + 0.5 * hbar * (mu1 - mu2) * q2,
                    CorrectionForm::AsPublished => hh + 0.5 * hbar * (1.0 + mu1 * (q1 + q2) - mu2 * q2),
                }
            }
            &ClassicalHamiltonian::HenonHeilesLimit { mu1, mu2 } => henon_heiles(mu1, mu2, z),
            &ClassicalHamiltonian::OscillatorBilinearModel { lambda, hbar } => {
                0.5 * z.iter().map(|x| x * x).sum::<f64>() + lambda * z[0] * z[1] + hbar
            }
            &ClassicalHamiltonian::OscillatorNNModel { hbar, form } => {
                let (r1, r2) = (z[0] * z[0] + z[2] * z[2], z[1] * z[1] + z[3] * z[3]);
                match form {
                    NnForm::Exact => (0.5 + hbar / 4.0) * (r1 + r2) + 0.25 * r1 * r2 + hbar + hbar * hbar / 4.0,
                    NnForm::ConstantShift => 0.5 * (r1 + r2) + 0.25 * r1 * r2 + hbar + hbar * hbar / 4.0,
                }
            }
            ClassicalHamiltonian::LipkinModel { omega, mu, n } => Self::lipkin_parts(omega, *mu, *n, z)?.0,
            ClassicalHamiltonian::GenericExpectation { hamiltonian, .. } => hamiltonian.evaluate(z),
        })
    }

    fn gradient(&self, z: &[f64], g: &mut [f64]) -> Result<()> {
        self.check_len(z)?;
        match self {
            &ClassicalHamiltonian::SpinPairModel { omega, mu_x, mu_z, j, form } => {
                let [a, _, bz, bx] = Self::spin_coefficients(omega, mu_x, mu_z, j, form);
                let (q, p) = ([z[0], z[1]], [z[2], z[3]]);
                let r = [q[0] * q[0] + p[0] * p[0], q[1] * q[1] + p[1] * p[1]];
                if !(r[0] < 4.0 * j && r[1] < 4.0 * j) {
                    return Err(Error::Domain(format!("q_i² + p_i² = ({}, {}) must be below 4J = {}", r[0], r[1], 4.0 * j)));
                }
                let s = [(4.0 * j - r[0]).sqrt(), (4.0 * j - r[1]).sqrt()];
                let u = [r[0] - 2.0 * j, r[1] - 2.0 * j];
                let qq = q[0] * q[1];
                for i in 0..2 {
                    let o = 1 - i;
                    // d/dq_i and d/dp_i of each term; ∂s_i/∂x = −x/s_i
                    let coupling_q = bx * (q[o] * s[i] * s[o] - qq * s[o] * q[i] / s[i]);
                    let coupling_p = -bx * qq * s[o] * p[i] / s[i];
                    g[i] = 2.0 * a * q[i] + 2.0 * bz * q[i] * u[o] + coupling_q;
                    g[2 + i] = 2.0 * a * p[i] + 2.0 * bz * p[i] * u[o] + coupling_p;
                }
            }
            &ClassicalHamiltonian::OscillatorModel { mu1, mu2, hbar, form } => {
                henon_heiles_gradient(mu1, mu2, z, g);
                match form {
                    CorrectionForm::Exact => g[1] += 0.5 * hbar * (mu1 - mu2),
                    CorrectionForm::AsPublished => {
                        g[0] += 0.5 * hbar * mu1;
                        g[1] += 0.5 * hbar * (mu1 - mu2);
                    }
                }
            }
            &ClassicalHamiltonian::HenonHeilesLimit { mu1, mu2 } => henon_heiles_gradient(mu1, mu2, z, g),
            &ClassicalHamiltonian::OscillatorBilinearModel { lambda, .. } => {
                g.copy_from_slice(z);
                g[0] += lambda * z[1];
                g[1] += lambda * z[0];
            }
            &ClassicalHamiltonian::OscillatorNNModel { hbar, form } => {
                let (r1, r2) = (z[0] * z[0] + z[2] * z[2], z[1] * z[1] + z[3] * z[3]);
                let base = match form {
                    NnForm::Exact => 0.5 + hbar / 4.0,
                    NnForm::ConstantShift => 0.5,
                };
                let (f1, f2) = (2.0 * (base + 0.25 * r2), 2.0 * (base + 0.25 * r1));
                g[0] = f1 * z[0];
                g[2] = f1 * z[2];
                g[1] = f2 * z[1];
                g[3] = f2 * z[3];
            }
            ClassicalHamiltonian::LipkinModel { omega, mu, n } => {
                let (_, d) = Self::lipkin_parts(omega, *mu, *n, z)?;
                // lipkin_parts orders (x1, x2, y1, y2), the same as (q1, q2, p1, p2)
                g.copy_from_slice(&d);
            }
            ClassicalHamiltonian::GenericExpectation { hamiltonian, .. } => {
                g.copy_from_slice(&hamiltonian.gradient(z));
            }
        }
        Ok(())
    }

    fn escape_radius(&self) -> Option<f64> {
        match self {
            ClassicalHamiltonian::OscillatorModel { .. }
            | ClassicalHamiltonian::HenonHeilesLimit { .. }
            | ClassicalHamiltonian::OscillatorBilinearModel { .. }
            | ClassicalHamiltonian::OscillatorNNModel { .. }
            | ClassicalHamiltonian::GenericExpectation { .. } => Some(OSCILLATOR_ESCAPE_RADIUS),
            _ => None,
        }
    }

    fn describe(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap_or(serde_json::Value::Null)
    }
}

fn henon_heiles(mu1: f64, mu2: f64, z: &[f64]) -> f64 {
    let (q1, q2) = (z[0], z[1]);
    0.5 * z.iter().map(|x| x * x).sum::<f64>() + mu1 * q1 * q1 * q2 - mu2 / 3.0 * q2 * q2 * q2
}

fn henon_heiles_gradient(mu1: f64, mu2: f64, z: &[f64], g: &mut [f64]) {
    let (q1, q2) = (z[0], z[1]);
    g.copy_from_slice(z);
    g[0] += 2.0 * mu1 * q1 * q2;
    g[1] += mu1 * q1 * q1 - mu2 * q2 * q2;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::{action_bracket, gradient_check, integrate, IntegrateOptions};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn families() -> Vec<ClassicalHamiltonian> {
        vec![
            build_spin_pair_model(1.0, 0.7, 0.4, 0.5).unwrap(),
            ClassicalHamiltonian::SpinPairModel { omega: 1.3, mu_x: 1.0, mu_z: -0.5, j: 1.5, form: SpinModelForm::AsPublished },
            build_oscillator_model(1.0, 1.0, 0.1),
            ClassicalHamiltonian::OscillatorModel { mu1: 0.5, mu2: -1.0, hbar: 1.0, form: CorrectionForm::AsPublished },
            build_henon_heiles(1.0, 1.0),
            ClassicalHamiltonian::OscillatorBilinearModel { lambda: 0.5, hbar: 1.0 },
            build_nn_model(0.3),
            ClassicalHamiltonian::OscillatorNNModel { hbar: 1.0, form: NnForm::ConstantShift },
            ClassicalHamiltonian::LipkinModel { omega: [1.0, 1.2, 0.7], mu: 1.0 / 6.0, n: 4 },
            ClassicalHamiltonian::GenericExpectation {
                dof: 2,
                hamiltonian: Polynomial::parse("0.5*p1^2 + 0.5*p2^2 + q1^4 - q1*q2^2*p1", 2, true).unwrap(),
            },
        ]
    }

    fn random_interior(h: &ClassicalHamiltonian, rng: &mut ChaCha8Rng) -> Vec<f64> {
        loop {
            let z: Vec<f64> = (0..4).map(|_| rng.gen_range(-0.9..0.9)).collect();
            // stay clear of the chart boundary where the square roots blow up
            let shrunk: Vec<f64> = z.iter().map(|x| x * 1.1).collect();
            if h.in_domain(&shrunk) {
                return z;
            }
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for h in families() {
            for _ in 0..100 {
                let z = random_interior(&h, &mut rng);
                let err = gradient_check(&h, &z, 1e-6).unwrap();
                assert!(err < 1e-6, "{} at {z:?}: {err}", h.family_name());
            }
        }
    }

    #[test]
    fn published_spin_origin_value() {
        let h = ClassicalHamiltonian::SpinPairModel { omega: 1.0, mu_x: 0.0, mu_z: 1.0, j: 0.5, form: SpinModelForm::AsPublished };
        assert_eq!(h.energy(&[0.0; 4]).unwrap(), 1.0);
        // the two forms differ by the affine map Published(ω) = 4·Expectation(ω/2) + 4ωJ
        let e = build_spin_pair_model(0.5, 0.3, 1.0, 0.5).unwrap();
        let p = ClassicalHamiltonian::SpinPairModel { omega: 1.0, mu_x: 0.3, mu_z: 1.0, j: 0.5, form: SpinModelForm::AsPublished };
        let z = [0.2, -0.4, 0.5, 0.1];
        assert!((p.energy(&z).unwrap() - (4.0 * e.energy(&z).unwrap() + 2.0)).abs() < 1e-14);
    }

    #[test]
    fn spin_domain_is_enforced() {
        let h = build_spin_pair_model(1.0, 1.0, 0.0, 0.5).unwrap();
        assert!(matches!(h.energy(&[1.5, 0.0, 0.0, 0.0]), Err(Error::Domain(_))));
        assert!(build_spin_pair_model(1.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn symmetric_spin_model_brackets_vanish() {
        let h = build_spin_pair_model(1.0, 0.0, 1.0, 0.5).unwrap();
        let broken = build_spin_pair_model(1.0, 1.0, 0.0, 0.5).unwrap();
        let z = [0.3, -0.2, 0.4, 0.6];
        for i in 0..2 {
            assert!(action_bracket(&h, &z, i).unwrap().abs() < 1e-15);
            assert!(action_bracket(&broken, &z, i).unwrap().abs() > 1e-3);
        }
    }

    #[test]
    fn nn_brackets_vanish_and_actions_are_conserved() {
        let h = build_nn_model(1.0);
        let z = [0.3, -0.2, 0.4, 0.6];
        for i in 0..2 {
            assert!(action_bracket(&h, &z, i).unwrap().abs() < 1e-15);
        }
        let rec = integrate(&h, &z, 200.0, &IntegrateOptions::default()).unwrap();
        assert!(rec.action_drift().iter().all(|d| *d < 1e-9));
    }

    #[test]
    fn oscillator_limits() {
        let z = [0.2, -0.1, 0.05, 0.3];
        let hh = build_henon_heiles(1.0, 1.0).energy(&z).unwrap();
        let m = build_oscillator_model(1.0, 1.0, 0.0).energy(&z).unwrap();
        assert_eq!(hh, m);
        let iso = build_oscillator_model(0.0, 0.0, 0.25).energy(&z).unwrap();
        let r2: f64 = z.iter().map(|x| x * x).sum();
        assert!((iso - (0.5 * r2 + 0.25)).abs() < 1e-15);
    }

    #[test]
    fn escape_energies() {
        assert!((henon_heiles_escape_energy(1.0, 1.0) - 1.0 / 6.0).abs() < 1e-15);
        assert!((henon_heiles_escape_energy(-1.0, 1.0) - 1.0 / 12.0).abs() < 1e-15);
        assert!((henon_heiles_escape_energy(0.0, 1.0) - 1.0 / 6.0).abs() < 1e-15);
        assert!((henon_heiles_escape_energy(-1.0 / 6.0, 1.0) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn lipkin_without_coupling_rotates_each_mode() {
        // actions conserved, phases advance at ω_k − ω_1
        let h = ClassicalHamiltonian::LipkinModel { omega: [1.0, 1.5, 0.4], mu: 0.0, n: 6 };
        let z = [0.5, 0.3, 0.0, 0.0];
        let t = 3.0;
        let rec = integrate(&h, &z, t, &IntegrateOptions { sample_dt: t, ..Default::default() }).unwrap();
        let end = rec.last().unwrap();
        for (k, w) in [0.5f64, -0.6].iter().enumerate() {
            let angle = end[2 + k].atan2(end[k]);
            assert!((angle - (-w * t)).abs() < 1e-8, "{angle}");
        }
    }

    #[test]
    fn json_round_trip_and_strictness() {
        for h in families() {
            let text = serde_json::to_string(&h).unwrap();
            let back: ClassicalHamiltonian = serde_json::from_str(&text).unwrap();
            assert_eq!(back, h);
        }
        let bad = r#"{"family":"HenonHeilesLimit","mu1":1.0,"mu2":1.0,"extra":0}"#;
        assert!(serde_json::from_str::<ClassicalHamiltonian>(bad).is_err());
    }
}
