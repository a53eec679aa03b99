//! The Schrödinger equation as a classical Hamiltonian flow in the real
//! coordinates Q = Re c / √2, P = Im c / √2 of the amplitude vector c.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::propagate::evolve;
use crate::error::{Error, Result};
use crate::linalg::Operator;
use crate::orbits::{hamilton_rhs, solve_at, Dop853Options, PhaseSpaceHamiltonian};
use crate::states::QuantumState;

/// Largest dimension accepted by the cross-check.
pub const FLOW_DIM_LIMIT: usize = 500;

/// Agreement required between the flow and the unitary propagator.
pub const FLOW_TOLERANCE: f64 = 1e-6;

/// E(Q, P) / (4ħ) with E = ⟨ψ|Ĥ|ψ⟩ and c = √2 (Q + iP). Its Hamilton
/// equations are exactly iħ ċ = Ĥ c.
pub struct ExpectationFlow<'a> {
    h: &'a Operator,
    hbar: f64,
}

impl<'a> ExpectationFlow<'a> {
    pub fn new(h: &'a Operator, hbar: f64) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::InvalidArgument("Hamiltonian must be square".into()));
        }
        if !(hbar > 0.0) {
            return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
        }
        Ok(ExpectationFlow { h, hbar })
    }

    fn amplitudes(z: &[f64]) -> Vec<Complex64> {
        let n = z.len() / 2;
        let s = std::f64::consts::SQRT_2;
        (0..n).map(|k| Complex64::new(s * z[k], s * z[n + k])).collect()
    }
}

/// Packs amplitudes into `[Q.., P..]`.
pub fn to_canonical(c: &[Complex64]) -> Vec<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    c.iter().map(|z| z.re * s).chain(c.iter().map(|z| z.im * s)).collect()
}

impl PhaseSpaceHamiltonian for ExpectationFlow<'_> {
    fn dof(&self) -> usize {
        self.h.nrows()
    }

    fn energy(&self, z: &[f64]) -> Result<f64> {
        Ok(self.h.expectation(&Self::amplitudes(z)).re / (4.0 * self.hbar))
    }

    fn gradient(&self, z: &[f64], grad: &mut [f64]) -> Result<()> {
        let n = self.dof();
        let hc = self.h.apply(&Self::amplitudes(z));
        // ∂E/∂Q = 2√2 Re(Hc), ∂E/∂P = 2√2 Im(Hc)
        let s = 2.0 * std::f64::consts::SQRT_2 / (4.0 * self.hbar);
        for k in 0..n {
            grad[k] = s * hc[k].re;
            grad[n + k] = s * hc[k].im;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlowComparison {
    pub times: Vec<f64>,
    /// `[Q.., P..]` at each time.
    pub points: Vec<Vec<f64>>,
    /// max over times and components of |c_flow − c_unitary|
    pub max_deviation: f64,
    /// max |Σ(Q² + P²) − ½|
    pub norm_drift: f64,
}

/// Integrates the real flow and checks it against [`evolve`]; a deviation
/// above [`FLOW_TOLERANCE`] is an error.
pub fn schrodinger_as_hamiltonian_flow(
    h: &Operator,
    psi0: &QuantumState,
    times: &[f64],
    hbar: f64,
) -> Result<FlowComparison> {
    let dim = psi0.dim();
    if dim > FLOW_DIM_LIMIT {
        return Err(Error::DimensionCap { dim, cap: FLOW_DIM_LIMIT });
    }
    if h.nrows() != dim {
        return Err(Error::DimensionMismatch { expected: h.nrows(), found: dim });
    }
    let flow = ExpectationFlow::new(h, hbar)?;
    let z0 = to_canonical(psi0.as_slice());
    let rhs = |_t: f64, z: &[f64], dz: &mut [f64]| hamilton_rhs(&flow, z, dz);
    let opts = Dop853Options { rtol: 1e-12, atol: 1e-13, ..Dop853Options::default() };
    let points = solve_at(rhs, &z0, times, opts)?;
    let exact = evolve(h, psi0, times, hbar)?;
    let mut max_deviation: f64 = 0.0;
    let mut norm_drift: f64 = 0.0;
    for (z, psi) in points.iter().zip(&exact) {
        let c = ExpectationFlow::amplitudes(z);
        for (a, b) in c.iter().zip(psi.as_slice()) {
            max_deviation = max_deviation.max((a - b).norm());
        }
        norm_drift = norm_drift.max((z.iter().map(|x| x * x).sum::<f64>() - 0.5).abs());
    }
    if max_deviation > FLOW_TOLERANCE {
        return Err(Error::Tolerance(format!(
            "Hamiltonian flow deviates from the unitary propagator by {max_deviation:.3e}"
        )));
    }
    Ok(FlowComparison { times: times.to_vec(), points, max_deviation, norm_drift })
}

/// Random Hermitian matrix with independent complex Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    let mut trip = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        trip.push((i, i, Complex64::new(rng.sample(StandardNormal), 0.0)));
        for j in i + 1..dim {
            let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) / std::f64::consts::SQRT_2;
            trip.push((i, j, z));
            trip.push((j, i, z.conj()));
        }
    }
    Operator::from_triplets(dim, dim, trip)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{su2_from_spin, Spin};
    use crate::qdyn::uniform_grid;
    use crate::states::haar_state;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_hamiltonian_rotates_each_plane() {
        let rep = su2_from_spin(Spin::from_twice(1));
        let h = Operator::diagonal(&[0.7, -1.3]);
        let psi0 = QuantumState::normalized(
            nalgebra::DVector::from_vec(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]),
            &rep,
        )
        .unwrap();
        let hbar = 0.5;
        let times = uniform_grid(3.0, 31);
        let out = schrodinger_as_hamiltonian_flow(&h, &psi0, &times, hbar).unwrap();
        let z0 = &out.points[0];
        for (t, z) in times.iter().zip(&out.points) {
            for (k, e) in [0.7f64, -1.3].iter().enumerate() {
                let r0 = z0[k].hypot(z0[2 + k]);
                assert!((z[k].hypot(z[2 + k]) - r0).abs() < 1e-10);
                let angle = z[2 + k].atan2(z[k]) - z0[2 + k].atan2(z0[k]);
                let want = -e * t / hbar;
                let wrapped = (angle - want).rem_euclid(2.0 * std::f64::consts::PI);
                assert!(wrapped.min(2.0 * std::f64::consts::PI - wrapped) < 1e-8);
            }
        }
    }

    #[test]
    fn random_hamiltonian_matches_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rep = su2_from_spin(Spin::from_twice(3));
        let h = random_hermitian(4, &mut rng);
        assert!(h.hermiticity_defect() == 0.0);
        let psi0 = haar_state(&rep, &mut rng).unwrap();
        let out = schrodinger_as_hamiltonian_flow(&h, &psi0, &uniform_grid(5.0, 51), 1.0).unwrap();
        assert!(out.max_deviation < 1e-8, "{}", out.max_deviation);
        assert!(out.norm_drift < 1e-10);
    }

    #[test]
    fn flow_gradient_is_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(3, &mut rng);
        let flow = ExpectationFlow::new(&h, 0.7).unwrap();
        let z = [0.1, -0.2, 0.3, 0.05, 0.2, -0.1];
        assert!(crate::orbits::gradient_check(&flow, &z, 1e-6).unwrap() < 1e-8);
    }
}
