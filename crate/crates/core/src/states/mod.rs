//! State vectors, generalized coherent states and quantumness functionals.

mod coherent;
mod io;
mod quantumness;
mod random;

pub use coherent::{
    coherent_oscillator, coherent_spin, coherent_state, coherent_state_with, coherent_su3, glauber_amplitudes, spin_expectations,
    su3_amplitudes, su3_product_amplitudes, Coherent, DEFAULT_LEAKAGE_THRESHOLD,
};
pub use io::{read_state, write_grid_csv, write_state, GridRow, StateFile, STATE_SCHEMA};
pub use quantumness::{
    dispersion_products, family_minimum, generator_variances, quadratures, quantumness, quantumness_dispersion_product,
    quantumness_sum, DispersionConvention, GeneratorScale, Measure, QuantumnessOptions, QuantumnessProbe,
};
pub use random::{haar_state, haar_state_on};

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraRep, Factor};
use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-10;

/// Normalized pure state in the basis of a representation.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    amplitudes: DVector<Complex64>,
    factors: Vec<Factor>,
}

impl QuantumState {
    /// Errors unless the amplitudes are unit-norm to 1e-10 and sized for `rep`.
    pub fn new(amplitudes: DVector<Complex64>, rep: &AlgebraRep) -> Result<Self> {
        if amplitudes.len() != rep.dim_hilbert {
            return Err(Error::DimensionMismatch { expected: rep.dim_hilbert, found: amplitudes.len() });
        }
        let drift = (amplitudes.norm() - 1.0).abs();
        if drift > NORM_TOL {
            return Err(Error::NormDrift { drift, tolerance: NORM_TOL });
        }
        Ok(QuantumState { amplitudes, factors: rep.factors.clone() })
    }

    /// Rescales to unit norm; a zero vector is rejected.
    pub fn normalized(amplitudes: DVector<Complex64>, rep: &AlgebraRep) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidArgument("cannot normalize a zero or non-finite vector".into()));
        }
        Self::new(amplitudes.unscale(norm), rep)
    }

    pub(crate) fn from_parts_unchecked(amplitudes: DVector<Complex64>, factors: Vec<Factor>) -> Self {
        QuantumState { amplitudes, factors }
    }

    /// Basis state `index`.
    pub fn basis(index: usize, rep: &AlgebraRep) -> Result<Self> {
        if index >= rep.dim_hilbert {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range")));
        }
        let mut v = DVector::zeros(rep.dim_hilbert);
        v[index] = Complex64::new(1.0, 0.0);
        Self::new(v, rep)
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.amplitudes.as_slice()
    }

    pub fn into_amplitudes(self) -> DVector<Complex64> {
        self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &QuantumState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn with_phase(&self, theta: f64) -> QuantumState {
        QuantumState {
            amplitudes: self.amplitudes.map(|z| z * Complex64::from_polar(1.0, theta)),
            factors: self.factors.clone(),
        }
    }

    /// Tensor product, first factor most significant.
    pub fn tensor(&self, other: &QuantumState) -> QuantumState {
        let (a, b) = (&self.amplitudes, &other.amplitudes);
        let v = DVector::from_fn(a.len() * b.len(), |i, _| a[i / b.len()] * b[i % b.len()]);
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        QuantumState { amplitudes: v, factors }
    }

    pub fn check_basis(&self, rep: &AlgebraRep) -> Result<()> {
        if self.dim() != rep.dim_hilbert {
            return Err(Error::DimensionMismatch { expected: rep.dim_hilbert, found: self.dim() });
        }
        if self.factors != rep.factors {
            return Err(Error::InvalidArgument("state and representation bases differ".into()));
        }
        Ok(())
    }

    /// Population in the top two Fock levels of any oscillator factor.
    pub fn leakage(&self, rep: &AlgebraRep) -> Result<f64> {
        self.check_basis(rep)?;
        Ok(rep
            .leakage_mask()
            .iter()
            .zip(self.amplitudes.iter())
            .filter(|(m, _)| **m)
            .map(|(_, z)| z.norm_sqr())
            .sum())
    }
}

/// Chart used to label coherent states by real coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoherentFamily {
    /// α = (q + i p)/√(2ħ) per mode
    OscillatorGlauber,
    /// (q, p) per spin with q² + p² < 4J
    SpinStereo,
    /// two (q, p) pairs per su(3) factor, α_k = (q_k + i p_k)/√2
    SU3Symmetric,
}

/// Real coordinates (q1, p1, q2, p2, ...) of a coherent state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherentPoint {
    pub coords: Vec<f64>,
    pub hbar: f64,
    pub family: CoherentFamily,
}

impl CoherentPoint {
    pub fn new(coords: Vec<f64>, hbar: f64, family: CoherentFamily) -> Result<Self> {
        if coords.is_empty() || coords.len() % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "coherent coordinates come in (q, p) pairs, got {} values",
                coords.len()
            )));
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("coherent coordinates must be finite".into()));
        }
        Ok(CoherentPoint { coords, hbar, family })
    }

    /// The reference state of `family` with `pairs` coordinate pairs.
    pub fn origin(pairs: usize, hbar: f64, family: CoherentFamily) -> Result<Self> {
        Self::new(vec![0.0; 2 * pairs], hbar, family)
    }

    pub fn pairs(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn pair(&self, i: usize) -> (f64, f64) {
        (self.coords[2 * i], self.coords[2 * i + 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_h4_rep, build_su2_rep};

    #[test]
    fn rejects_unnormalized() {
        let rep = build_su2_rep(0.5).unwrap();
        let v = DVector::from_element(2, Complex64::new(1.0, 0.0));
        assert!(matches!(QuantumState::new(v.clone(), &rep), Err(Error::NormDrift { .. })));
        let s = QuantumState::normalized(v, &rep).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!(QuantumState::normalized(DVector::zeros(2), &rep).is_err());
    }

    #[test]
    fn basis_mismatch_detected() {
        let s = QuantumState::basis(0, &build_su2_rep(1.0).unwrap()).unwrap();
        assert!(s.check_basis(&build_h4_rep(2).unwrap()).is_err());
    }

    #[test]
    fn point_validation() {
        assert!(CoherentPoint::new(vec![0.1], 1.0, CoherentFamily::SpinStereo).is_err());
        assert!(CoherentPoint::new(vec![0.1, 0.2], 0.0, CoherentFamily::SpinStereo).is_err());
        assert!(CoherentPoint::new(vec![f64::NAN, 0.2], 1.0, CoherentFamily::SpinStereo).is_err());
        assert_eq!(CoherentPoint::origin(2, 1.0, CoherentFamily::OscillatorGlauber).unwrap().pairs(), 2);
    }
}
