//! Dense Hermitian eigendecomposition, delegated to `faer`.

use faer::complex_native::c64;
use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::Operator;

#[derive(Clone, Debug)]
pub enum Eigenvectors {
    /// Real symmetric input: real orthogonal eigenvectors.
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

/// `H = V diag(values) V†` with eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Eigenvectors,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Coefficients `V† ψ` of a state in the eigenbasis.
    pub fn project(&self, psi: &DVector<Complex64>) -> DVector<Complex64> {
        match &self.vectors {
            Eigenvectors::Complex(v) => v.ad_mul(psi),
            Eigenvectors::Real(v) => {
                let re = v.tr_mul(&psi.map(|z| z.re));
                let im = v.tr_mul(&psi.map(|z| z.im));
                DVector::from_fn(re.len(), |i, _| Complex64::new(re[i], im[i]))
            }
        }
    }

    /// `V c`
    pub fn reconstruct(&self, coeffs: &DVector<Complex64>) -> DVector<Complex64> {
        match &self.vectors {
            Eigenvectors::Complex(v) => v * coeffs,
            Eigenvectors::Real(v) => {
                let re = v * coeffs.map(|z| z.re);
                let im = v * coeffs.map(|z| z.im);
                DVector::from_fn(re.len(), |i, _| Complex64::new(re[i], im[i]))
            }
        }
    }

    /// `exp(-i H t / hbar) ψ` given the eigenbasis coefficients of ψ.
    pub fn evolve_coeffs(&self, coeffs: &DVector<Complex64>, t: f64, hbar: f64) -> DVector<Complex64> {
        let phased = DVector::from_fn(coeffs.len(), |i, _| {
            coeffs[i] * Complex64::from_polar(1.0, -self.values[i] * t / hbar)
        });
        self.reconstruct(&phased)
    }

    /// `exp(-i H s) ψ` for a single state.
    pub fn apply_exp(&self, psi: &DVector<Complex64>, s: f64) -> DVector<Complex64> {
        self.evolve_coeffs(&self.project(psi), s, 1.0)
    }
}

/// Eigendecomposition of a Hermitian operator. Only the lower triangle is read.
pub fn eigh(h: &Operator) -> HermitianEigen {
    let n = h.nrows();
    if h.is_real() {
        let mut m = Mat::<f64>::zeros(n, n);
        for (r, c, v) in h.triplets() {
            m.write(r, c, v.re);
        }
        let eig = m.selfadjoint_eigendecomposition(Side::Lower);
        let s = eig.s().column_vector();
        let u = eig.u();
        HermitianEigen {
            values: (0..n).map(|i| s.read(i)).collect(),
            vectors: Eigenvectors::Real(DMatrix::from_fn(n, n, |i, j| u.read(i, j))),
        }
    } else {
        let mut m = Mat::<c64>::zeros(n, n);
        for (r, c, v) in h.triplets() {
            m.write(r, c, c64::new(v.re, v.im));
        }
        let eig = m.selfadjoint_eigendecomposition(Side::Lower);
        let s = eig.s().column_vector();
        let u = eig.u();
        HermitianEigen {
            values: (0..n).map(|i| s.read(i).re).collect(),
            vectors: Eigenvectors::Complex(DMatrix::from_fn(n, n, |i, j| {
                let z = u.read(i, j);
                Complex64::new(z.re, z.im)
            })),
        }
    }
}

/// `exp(A) ψ` for anti-Hermitian `A`, computed through the Hermitian
/// generator `K = iA` so that `exp(A) = exp(-iK)`.
pub fn expm_antihermitian_apply(a: &Operator, psi: &DVector<Complex64>) -> DVector<Complex64> {
    let k = a.scale(Complex64::new(0.0, 1.0));
    eigh(&k).apply_exp(psi, 1.0)
}
