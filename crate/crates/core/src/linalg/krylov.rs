//! Lanczos short-time propagation `ψ ↦ exp(-i H τ / ħ) ψ` for operators too
//! large to diagonalize densely.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::Operator;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Krylov<'a> {
    h: &'a Operator,
    /// Krylov subspace dimension.
    pub subspace: usize,
    /// Target local error per accepted substep (2-norm).
    pub tolerance: f64,
}

struct LanczosBasis {
    vectors: Vec<Vec<Complex64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// β_{m+1}; zero on invariant-subspace breakdown.
    residual: f64,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl<'a> Krylov<'a> {
    pub fn new(h: &'a Operator) -> Self {
        Krylov { h, subspace: 30, tolerance: 1e-12 }
    }

    fn lanczos(&self, v0: &[Complex64]) -> LanczosBasis {
        let n = v0.len();
        let m = self.subspace.min(n);
        let b0 = norm(v0);
        let mut vectors = vec![v0.iter().map(|z| z / b0).collect::<Vec<_>>()];
        let mut alpha = Vec::with_capacity(m);
        let mut beta = Vec::with_capacity(m);
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        let mut residual = 0.0;
        for j in 0..m {
            self.h.apply_into(&vectors[j], &mut w);
            let a = dot(&vectors[j], &w).re;
            alpha.push(a);
            // full reorthogonalization, twice
            for _ in 0..2 {
                for v in &vectors {
                    let proj = dot(v, &w);
                    w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= proj * vi);
                }
            }
            let b = norm(&w);
            if j + 1 == m {
                residual = b;
                break;
            }
            if b < 1e-13 {
                residual = 0.0;
                break;
            }
            beta.push(b);
            vectors.push(w.iter().map(|z| z / b).collect());
        }
        LanczosBasis { vectors, alpha, beta, residual }
    }

    /// Propagates over `dt` with adaptively chosen substeps.
    pub fn propagate(&self, psi: &DVector<Complex64>, dt: f64, hbar: f64) -> Result<DVector<Complex64>> {
        let mut state: Vec<Complex64> = psi.as_slice().to_vec();
        let mut remaining = dt;
        let mut tau = dt;
        let mut guard = 0usize;
        while remaining > 0.0 {
            guard += 1;
            if guard > 1_000_000 {
                return Err(Error::StepCollapse { t: dt - remaining, step: tau });
            }
            let scale = norm(&state);
            let basis = self.lanczos(&state);
            let k = basis.alpha.len();
            let mut t = DMatrix::<f64>::zeros(k, k);
            for i in 0..k {
                t[(i, i)] = basis.alpha[i];
                if i + 1 < k {
                    t[(i, i + 1)] = basis.beta[i];
                    t[(i + 1, i)] = basis.beta[i];
                }
            }
            let eig = SymmetricEigen::new(t);
            tau = tau.min(remaining);
            let coeffs = loop {
                // exp(-i T τ/ħ) e1 in the Lanczos basis
                let c = DVector::from_fn(k, |i, _| {
                    (0..k)
                        .map(|l| {
                            let ph = Complex64::from_polar(1.0, -eig.eigenvalues[l] * tau / hbar);
                            eig.eigenvectors[(i, l)] * ph * eig.eigenvectors[(0, l)]
                        })
                        .sum::<Complex64>()
                });
                let err = scale * basis.residual * c[k - 1].norm() * (tau / hbar).abs().max(1.0);
                if err <= self.tolerance || tau < 1e-14 * dt.abs().max(1.0) {
                    break c;
                }
                tau *= 0.5;
            };
            let mut next = vec![Complex64::new(0.0, 0.0); state.len()];
            for (ci, v) in coeffs.iter().zip(&basis.vectors) {
                let ci = ci * scale;
                next.iter_mut().zip(v).for_each(|(n, vi)| *n += ci * vi);
            }
            state = next;
            remaining -= tau;
            if remaining < 1e-15 * dt.abs().max(1.0) {
                remaining = 0.0;
            }
            tau *= 2.0;
        }
        Ok(DVector::from_vec(state))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigh;

    fn chain(n: usize) -> Operator {
        // tight-binding chain with an on-site ramp
        let mut trip = Vec::new();
        for i in 0..n {
            trip.push((i, i, Complex64::new(0.1 * i as f64, 0.0)));
            if i + 1 < n {
                trip.push((i, i + 1, Complex64::new(1.0, 0.2)));
                trip.push((i + 1, i, Complex64::new(1.0, -0.2)));
            }
        }
        Operator::from_triplets(n, n, trip)
    }

    #[test]
    fn agrees_with_dense_propagation() {
        let h = chain(120);
        let mut psi = DVector::from_element(120, Complex64::new(0.0, 0.0));
        psi[60] = Complex64::new(1.0, 0.0);
        let dense = eigh(&h).apply_exp(&psi, 3.7);
        let kry = Krylov::new(&h).propagate(&psi, 3.7, 1.0).unwrap();
        assert!((dense - &kry).camax() < 1e-10);
        assert!((kry.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invariant_subspace_breakdown_is_exact() {
        let h = Operator::diagonal(&[1.0, 2.0, 3.0, 4.0]);
        let psi = DVector::from_vec(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
        ]);
        let out = Krylov::new(&h).propagate(&psi, 2.0, 1.0).unwrap();
        for k in 0..4 {
            let expect = Complex64::from_polar(0.5, -(k as f64 + 1.0) * 2.0);
            assert!((out[k] - expect).norm() < 1e-12);
        }
    }
}
