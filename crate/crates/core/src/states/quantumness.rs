use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{coherent_state, CoherentFamily, CoherentPoint, QuantumState};
use crate::algebra::{AlgebraRep, Factor};
use crate::error::{Error, Result};
use crate::linalg::Operator;

/// Normalization of the generator list entering the variance sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorScale {
    /// generators exactly as catalogued (J = σ/2 for spins)
    #[default]
    AsListed,
    /// spin generators doubled to Pauli matrices
    Pauli,
    /// su(3) generators replaced by a Hilbert-Schmidt orthonormal basis of
    /// the same span (Gell-Mann normalization); spins and oscillators as listed
    Orthonormal,
}

/// How Δx and Δp are combined per oscillator mode.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DispersionConvention {
    /// Δx·Δp with standard deviations: ħ/2 per mode at minimum
    #[default]
    StdDev,
    /// Δx²·Δp² with variances: ħ²/4 per mode at minimum
    Variance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// sum of generator variances
    VarianceSum,
    /// sum over modes of the x-p dispersion product
    DispersionProduct,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuantumnessOptions {
    pub hbar: f64,
    pub scale: GeneratorScale,
    pub dispersion: DispersionConvention,
}

impl Default for QuantumnessOptions {
    fn default() -> Self {
        QuantumnessOptions { hbar: 1.0, scale: GeneratorScale::AsListed, dispersion: DispersionConvention::StdDev }
    }
}

/// Position and momentum quadratures of oscillator factor `k`:
/// x = √(ħ/2)(a + a†), p = −i√(ħ/2)(a − a†).
pub fn quadratures(rep: &AlgebraRep, k: usize, hbar: f64) -> Result<(Operator, Operator)> {
    if !matches!(rep.factors.get(k), Some(Factor::H4 { .. })) {
        return Err(Error::InvalidArgument(format!("factor {k} of {} is not an oscillator", rep.kind)));
    }
    let sfx = rep.factor_suffix(k);
    let a = rep.require(&format!("a{sfx}"))?;
    let ad = rep.require(&format!("adag{sfx}"))?;
    let s = (hbar / 2.0).sqrt();
    let x = a.add(ad)?.scale_real(s);
    let p = a.sub(ad)?.scale(Complex64::new(0.0, -s));
    Ok((x, p))
}

fn variance(op: &Operator, psi: &[Complex64]) -> f64 {
    let v = op.apply(psi);
    let mean: f64 = psi.iter().zip(&v).map(|(a, b)| (a.conj() * b).re).sum();
    let second: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    (second - mean * mean).max(0.0)
}

fn orthonormalize(ops: Vec<Operator>) -> Result<Vec<Operator>> {
    let Some(first) = ops.first() else { return Ok(ops) };
    let dim = first.nrows();
    let traceless = |g: &Operator| -> Result<Operator> {
        let shift = g.trace() / dim as f64;
        g.add_scaled(&Operator::identity(dim), -shift)
    };
    let target = traceless(first)?.hs_inner(&traceless(first)?).re;
    let mut basis: Vec<Operator> = Vec::new();
    for g in &ops {
        let mut v = traceless(g)?;
        for b in &basis {
            let overlap = b.hs_inner(&v) / target;
            v = v.add_scaled(b, -overlap)?;
        }
        let norm2 = v.hs_inner(&v).re;
        if norm2 > 1e-12 * target {
            basis.push(v.scale_real((target / norm2).sqrt()));
        }
    }
    Ok(basis)
}

/// Prepared observable list for repeated quantumness evaluation.
#[derive(Clone, Debug)]
pub struct QuantumnessProbe {
    measure: Measure,
    dispersion: DispersionConvention,
    dim: usize,
    factors: Vec<Factor>,
    /// (label, operator) for variance sums
    observables: Vec<(String, Operator)>,
    /// (x, p) per oscillator mode for dispersion products
    modes: Vec<(Operator, Operator)>,
}

impl QuantumnessProbe {
    pub fn new(rep: &AlgebraRep, measure: Measure, opts: &QuantumnessOptions) -> Result<Self> {
        if !(opts.hbar > 0.0) {
            return Err(Error::InvalidArgument(format!("hbar must be positive, got {}", opts.hbar)));
        }
        let mut observables = Vec::new();
        let mut modes = Vec::new();
        for (k, factor) in rep.factors.iter().enumerate() {
            let sfx = rep.factor_suffix(k);
            match factor {
                Factor::H4 { .. } => {
                    let (x, p) = quadratures(rep, k, opts.hbar)?;
                    if measure == Measure::VarianceSum {
                        observables.push((format!("x{sfx}"), x.clone()));
                        observables.push((format!("p{sfx}"), p.clone()));
                    }
                    modes.push((x, p));
                }
                Factor::Su2 { .. } | Factor::Su3 { .. } => {
                    if measure == Measure::DispersionProduct {
                        return Err(Error::FamilyMismatch {
                            family: "dispersion product".into(),
                            rep: rep.kind.to_string(),
                        });
                    }
                    let listed: Vec<&crate::algebra::Generator> = rep
                        .quantumness_generators()
                        .filter(|g| sfx.is_empty() || g.label.ends_with(&sfx))
                        .collect();
                    let is_su2 = matches!(factor, Factor::Su2 { .. });
                    match (opts.scale, is_su2) {
                        (GeneratorScale::Pauli, true) => observables
                            .extend(listed.iter().map(|g| (g.label.clone(), g.op.scale_real(2.0)))),
                        (GeneratorScale::Orthonormal, false) => {
                            let ops = orthonormalize(listed.iter().map(|g| g.op.clone()).collect())?;
                            observables.extend(ops.into_iter().enumerate().map(|(i, op)| (format!("G{}{sfx}", i + 1), op)));
                        }
                        _ => observables.extend(listed.iter().map(|g| (g.label.clone(), g.op.clone()))),
                    }
                }
            }
        }
        if measure == Measure::DispersionProduct && modes.is_empty() {
            return Err(Error::FamilyMismatch { family: "dispersion product".into(), rep: rep.kind.to_string() });
        }
        Ok(QuantumnessProbe {
            measure,
            dispersion: opts.dispersion,
            dim: rep.dim_hilbert,
            factors: rep.factors.clone(),
            observables,
            modes,
        })
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    fn check(&self, state: &QuantumState) -> Result<()> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: state.dim() });
        }
        if state.factors() != self.factors.as_slice() {
            return Err(Error::InvalidArgument("state and representation bases differ".into()));
        }
        Ok(())
    }

    pub fn variances(&self, state: &QuantumState) -> Result<Vec<(String, f64)>> {
        self.check(state)?;
        Ok(self.observables.iter().map(|(l, op)| (l.clone(), variance(op, state.as_slice()))).collect())
    }

    pub fn dispersion_products(&self, state: &QuantumState) -> Result<Vec<f64>> {
        self.check(state)?;
        Ok(self.modes.iter().map(|(x, p)| self.combine(x, p, state.as_slice())).collect())
    }

    fn combine(&self, x: &Operator, p: &Operator, psi: &[Complex64]) -> f64 {
        let (vx, vp) = (variance(x, psi), variance(p, psi));
        match self.dispersion {
            DispersionConvention::StdDev => (vx * vp).sqrt(),
            DispersionConvention::Variance => vx * vp,
        }
    }

    /// Evaluates on raw amplitudes (assumed normalized and in this basis).
    pub fn evaluate_raw(&self, psi: &[Complex64]) -> f64 {
        match self.measure {
            Measure::VarianceSum => self.observables.iter().map(|(_, op)| variance(op, psi)).sum(),
            Measure::DispersionProduct => self.modes.iter().map(|(x, p)| self.combine(x, p, psi)).sum(),
        }
    }

    pub fn evaluate(&self, state: &QuantumState) -> Result<f64> {
        self.check(state)?;
        Ok(self.evaluate_raw(state.as_slice()))
    }
}

/// Σ_i Var(L_i) over the quantumness generator list (quadratures x, p for
/// oscillator factors).
pub fn quantumness_sum(state: &QuantumState, rep: &AlgebraRep, opts: &QuantumnessOptions) -> Result<f64> {
    state.check_basis(rep)?;
    QuantumnessProbe::new(rep, Measure::VarianceSum, opts)?.evaluate(state)
}

/// Per-generator variances, labeled.
pub fn generator_variances(state: &QuantumState, rep: &AlgebraRep, opts: &QuantumnessOptions) -> Result<Vec<(String, f64)>> {
    state.check_basis(rep)?;
    QuantumnessProbe::new(rep, Measure::VarianceSum, opts)?.variances(state)
}

/// Per-mode Δx·Δp (or Δx²·Δp² under [`DispersionConvention::Variance`]).
pub fn dispersion_products(state: &QuantumState, rep: &AlgebraRep, opts: &QuantumnessOptions) -> Result<Vec<f64>> {
    state.check_basis(rep)?;
    QuantumnessProbe::new(rep, Measure::DispersionProduct, opts)?.dispersion_products(state)
}

pub fn quantumness_dispersion_product(state: &QuantumState, rep: &AlgebraRep, opts: &QuantumnessOptions) -> Result<f64> {
    Ok(dispersion_products(state, rep, opts)?.iter().sum())
}

pub fn quantumness(state: &QuantumState, rep: &AlgebraRep, measure: Measure, opts: &QuantumnessOptions) -> Result<f64> {
    state.check_basis(rep)?;
    QuantumnessProbe::new(rep, measure, opts)?.evaluate(state)
}

/// Quantumness of the reference coherent state (q = p = 0 in every chart).
pub fn family_minimum(rep: &AlgebraRep, measure: Measure, opts: &QuantumnessOptions) -> Result<f64> {
    let family = match rep.factors.first() {
        Some(Factor::H4 { .. }) => CoherentFamily::OscillatorGlauber,
        Some(Factor::Su2 { .. }) => CoherentFamily::SpinStereo,
        Some(Factor::Su3 { .. }) => CoherentFamily::SU3Symmetric,
        None => return Err(Error::InvalidArgument("empty representation".into())),
    };
    let pairs = rep.factors.iter().map(|f| if matches!(f, Factor::Su3 { .. }) { 2 } else { 1 }).sum();
    let point = CoherentPoint::origin(pairs, opts.hbar, family)?;
    let reference = coherent_state(&point, rep)?;
    quantumness(&reference.state, rep, measure, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_h4_rep, build_su2_rep, build_su3_symmetric_rep, direct_sum_rep};
    use nalgebra::DVector;

    fn opts() -> QuantumnessOptions {
        QuantumnessOptions::default()
    }

    #[test]
    fn spin_half_down_state() {
        let rep = build_su2_rep(0.5).unwrap();
        let down = QuantumState::basis(1, &rep).unwrap();
        assert!((quantumness_sum(&down, &rep, &opts()).unwrap() - 0.5).abs() < 1e-15);
        let pauli = QuantumnessOptions { scale: GeneratorScale::Pauli, ..opts() };
        assert!((quantumness_sum(&down, &rep, &pauli).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn bell_state_exceeds_product() {
        let s = build_su2_rep(0.5).unwrap();
        let pair = direct_sum_rep(&[s.clone(), s]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = QuantumState::new(
            DVector::from_vec(vec![0.0, h, h, 0.0].into_iter().map(|x| Complex64::new(x, 0.0)).collect()),
            &pair,
        )
        .unwrap();
        let product = QuantumState::basis(3, &pair).unwrap();
        let qb = quantumness_sum(&bell, &pair, &opts()).unwrap();
        let qp = quantumness_sum(&product, &pair, &opts()).unwrap();
        assert!((qp - 1.0).abs() < 1e-15);
        assert!((qb - 1.5).abs() < 1e-14, "{qb}");
    }

    #[test]
    fn vacuum_and_fock_dispersion() {
        let rep = build_h4_rep(8).unwrap();
        let vac = QuantumState::basis(0, &rep).unwrap();
        assert!((quantumness_dispersion_product(&vac, &rep, &opts()).unwrap() - 0.5).abs() < 1e-14);
        let one = QuantumState::basis(1, &rep).unwrap();
        assert!((quantumness_dispersion_product(&one, &rep, &opts()).unwrap() - 1.5).abs() < 1e-14);
        let half = QuantumnessOptions { hbar: 0.1, ..opts() };
        assert!((quantumness_dispersion_product(&vac, &rep, &half).unwrap() - 0.05).abs() < 1e-15);
    }

    #[test]
    fn two_mode_conventions() {
        let h = build_h4_rep(6).unwrap();
        let pair = direct_sum_rep(&[h.clone(), h]).unwrap();
        let vac = QuantumState::basis(0, &pair).unwrap();
        assert!((quantumness_dispersion_product(&vac, &pair, &opts()).unwrap() - 1.0).abs() < 1e-14);
        let var = QuantumnessOptions { dispersion: DispersionConvention::Variance, ..opts() };
        assert!((quantumness_dispersion_product(&vac, &pair, &var).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn dispersion_rejects_spins() {
        let rep = build_su2_rep(1.0).unwrap();
        let s = QuantumState::basis(0, &rep).unwrap();
        assert!(quantumness_dispersion_product(&s, &rep, &opts()).is_err());
    }

    #[test]
    fn orthonormal_su3_is_gell_mann_like() {
        let rep = build_su3_symmetric_rep(1).unwrap();
        let probe = QuantumnessProbe::new(&rep, Measure::VarianceSum, &QuantumnessOptions { scale: GeneratorScale::Orthonormal, ..opts() }).unwrap();
        assert_eq!(probe.observables.len(), 8);
        for (i, (_, a)) in probe.observables.iter().enumerate() {
            for (j, (_, b)) in probe.observables.iter().enumerate() {
                let want = if i == j { 2.0 } else { 0.0 };
                assert!((a.hs_inner(b).re - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn family_minima() {
        let spin = build_su2_rep(2.5).unwrap();
        assert!((family_minimum(&spin, Measure::VarianceSum, &opts()).unwrap() - 2.5).abs() < 1e-12);
        let h = build_h4_rep(5).unwrap();
        assert!((family_minimum(&h, Measure::DispersionProduct, &opts()).unwrap() - 0.5).abs() < 1e-14);
    }
}
