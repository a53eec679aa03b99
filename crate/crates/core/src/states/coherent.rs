use nalgebra::DVector;
use num_complex::Complex64;

use super::{CoherentFamily, CoherentPoint, QuantumState};
use crate::algebra::{su3_basis, AlgebraRep, Factor, Spin};
use crate::error::{Error, Result};

/// Default bound on top-two-level Fock population.
pub const DEFAULT_LEAKAGE_THRESHOLD: f64 = 1e-6;

/// A coherent state together with its truncation diagnostics.
#[derive(Clone, Debug)]
pub struct Coherent {
    pub state: QuantumState,
    /// population in the top two Fock levels after renormalization
    pub leakage: f64,
    /// `1 - ‖ψ‖²` before renormalization; the weight cut off by truncation
    pub truncation_defect: f64,
}

fn xlny(count: usize, ln_x: f64) -> f64 {
    if count == 0 {
        0.0
    } else {
        count as f64 * ln_x
    }
}

/// Poisson amplitudes `e^{-|α|²/2} α^k / √k!` for k = 0..=n_max, unnormalized.
pub fn glauber_amplitudes(alpha: Complex64, n_max: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    out.push(c);
    for k in 1..=n_max {
        c = c * alpha / (k as f64).sqrt();
        out.push(c);
    }
    out
}

/// `exp(ζJ₊ − ζ̄J₋)|j,−j⟩` in the m-descending basis, with ζ chosen so the
/// generator expectations are `(q/2)√(4J−r²)`, `−(p/2)√(4J−r²)`, `(r²−2J)/2`.
fn spin_amplitudes(q: f64, p: f64, spin: Spin) -> Result<Vec<Complex64>> {
    let j = spin.value();
    let r2 = q * q + p * p;
    if !(r2 < 4.0 * j) {
        return Err(Error::Domain(format!("q² + p² = {r2} must be below 4J = {}", 4.0 * j)));
    }
    let n = spin.twice() as usize;
    // |j,−j+k⟩ carries √C(2j,k) cos^{2j−k}(θ/2) (sin(θ/2) e^{−iφ})^k, and
    // sin(θ/2) e^{−iφ} = (q + i p)/(2√J).
    let w = Complex64::new(q, p) / (2.0 * j.sqrt());
    let ln_c = (1.0 - r2 / (4.0 * j)).sqrt().ln();
    let ln_w = w.norm().ln();
    let phase = w.arg();
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut ln_binom = 0.0;
    for k in 0..=n {
        if k > 0 {
            ln_binom += ((n - k + 1) as f64 / k as f64).ln();
        }
        let ln_mag = 0.5 * ln_binom + xlny(n - k, ln_c) + xlny(k, ln_w);
        out[n - k] = Complex64::from_polar(ln_mag.exp(), k as f64 * phase);
    }
    Ok(out)
}

/// Single-particle orbit point `exp(A) e₁` for A = α₁E₂₁ + α₂E₃₁ − h.c.
fn su3_single_particle(alpha: [Complex64; 2]) -> [Complex64; 3] {
    let s = (alpha[0].norm_sqr() + alpha[1].norm_sqr()).sqrt();
    let sinc = if s < 1e-8 { 1.0 - s * s / 6.0 } else { s.sin() / s };
    [Complex64::new(s.cos(), 0.0), alpha[0] * sinc, alpha[1] * sinc]
}

/// Amplitudes of the su(3) coherent state over [`su3_basis`] ordering.
pub fn su3_amplitudes(alpha: [Complex64; 2], particles: usize) -> Vec<Complex64> {
    su3_product_amplitudes(su3_single_particle(alpha), particles)
}

/// Amplitudes of `particles` bosons all in the unit single-particle mode `u`.
pub fn su3_product_amplitudes(u: [Complex64; 3], particles: usize) -> Vec<Complex64> {
    let ln_fact = |n: usize| (1..=n).map(|k| (k as f64).ln()).sum::<f64>();
    let ln_u: Vec<f64> = u.iter().map(|z| z.norm().ln()).collect();
    let arg_u: Vec<f64> = u.iter().map(|z| z.arg()).collect();
    let total = ln_fact(particles);
    su3_basis(particles)
        .iter()
        .map(|occ| {
            let mut ln_mag = 0.5 * total;
            let mut phase = 0.0;
            for i in 0..3 {
                ln_mag += xlny(occ[i], ln_u[i]) - 0.5 * ln_fact(occ[i]);
                phase += occ[i] as f64 * arg_u[i];
            }
            Complex64::from_polar(ln_mag.exp(), phase)
        })
        .collect()
}

/// Analytic spin coherent expectations (⟨Jx⟩, ⟨Jy⟩, ⟨Jz⟩).
pub fn spin_expectations(q: f64, p: f64, j: f64) -> Result<[f64; 3]> {
    let r2 = q * q + p * p;
    if !(r2 < 4.0 * j) {
        return Err(Error::Domain(format!("q² + p² = {r2} must be below 4J = {}", 4.0 * j)));
    }
    let s = (4.0 * j - r2).sqrt();
    Ok([q / 2.0 * s, -p / 2.0 * s, (r2 - 2.0 * j) / 2.0])
}

fn expected_family(f: &Factor) -> CoherentFamily {
    match f {
        Factor::H4 { .. } => CoherentFamily::OscillatorGlauber,
        Factor::Su2 { .. } => CoherentFamily::SpinStereo,
        Factor::Su3 { .. } => CoherentFamily::SU3Symmetric,
    }
}

fn pairs_needed(f: &Factor) -> usize {
    match f {
        Factor::Su3 { .. } => 2,
        _ => 1,
    }
}

/// Coherent state of any supported rep: a product over factors, consuming
/// one (q, p) pair per oscillator or spin and two per su(3) factor.
pub fn coherent_state(point: &CoherentPoint, rep: &AlgebraRep) -> Result<Coherent> {
    coherent_state_with(point, rep, DEFAULT_LEAKAGE_THRESHOLD)
}

pub fn coherent_state_with(point: &CoherentPoint, rep: &AlgebraRep, leakage_threshold: f64) -> Result<Coherent> {
    let needed: usize = rep.factors.iter().map(pairs_needed).sum();
    if point.pairs() != needed {
        return Err(Error::InvalidArgument(format!(
            "{} needs {needed} coordinate pairs, got {}",
            rep.kind,
            point.pairs()
        )));
    }
    let mut amplitudes = DVector::from_element(1, Complex64::new(1.0, 0.0));
    let mut next = 0;
    for factor in &rep.factors {
        if expected_family(factor) != point.family {
            return Err(Error::FamilyMismatch { family: format!("{:?}", point.family), rep: rep.kind.to_string() });
        }
        let local = match *factor {
            Factor::H4 { n_max } => {
                let (q, p) = point.pair(next);
                let alpha = Complex64::new(q, p) / (2.0 * point.hbar).sqrt();
                glauber_amplitudes(alpha, n_max)
            }
            Factor::Su2 { spin } => {
                let (q, p) = point.pair(next);
                spin_amplitudes(q, p, spin)?
            }
            Factor::Su3 { particles } => {
                let (q1, p1) = point.pair(next);
                let (q2, p2) = point.pair(next + 1);
                let s = std::f64::consts::FRAC_1_SQRT_2;
                su3_amplitudes([Complex64::new(q1, p1) * s, Complex64::new(q2, p2) * s], particles)
            }
        };
        next += pairs_needed(factor);
        let b = local.len();
        amplitudes = DVector::from_fn(amplitudes.len() * b, |i, _| amplitudes[i / b] * local[i % b]);
    }
    let norm2 = amplitudes.norm_squared();
    let truncation_defect = (1.0 - norm2).max(0.0);
    let state = QuantumState::normalized(amplitudes, rep)?;
    let leakage = if rep.has_oscillators() { state.leakage(rep)? } else { 0.0 };
    if leakage > leakage_threshold {
        return Err(Error::Leakage { leakage, threshold: leakage_threshold });
    }
    Ok(Coherent { state, leakage, truncation_defect })
}

fn require_only(rep: &AlgebraRep, family: CoherentFamily, point: &CoherentPoint) -> Result<()> {
    if point.family != family || rep.factors.iter().any(|f| expected_family(f) != family) {
        return Err(Error::FamilyMismatch { family: format!("{family:?}"), rep: rep.kind.to_string() });
    }
    Ok(())
}

/// Truncated Glauber state on h4 or a tensor product of h4 factors.
pub fn coherent_oscillator(point: &CoherentPoint, rep: &AlgebraRep) -> Result<Coherent> {
    require_only(rep, CoherentFamily::OscillatorGlauber, point)?;
    coherent_state(point, rep)
}

/// Spin coherent state on su(2) or a tensor product of su(2) factors.
pub fn coherent_spin(point: &CoherentPoint, rep: &AlgebraRep) -> Result<QuantumState> {
    require_only(rep, CoherentFamily::SpinStereo, point)?;
    coherent_state(point, rep).map(|c| c.state)
}

/// su(3) coherent state `exp(α₁E₂₁ + α₂E₃₁ − h.c.)|N,0,0⟩`.
pub fn coherent_su3(alpha: [Complex64; 2], rep: &AlgebraRep) -> Result<QuantumState> {
    match rep.factors.as_slice() {
        [Factor::Su3 { particles }] => QuantumState::normalized(DVector::from_vec(su3_amplitudes(alpha, *particles)), rep),
        _ => Err(Error::FamilyMismatch { family: "SU3Symmetric".into(), rep: rep.kind.to_string() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_h4_rep, build_su2_rep, build_su3_symmetric_rep, direct_sum_rep};
    use crate::linalg::expm_antihermitian_apply;

    fn osc_point(q: f64, p: f64) -> CoherentPoint {
        CoherentPoint::new(vec![q, p], 1.0, CoherentFamily::OscillatorGlauber).unwrap()
    }

    #[test]
    fn vacuum_at_origin() {
        let rep = build_h4_rep(10).unwrap();
        let c = coherent_oscillator(&osc_point(0.0, 0.0), &rep).unwrap();
        assert_eq!(c.state.amplitudes()[0], Complex64::new(1.0, 0.0));
        assert!(c.state.amplitudes().iter().skip(1).all(|z| *z == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn poisson_amplitudes_for_unit_alpha() {
        let rep = build_h4_rep(40).unwrap();
        // α = 1 ⇔ q = √2, p = 0 at ħ = 1
        let c = coherent_oscillator(&osc_point(2f64.sqrt(), 0.0), &rep).unwrap();
        let mut fact = 1.0;
        for k in 0..=40usize {
            if k > 0 {
                fact *= k as f64;
            }
            let want = (-0.5f64).exp() / fact.sqrt();
            assert!((c.state.amplitudes()[k].re - want).abs() < 1e-8, "k = {k}");
        }
    }

    #[test]
    fn lowering_expectation_is_alpha() {
        let rep = build_h4_rep(40).unwrap();
        let a = rep.require("a").unwrap();
        for (q, p) in [(0.3, -0.7), (1.2, 0.4), (-2.0, 1.0)] {
            let c = coherent_oscillator(&osc_point(q, p), &rep).unwrap();
            let want = Complex64::new(q, p) / 2f64.sqrt();
            assert!((a.expectation(c.state.as_slice()) - want).norm() < 1e-8);
        }
    }

    #[test]
    fn leakage_is_guarded() {
        let rep = build_h4_rep(10).unwrap();
        assert!(matches!(coherent_oscillator(&osc_point(4.0, 0.0), &rep), Err(Error::Leakage { .. })));
    }

    #[test]
    fn spin_origin_is_lowest_weight() {
        let rep = build_su2_rep(1.5).unwrap();
        let p = CoherentPoint::origin(1, 1.0, CoherentFamily::SpinStereo).unwrap();
        let s = coherent_spin(&p, &rep).unwrap();
        assert_eq!(s.amplitudes()[3], Complex64::new(1.0, 0.0));
        let jz = rep.require("Jz").unwrap().expectation(s.as_slice()).re;
        assert!((jz + 1.5).abs() < 1e-15);
    }

    #[test]
    fn spin_matches_exponential_of_ladders() {
        let rep = build_su2_rep(1.0).unwrap();
        let (jp, jm) = crate::algebra::su2_ladders(&rep, "").unwrap();
        let (q, p): (f64, f64) = (0.6, -0.9);
        let r = (q * q + p * p).sqrt();
        let theta = 2.0 * (r / 2.0).asin();
        let zeta = Complex64::new(q, p) / r * (theta / 2.0);
        let gen = jp.scale(zeta).sub(&jm.scale(zeta.conj())).unwrap();
        let mut low = DVector::zeros(3);
        low[2] = Complex64::new(1.0, 0.0);
        let want = expm_antihermitian_apply(&gen, &low);
        let point = CoherentPoint::new(vec![q, p], 1.0, CoherentFamily::SpinStereo).unwrap();
        let got = coherent_spin(&point, &rep).unwrap();
        assert!((got.amplitudes() - want).norm() < 1e-12);
    }

    #[test]
    fn spin_domain_enforced() {
        let rep = build_su2_rep(0.5).unwrap();
        let p = CoherentPoint::new(vec![1.0, 1.0], 1.0, CoherentFamily::SpinStereo).unwrap();
        assert!(matches!(coherent_spin(&p, &rep), Err(Error::Domain(_))));
    }

    #[test]
    fn su3_matches_exponential_of_shifts() {
        let rep = build_su3_symmetric_rep(3).unwrap();
        let alpha = [Complex64::new(0.4, -0.2), Complex64::new(-0.3, 0.5)];
        let e = |l: &str| rep.require(l).unwrap().clone();
        let gen = e("E21")
            .scale(alpha[0])
            .add(&e("E31").scale(alpha[1]))
            .unwrap()
            .sub(&e("E12").scale(alpha[0].conj()).add(&e("E13").scale(alpha[1].conj())).unwrap())
            .unwrap();
        let reference = QuantumState::basis(rep.dim_hilbert - 1, &rep).unwrap();
        assert_eq!(su3_basis(3)[rep.dim_hilbert - 1], [3, 0, 0]);
        let want = expm_antihermitian_apply(&gen, reference.amplitudes());
        let got = coherent_su3(alpha, &rep).unwrap();
        assert!((got.amplitudes() - want).norm() < 1e-12);
        let zero = coherent_su3([Complex64::new(0.0, 0.0); 2], &rep).unwrap();
        assert_eq!(zero.amplitudes(), reference.amplitudes());
    }

    #[test]
    fn su3_fundamental_reaches_every_ray() {
        let rep = build_su3_symmetric_rep(1).unwrap();
        // basis order (0,0,1), (0,1,0), (1,0,0)
        let target = [Complex64::new(0.2, 0.1), Complex64::new(-0.5, 0.3), Complex64::new(0.6, -0.4)];
        let norm = target.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<Complex64> = target.iter().map(|z| z / norm).collect();
        // u = (u1, u2, u3) = (v[2], v[1], v[0]) up to the phase of u1
        let phase = v[2] / v[2].norm();
        let u = [v[2] / phase, v[1] / phase, v[0] / phase];
        let s = u[0].re.acos();
        let alpha = [u[1] * s / s.sin(), u[2] * s / s.sin()];
        let got = coherent_su3(alpha, &rep).unwrap();
        let overlap: Complex64 = got.amplitudes().iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_over_factors() {
        let s = build_su2_rep(0.5).unwrap();
        let pair = direct_sum_rep(&[s.clone(), s.clone()]).unwrap();
        let p = CoherentPoint::new(vec![0.3, 0.1, -0.2, 0.5], 1.0, CoherentFamily::SpinStereo).unwrap();
        let both = coherent_spin(&p, &pair).unwrap();
        let a = coherent_spin(&CoherentPoint::new(vec![0.3, 0.1], 1.0, CoherentFamily::SpinStereo).unwrap(), &s).unwrap();
        let b = coherent_spin(&CoherentPoint::new(vec![-0.2, 0.5], 1.0, CoherentFamily::SpinStereo).unwrap(), &s).unwrap();
        assert!((both.amplitudes() - a.tensor(&b).amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn family_mismatch() {
        let rep = build_h4_rep(4).unwrap();
        let p = CoherentPoint::origin(1, 1.0, CoherentFamily::SpinStereo).unwrap();
        assert!(matches!(coherent_state(&p, &rep), Err(Error::FamilyMismatch { .. })));
    }
}
