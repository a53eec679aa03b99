use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qdof::algebra::{
    build_h4_rep, build_su2_rep, build_su3_symmetric_rep, closure_checks, direct_sum_rep, hermiticity_defect,
    sdf_catalogue, Chain, Su3Irrep,
};
use qdof::cmodel::{ClassicalHamiltonian, Polynomial, SpinModelForm};
use qdof::orbits::{action_bracket, gradient_check, integrate, IntegrateOptions, PhaseSpaceHamiltonian};
use qdof::qdyn::{
    build_hamiltonian, has_dynamical_symmetry, quantumness_trace, recurrence_fidelity, symmetry_residual,
    uniform_grid, HamiltonianSpec,
};
use qdof::states::{
    coherent_state, haar_state, quantumness, CoherentFamily, CoherentPoint, Measure, QuantumnessOptions,
};

fn chain() -> impl Strategy<Value = Chain> {
    let leaf = prop_oneof![Just(Chain::H4), Just(Chain::Su2), Just(Chain::Su3)];
    prop_oneof![leaf.clone(), prop::collection::vec(leaf, 2..4).prop_map(Chain::Sum)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generators_hermitian_and_closed(two_j in 1u32..8, n_max in 3usize..16, particles in 1usize..5) {
        for rep in [
            build_su2_rep(two_j as f64 / 2.0).unwrap(),
            build_h4_rep(n_max).unwrap(),
            build_su3_symmetric_rep(particles).unwrap(),
        ] {
            prop_assert!(hermiticity_defect(&rep) < 1e-12);
            for c in closure_checks(&rep).unwrap() {
                prop_assert!(c.residual.effective() < 1e-10, "{}: {:e}", c.relation, c.residual.effective());
            }
        }
    }

    #[test]
    fn factors_commute(two_j in 1u32..5, n_max in 3usize..8) {
        let rep = direct_sum_rep(&[build_su2_rep(two_j as f64 / 2.0).unwrap(), build_h4_rep(n_max).unwrap()]).unwrap();
        for c in closure_checks(&rep).unwrap().iter().filter(|c| c.relation.contains("_1") && c.relation.contains("_2")) {
            prop_assert!(c.residual.full < 1e-12, "{}", c.relation);
        }
    }

    #[test]
    fn sdf_arithmetic(c in chain(), generic in any::<bool>()) {
        let irrep = if generic { Su3Irrep::Generic } else { Su3Irrep::Symmetric };
        let r = sdf_catalogue(&c, irrep);
        prop_assert_eq!(2 * r.d, 2 * r.l + (r.n - r.l));
    }

    #[test]
    fn phase_invariance(seed in any::<u64>(), theta in 0.0f64..6.3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = build_su3_symmetric_rep(3).unwrap();
        let psi = haar_state(&rep, &mut rng).unwrap();
        let opts = QuantumnessOptions::default();
        let a = quantumness(&psi, &rep, Measure::VarianceSum, &opts).unwrap();
        let b = quantumness(&psi.with_phase(theta), &rep, Measure::VarianceSum, &opts).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn additivity_over_factors(seed in any::<u64>(), two_j in 1u32..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = build_su2_rep(two_j as f64 / 2.0).unwrap();
        let b = build_su3_symmetric_rep(2).unwrap();
        let sum = direct_sum_rep(&[a.clone(), b.clone()]).unwrap();
        let (pa, pb) = (haar_state(&a, &mut rng).unwrap(), haar_state(&b, &mut rng).unwrap());
        let opts = QuantumnessOptions::default();
        let whole = quantumness(&pa.tensor(&pb), &sum, Measure::VarianceSum, &opts).unwrap();
        let parts = quantumness(&pa, &a, Measure::VarianceSum, &opts).unwrap()
            + quantumness(&pb, &b, Measure::VarianceSum, &opts).unwrap();
        prop_assert!((whole - parts).abs() < 1e-10);
    }

    #[test]
    fn coherent_below_random(seed in any::<u64>(), q in -1.2f64..1.2, p in -1.2f64..1.2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = build_su2_rep(2.0).unwrap();
        let opts = QuantumnessOptions::default();
        let c = coherent_state(&CoherentPoint::new(vec![q, p], 1.0, CoherentFamily::SpinStereo).unwrap(), &rep).unwrap();
        let dc = quantumness(&c.state, &rep, Measure::VarianceSum, &opts).unwrap();
        let dr = quantumness(&haar_state(&rep, &mut rng).unwrap(), &rep, Measure::VarianceSum, &opts).unwrap();
        prop_assert!(dc <= dr + 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn traces_unitary_and_conservative(mu_x in -1.5f64..1.5, mu_z in -1.5f64..1.5, q in -0.9f64..0.9, p in -0.9f64..0.9) {
        let spec = HamiltonianSpec::SpinPair { omega: 1.0, mu_x, mu_z, j: 1.0 };
        let start = CoherentPoint::new(vec![q, p, -p, q], 1.0, CoherentFamily::SpinStereo).unwrap();
        let t = quantumness_trace(&spec, &start, &uniform_grid(20.0, 201)).unwrap();
        prop_assert!(t.norm_drift.iter().all(|d| *d < 1e-9));
        prop_assert!(t.energy_drift.iter().all(|d| *d < 1e-8));
    }

    #[test]
    fn symmetry_gives_constant_trace(omega in 0.2f64..2.0, mu_z in -2.0f64..2.0, two_j in 1u32..4) {
        let spec = HamiltonianSpec::SpinPair { omega, mu_x: 0.0, mu_z, j: two_j as f64 / 2.0 };
        let rep = spec.build_rep().unwrap().unwrap();
        let h = build_hamiltonian(&spec, &rep).unwrap();
        let cas: Vec<_> = spec.sdf_casimirs().iter().map(|l| rep.require(l).unwrap()).collect();
        prop_assert!(has_dynamical_symmetry(&symmetry_residual(&h, &cas, None).unwrap()));
        let start = CoherentPoint::origin(2, 1.0, CoherentFamily::SpinStereo).unwrap();
        let t = quantumness_trace(&spec, &start, &uniform_grid(20.0, 201)).unwrap();
        prop_assert!(t.excursion() < 1e-6);
    }

    #[test]
    fn equally_spaced_spectra_recur(a in 0.3f64..2.0, b in -2.0f64..2.0, two_j in 1u32..4) {
        let rep = build_su2_rep(two_j as f64 / 2.0).unwrap();
        let h = rep.require("Jx").unwrap().scale_real(a).add(&rep.require("Jz").unwrap().scale_real(b)).unwrap();
        let period = 2.0 * std::f64::consts::PI / (a * a + b * b).sqrt();
        let psi = haar_state(&rep, &mut ChaCha8Rng::seed_from_u64(two_j as u64)).unwrap();
        let f = recurrence_fidelity(&h, &psi, &uniform_grid(1.5 * period, 3001), 0.5 * period, 1.0).unwrap();
        prop_assert!(f > 1.0 - 1e-3);
    }

    #[test]
    fn classical_gradients(mu_x in -1.0f64..1.0, mu_z in -1.0f64..1.0, q in -0.6f64..0.6, p in -0.6f64..0.6) {
        let models = [
            ClassicalHamiltonian::SpinPairModel { omega: 1.0, mu_x, mu_z, j: 0.5, form: SpinModelForm::Expectation },
            ClassicalHamiltonian::SpinPairModel { omega: 1.0, mu_x, mu_z, j: 0.5, form: SpinModelForm::AsPublished },
            ClassicalHamiltonian::HenonHeilesLimit { mu1: mu_x, mu2: mu_z },
            ClassicalHamiltonian::LipkinModel { omega: [1.0, 1.3, 0.7], mu: mu_z, n: 6 },
        ];
        let z = [q, -p, p, 0.5 * q];
        for m in &models {
            prop_assert!(gradient_check(m, &z, 1e-6).unwrap() < 1e-6, "{}", m.family_name());
        }
    }

    #[test]
    fn brackets_match_quantum_symmetry(mu_x in prop_oneof![Just(0.0), -1.0f64..1.0], mu_z in -1.0f64..1.0, q in -0.6f64..0.6, p in -0.6f64..0.6) {
        let spec = HamiltonianSpec::SpinPair { omega: 1.0, mu_x, mu_z, j: 0.5 };
        let rep = spec.build_rep().unwrap().unwrap();
        let h = build_hamiltonian(&spec, &rep).unwrap();
        let cas: Vec<_> = spec.sdf_casimirs().iter().map(|l| rep.require(l).unwrap()).collect();
        let quantum = has_dynamical_symmetry(&symmetry_residual(&h, &cas, None).unwrap());
        let model = ClassicalHamiltonian::for_spec(&spec).unwrap();
        let z = [q, 0.3, p, -0.2];
        let bracket = (0..2).map(|i| action_bracket(&model, &z, i).unwrap().abs()).fold(0.0, f64::max);
        prop_assert_eq!(quantum, mu_x == 0.0);
        if mu_x == 0.0 {
            prop_assert!(bracket < 1e-12);
        } else if q.abs() > 1e-3 && p.abs() > 1e-3 && mu_x.abs() > 1e-3 {
            prop_assert!(bracket > 1e-8);
        }
    }

    #[test]
    fn orbits_reverse(q1 in -0.2f64..0.2, q2 in -0.2f64..0.2, p1 in -0.2f64..0.2) {
        let h = ClassicalHamiltonian::HenonHeilesLimit { mu1: 1.0, mu2: 1.0 };
        let z0 = [q1, q2, p1, 0.1];
        let fwd = integrate(&h, &z0, 20.0, &IntegrateOptions::default()).unwrap();
        let mut back = fwd.last().unwrap().to_vec();
        back[2] = -back[2];
        back[3] = -back[3];
        let rev = integrate(&h, &back, 20.0, &IntegrateOptions::default()).unwrap();
        let end = rev.last().unwrap();
        let err = (0..2).map(|i| (end[i] - z0[i]).abs().max((end[2 + i] + z0[2 + i]).abs())).fold(0.0, f64::max);
        prop_assert!(err < 1e-6);
        prop_assert!(fwd.energy_drift < 1e-9);
    }

    #[test]
    fn polynomial_text_round_trip(c in prop::collection::vec(-3i32..4, 6)) {
        let text = format!("{}*q1^2 + {}*q1*q2 + {}*q2^3 + {}*p1^2 + {}*p2 + {}", c[0], c[1], c[2], c[3], c[4], c[5]);
        let poly = Polynomial::parse(&text, 2, true).unwrap();
        let x = [0.3, -0.7, 1.1, 0.2];
        let direct = c[0] as f64 * 0.09 + c[1] as f64 * 0.3 * -0.7 + c[2] as f64 * (-0.7f64).powi(3)
            + c[3] as f64 * 1.21 + c[4] as f64 * 0.2 + c[5] as f64;
        prop_assert!((poly.evaluate(&x) - direct).abs() < 1e-12);
        let d = poly.derivative(0);
        prop_assert!((d.evaluate(&x) - (2.0 * c[0] as f64 * 0.3 + c[1] as f64 * -0.7)).abs() < 1e-12);
    }
}
