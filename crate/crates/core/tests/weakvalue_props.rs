use proptest::prelude::*;
use weakmeas_core::fockspace::{
    amplitude_from_quadratures, displaced_thermal_state, make_operator, OperatorKind, QuadratureGrid,
};
use weakmeas_core::povm::{gaussian_kernel, sigma_from_efficiency, DetectorKernel};
use weakmeas_core::quasiprob::{conditional_expectation, BasisPair};
use weakmeas_core::weakvalues::{
    closed_profile, integrate_over, negativity_probability, p2_closed_profile, postselection_density,
    probability_below, Method, NumericProfile, ProfileObservable, StateParams, WeakValueEvaluator,
};

const OBSERVABLES: [(ProfileObservable, OperatorKind); 3] = [
    (ProfileObservable::MomentumSquared, OperatorKind::MomentumSquared),
    (ProfileObservable::Energy, OperatorKind::Hamiltonian),
    (ProfileObservable::Number, OperatorKind::Number),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn closed_profiles_match_trace_formula(
        ar in -2.0f64..2.0,
        ai in -2.0f64..2.0,
        nth in 0.0f64..1.0,
        eta in 0.5f64..=1.0,
    ) {
        let dim = 60;
        let sigma = sigma_from_efficiency(eta).unwrap();
        let prm = StateParams::new(ar, ai, nth, sigma).unwrap();
        let rho = displaced_thermal_state(amplitude_from_quadratures(ar, ai), nth, dim).unwrap();
        let k = gaussian_kernel(sigma).unwrap();
        let sd = prm.total_variance().sqrt();
        for (obs, kind) in OBSERVABLES {
            let prof = closed_profile(obs, &prm).unwrap();
            let ev = WeakValueEvaluator::new(&make_operator(kind, dim).unwrap(), &rho).unwrap();
            for i in 0..20 {
                let q = ar + sd * (-3.0 + 6.0 * i as f64 / 19.0);
                let v = ev.at(&k, q).unwrap();
                let want = prof.re_value(q);
                prop_assert!((v.re - want).abs() < 1e-6, "{:?} q={}: {} vs {}", obs, q, v.re, want);
            }
        }
    }

    #[test]
    fn p2_probability_is_monotone(
        ar in -3.0f64..3.0,
        ai in 0.0f64..2.0,
        nth in 0.0f64..2.0,
        s in 0.0f64..2.0,
        bump in 0.01f64..0.5,
    ) {
        let p = |ai: f64, nth: f64, s: f64| {
            let prof = p2_closed_profile(ar, ai, nth, s).unwrap();
            negativity_probability(&prof, Method::ClosedForm).unwrap().probability
        };
        let base = p(ai, nth, s);
        prop_assert!(p(ai + bump, nth, s) <= base);
        prop_assert!(p(ai, nth + bump, s) <= base);
        prop_assert!(p(ai, nth, s + bump) <= base);
        let qd = negativity_probability(&p2_closed_profile(ar, ai, nth, s).unwrap(), Method::Quadrature).unwrap();
        prop_assert!((qd.probability - base).abs() < 1e-9);
    }

    #[test]
    fn zero_point_band_contains_negative_band(
        ar in -3.0f64..3.0,
        ai in -2.0f64..2.0,
        nth in 0.0f64..1.0,
        s in 0.0f64..1.5,
    ) {
        let prm = StateParams::new(ar, ai, nth, s).unwrap();
        let h = closed_profile(ProfileObservable::Energy, &prm).unwrap();
        let below0 = probability_below(&h, 0.0, Method::Quadrature).unwrap().probability;
        let below_half = probability_below(&h, 0.5, Method::Quadrature).unwrap().probability;
        prop_assert!(below0 <= below_half + 1e-15);
        prop_assert!((0.0..=1.0).contains(&below0) && below_half <= 1.0 + 1e-12);
    }
}

/// `P[Re H_w < 0]` from the numeric conditional expectation in one basis.
fn numeric_negativity(
    basis: &BasisPair,
    rho: &weakmeas_core::fockspace::DensityOperator,
    k: &DetectorKernel,
    centre: f64,
    sd: f64,
) -> f64 {
    let h = make_operator(OperatorKind::Hamiltonian, rho.dim()).unwrap();
    let re = |q: f64| conditional_expectation(&h, rho, basis, k, q).unwrap().re;
    let scan: Vec<f64> = (0..=60)
        .map(|i| centre - 6.0 * sd + 12.0 * sd * i as f64 / 60.0)
        .collect();
    let np = NumericProfile::new(re, scan, 1e-12);
    let iv = np.intervals_below(re, 0.0, 1e-12);
    integrate_over(&iv, |q| postselection_density(rho, k, q), 0.25 * sd)
}

#[test]
fn negativity_is_representation_independent() {
    let g = QuadratureGrid::symmetric(9.0, 200).unwrap();
    let fock = BasisPair::position_fock(g.clone());
    let mom = BasisPair::position_momentum(g.clone(), g);
    for (ar, ai, nth, eta) in [(1.0, 0.0, 0.0, 1.0), (0.6, 0.3, 0.05, 1.0), (1.5, -0.2, 0.02, 0.9)] {
        let sigma = sigma_from_efficiency(eta).unwrap();
        let rho = displaced_thermal_state(amplitude_from_quadratures(ar, ai), nth, 30).unwrap();
        let k = gaussian_kernel(sigma).unwrap();
        let sd = StateParams::new(ar, ai, nth, sigma).unwrap().total_variance().sqrt();
        let a = numeric_negativity(&fock, &rho, &k, ar, sd);
        let b = numeric_negativity(&mom, &rho, &k, ar, sd);
        assert!(a > 0.0);
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}
