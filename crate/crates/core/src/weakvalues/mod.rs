//! Weak values under imperfect postselection, closed-form profiles on
//! displaced thermal states, negativity probabilities and the
//! strange-value categories.

mod probability;
mod profile;
mod trace;

pub use probability::{
    bracket_roots, gaussian_mass, gaussian_mass_erfc, integrate_over, negativity_probability, probability_below,
    Method, NegativityProbability, NumericProfile,
};
pub use profile::{
    closed_profile, h_closed_profile, n_closed_profile, p2_closed_profile, quadratic_roots, ProfileObservable,
    StateParams, WeakValueProfile, DISCRIMINANT_TOL, LINEAR_TOL,
};
pub use trace::{postselection_density, weak_value, WeakValueEvaluator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrangeCategory {
    NotStrange,
    /// Below the zero-point bound but not below the spectrum's floor.
    CategoryI,
    /// Below every classical positive-energy value.
    CategoryII,
}

impl StrangeCategory {
    pub fn label(self) -> &'static str {
        match self {
            Self::NotStrange => "not_strange",
            Self::CategoryI => "category_i",
            Self::CategoryII => "category_ii",
        }
    }
}

/// `(zero-point bound, positivity bound)` for each observable: `H` uses
/// `(1/2, 0)`, `n` the shifted `(0, -1/2)`, and `p^2` has no zero-point
/// band so both are 0.
pub fn strange_thresholds(obs: ProfileObservable) -> (f64, f64) {
    match obs {
        ProfileObservable::Energy => (0.5, 0.0),
        ProfileObservable::Number => (0.0, -0.5),
        ProfileObservable::MomentumSquared => (0.0, 0.0),
    }
}

pub fn classify_value(obs: ProfileObservable, re_value: f64) -> StrangeCategory {
    let (upper, lower) = strange_thresholds(obs);
    if re_value >= upper {
        StrangeCategory::NotStrange
    } else if re_value >= lower {
        StrangeCategory::CategoryI
    } else {
        StrangeCategory::CategoryII
    }
}

pub fn classify_strange(profile: &WeakValueProfile, q: f64) -> StrangeCategory {
    classify_value(profile.observable, profile.re_value(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{
        amplitude_from_quadratures, coherent_state, displaced_thermal_state, make_operator, DensityOperator,
        Observable, OperatorKind,
    };
    use crate::povm::{gaussian_kernel, DetectorKernel};
    use crate::special::erfc;
    use num_complex::Complex64;
    #[allow(unused_imports)]
    use num_traits::Float;

    #[test]
    fn identity_and_eigenstates() {
        let rho = displaced_thermal_state(amplitude_from_quadratures(0.4, 0.9), 0.3, 30).unwrap();
        let id = Observable::identity(30).unwrap();
        let k = gaussian_kernel(0.4).unwrap();
        for phi in [-2.0, 0.0, 1.5] {
            assert!((weak_value(&id, &rho, &k, phi).unwrap() - 1.0).norm() < 1e-12);
        }
        let n = make_operator(OperatorKind::Number, 30).unwrap();
        let fock = DensityOperator::fock(3, 30).unwrap();
        for phi in [-1.3, 0.2, 2.0] {
            let v = weak_value(&n, &fock, &DetectorKernel::delta(), phi).unwrap();
            assert!((v - 3.0).norm() < 1e-12);
            let v = weak_value(&n, &fock, &k, phi).unwrap();
            assert!((v - 3.0).norm() < 1e-12);
        }
    }

    #[test]
    fn undefined_far_in_the_tail() {
        let rho = coherent_state(Complex64::new(0.0, 0.0), 20).unwrap();
        let n = make_operator(OperatorKind::Number, 20).unwrap();
        assert!(matches!(
            weak_value(&n, &rho, &DetectorKernel::delta(), 12.0),
            Err(crate::Error::UndefinedWeakValue(_))
        ));
    }

    #[test]
    fn p2_trace_matches_closed_at_two() {
        let rho = coherent_state(Complex64::new(0.0, 0.0), 40).unwrap();
        let p2 = make_operator(OperatorKind::MomentumSquared, 40).unwrap();
        let v = weak_value(&p2, &rho, &DetectorKernel::delta(), 2.0).unwrap();
        let prof = p2_closed_profile(0.0, 0.0, 0.0, 0.0).unwrap();
        assert!((v.re - prof.re_value(2.0)).abs() < 1e-8);
    }

    #[test]
    fn p2_profile_examples() {
        let prof = p2_closed_profile(0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(prof.roots.len(), 2);
        assert!((prof.roots[0] + 1.0).abs() < 1e-15 && (prof.roots[1] - 1.0).abs() < 1e-15);
        assert!((prof.re_value(0.0) - 1.0).abs() < 1e-15);
        for r in &prof.roots {
            assert!(prof.re_value(*r).abs() < 1e-12);
        }
        let generic = quadratic_roots(prof.a, prof.b, prof.c);
        assert!((generic[0] - prof.roots[0]).abs() < 1e-12);
        // translation in alpha_r
        let moved = p2_closed_profile(3.0, 0.0, 0.0, 0.0).unwrap();
        for q in [-1.0, 0.3, 2.0] {
            assert!((moved.re_value(q + 3.0) - prof.re_value(q)).abs() < 1e-12);
        }
    }

    #[test]
    fn h_profile_examples() {
        let h = h_closed_profile(1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(h.a, 0.0);
        for q in [-2.0, -1.0, 0.0, 0.5] {
            assert!((h.re_value(q) - q).abs() < 1e-15);
        }
        assert_eq!(h.roots, alloc::vec![0.0]);
        let h = h_closed_profile(0.0, 0.7, 0.0, 0.0).unwrap();
        assert!(h.roots.is_empty());
        assert_eq!(h.b, 0.0);
        assert!((h.c - (0.5 + 0.49 / 2.0)).abs() < 1e-15);
        assert!(h.negative_intervals().is_empty());
        let thermal = h_closed_profile(0.3, 0.0, 0.4, 0.2).unwrap();
        assert!(thermal.a > 0.0);
    }

    #[test]
    fn n_profile_examples() {
        for (ar, ai, nth, s) in [(0.3, 0.1, 0.2, 0.4), (1.0, 0.0, 0.0, 0.0), (2.0, -1.0, 1.0, 0.0)] {
            let h = h_closed_profile(ar, ai, nth, s).unwrap();
            let n = n_closed_profile(ar, ai, nth, s).unwrap();
            for q in [-1.0, 0.0, 2.5] {
                assert!((n.re_value(q) - (h.re_value(q) - 0.5)).abs() < 1e-14);
            }
        }
        let n = n_closed_profile(0.1, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(n.roots.len(), 1);
        assert!(n.re_value(n.roots[0]).abs() < 1e-10);
        let vac = n_closed_profile(0.0, 0.0, 0.0, 0.0).unwrap();
        for q in [-3.0, 0.0, 0.3] {
            assert_eq!(vac.re_value(q), 0.0);
        }
    }

    #[test]
    fn probability_examples() {
        for ar in [0.0, 1.0, 5.0, 50.0] {
            let prof = p2_closed_profile(ar, 0.0, 0.0, 0.0).unwrap();
            let cf = negativity_probability(&prof, Method::ClosedForm).unwrap();
            assert!((cf.probability - erfc(1.0)).abs() < 1e-15);
            let qd = negativity_probability(&prof, Method::Quadrature).unwrap();
            assert!((qd.probability - erfc(1.0)).abs() < 1e-10, "{}", qd.probability);
        }
        let h = h_closed_profile(1.0, 0.0, 0.0, 0.0).unwrap();
        let cf = negativity_probability(&h, Method::ClosedForm).unwrap().probability;
        assert!((cf - 0.5 * erfc(1.0)).abs() < 1e-15);
        assert!((cf - 0.0786).abs() < 1e-4);
        let qd = negativity_probability(&h, Method::Quadrature).unwrap().probability;
        assert!((qd - cf).abs() < 1e-10);

        let near = n_closed_profile(0.02, 0.0, 0.0, 0.0).unwrap();
        assert!(negativity_probability(&near, Method::ClosedForm).unwrap().probability >= 0.49);
        let zero = n_closed_profile(0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(
            negativity_probability(&zero, Method::ClosedForm).unwrap().probability,
            0.0
        );
        assert_eq!(
            negativity_probability(&zero, Method::Quadrature).unwrap().probability,
            0.0
        );

        let noisy = h_closed_profile(1.0, 0.0, 0.3, 0.4).unwrap();
        assert_eq!(
            negativity_probability(&noisy, Method::ClosedForm),
            Err(crate::Error::ClosedFormUnavailable)
        );
        assert!(probability_below(&noisy, 0.5, Method::ClosedForm).is_err());
    }

    #[test]
    fn quadrature_matches_erfc_mass() {
        let prof = h_closed_profile(1.7, 0.2, 0.4, 0.5).unwrap();
        let iv = prof.intervals_below(0.5);
        let p = &prof.params;
        let sd = p.total_variance().sqrt();
        let a = gaussian_mass(&iv, p.alpha_r, sd);
        let b = gaussian_mass_erfc(&iv, p.alpha_r, sd);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn classification() {
        use ProfileObservable::*;
        assert_eq!(classify_value(Energy, 0.7), StrangeCategory::NotStrange);
        assert_eq!(classify_value(Energy, 0.3), StrangeCategory::CategoryI);
        assert_eq!(classify_value(Energy, -0.2), StrangeCategory::CategoryII);
        assert_eq!(classify_value(Number, -0.2), StrangeCategory::CategoryI);
        assert_eq!(classify_value(Number, -0.7), StrangeCategory::CategoryII);
        let h = h_closed_profile(1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(classify_strange(&h, -1.0), StrangeCategory::CategoryII);
    }

    #[test]
    fn roots_degeneracies() {
        assert!(quadratic_roots(0.0, 0.0, 1.0).is_empty());
        assert_eq!(quadratic_roots(1e-15, 2.0, -4.0), alloc::vec![2.0]);
        assert!(quadratic_roots(1.0, 0.0, 1e-13).is_empty());
        assert_eq!(quadratic_roots(1.0, -2.0, 1.0), alloc::vec![1.0]);
        let r = quadratic_roots(2.0, -3.0, -5.0);
        assert_eq!(r, alloc::vec![-1.0, 2.5]);
    }

    #[test]
    fn numeric_profile_finds_closed_roots() {
        let prof = n_closed_profile(0.8, 0.1, 0.2, 0.3).unwrap();
        let scan: alloc::vec::Vec<f64> = (0..=400).map(|i| -8.0 + 0.04 * i as f64).collect();
        let np = NumericProfile::new(|q| prof.re_value(q), scan, 1e-13);
        assert_eq!(np.roots.len(), prof.roots.len());
        for (a, b) in np.roots.iter().zip(&prof.roots) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
