use alloc::vec::Vec;
#[allow(unused_imports)] // unused when num-traits/std is on
use num_traits::Float;

use super::profile::{ProfileObservable, WeakValueProfile};
use crate::error::{Error, Result};
use crate::special::{composite_rule, erfc, normal_pdf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegativityProbability {
    pub probability: f64,
    pub method: Method,
    /// Where the real part is below the threshold.
    pub intervals: Vec<(f64, f64)>,
}

/// Standard deviations beyond which the Gaussian marginal is cut off.
const CLIP_SD: f64 = 40.0;

/// `P[Re nu_w < 0]` under the smeared marginal `rho_eta`.
///
/// The closed form covers `p^2` for all parameters and `H`, `n` for ideal
/// detectors on pure coherent states; elsewhere it reports
/// [`Error::ClosedFormUnavailable`]. Quadrature always applies.
pub fn negativity_probability(profile: &WeakValueProfile, method: Method) -> Result<NegativityProbability> {
    probability_below(profile, 0.0, method)
}

/// `P[Re nu_w < threshold]`; the closed form exists only for threshold 0.
pub fn probability_below(profile: &WeakValueProfile, threshold: f64, method: Method) -> Result<NegativityProbability> {
    let intervals = profile.intervals_below(threshold);
    let probability = match method {
        Method::ClosedForm if threshold == 0.0 => closed_form(profile)?,
        Method::ClosedForm => return Err(Error::ClosedFormUnavailable),
        Method::Quadrature => {
            let p = &profile.params;
            gaussian_mass(&intervals, p.alpha_r, p.total_variance().sqrt())
        }
    };
    Ok(NegativityProbability {
        probability,
        method,
        intervals,
    })
}

fn closed_form(profile: &WeakValueProfile) -> Result<f64> {
    let p = &profile.params;
    let ideal = p.n_th == 0.0 && p.sigma_eta == 0.0;
    let (ar, ai2) = (p.alpha_r.abs(), p.alpha_i * p.alpha_i);
    match profile.observable {
        ProfileObservable::MomentumSquared => {
            let x = 0.5 + 2.0 * (ai2 + p.thermal_variance()) * p.total_variance();
            Ok(erfc(x.sqrt()))
        }
        _ if !ideal => Err(Error::ClosedFormUnavailable),
        // the formulas are 0/0 at alpha_r = 0 where the probability vanishes
        _ if ar == 0.0 => Ok(0.0),
        ProfileObservable::Energy => Ok(0.5 * erfc((1.0 + ar * ar + ai2) / (2.0 * ar))),
        ProfileObservable::Number => Ok(0.5 * erfc((ar * ar + ai2) / (2.0 * ar))),
    }
}

/// Mass of `N(mean, sd^2)` over the intervals by composite Gauss-Legendre,
/// with infinite ends clipped at `mean ± 40 sd`.
pub fn gaussian_mass(intervals: &[(f64, f64)], mean: f64, sd: f64) -> f64 {
    let (lo_clip, hi_clip) = (mean - CLIP_SD * sd, mean + CLIP_SD * sd);
    let var = sd * sd;
    intervals
        .iter()
        .map(|&(lo, hi)| {
            let (lo, hi) = (lo.max(lo_clip), hi.min(hi_clip));
            if hi <= lo {
                return 0.0;
            }
            composite_rule(lo, hi, 0.25 * sd, 16)
                .into_iter()
                .map(|(x, w)| w * normal_pdf(x, mean, var))
                .sum::<f64>()
        })
        .fold(0.0, |a, b| a + b)
}

/// Same mass from erfc differences, as an independent check.
pub fn gaussian_mass_erfc(intervals: &[(f64, f64)], mean: f64, sd: f64) -> f64 {
    intervals
        .iter()
        .map(|&(lo, hi)| crate::special::normal_interval(mean, sd, lo, hi))
        .fold(0.0, |a, b| a + b)
}

/// Real roots of a sampled function found by sign changes on `scan` and
/// refined by bisection to `tol`.
pub fn bracket_roots(f: impl Fn(f64) -> f64, scan: &[f64], tol: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    let vals: Vec<f64> = scan.iter().map(|&x| f(x)).collect();
    for i in 0..scan.len().saturating_sub(1) {
        let (mut a, mut b) = (scan[i], scan[i + 1]);
        let (mut fa, fb) = (vals[i], vals[i + 1]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa.signum() == fb.signum() || fb == 0.0 {
            continue;
        }
        while b - a > tol {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        roots.push(0.5 * (a + b));
    }
    if let (Some(&x), Some(&v)) = (scan.last(), vals.last()) {
        if v == 0.0 {
            roots.push(x);
        }
    }
    roots
}

/// Profile known only through point evaluations, e.g. the trace formula on
/// a non-Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericProfile {
    pub scan: Vec<f64>,
    pub values: Vec<f64>,
    pub roots: Vec<f64>,
}

impl NumericProfile {
    /// Samples `re` on `scan` (ascending) and brackets its roots.
    pub fn new(re: impl Fn(f64) -> f64, scan: Vec<f64>, tol: f64) -> Self {
        let values = scan.iter().map(|&x| re(x)).collect();
        let roots = bracket_roots(&re, &scan, tol);
        Self { scan, values, roots }
    }

    /// Intervals inside the scan range where the sampled function is below
    /// `threshold`, bounded by roots of `re - threshold`.
    pub fn intervals_below(&self, re: impl Fn(f64) -> f64, threshold: f64, tol: f64) -> Vec<(f64, f64)> {
        let g = |x: f64| re(x) - threshold;
        let mut cuts = alloc::vec![self.scan[0]];
        cuts.extend(bracket_roots(g, &self.scan, tol));
        cuts.push(*self.scan.last().expect("non-empty scan"));
        cuts.windows(2)
            .filter(|w| w[1] > w[0] && g(0.5 * (w[0] + w[1])) < 0.0)
            .map(|w| (w[0], w[1]))
            .collect()
    }
}

/// `∫ density` over the intervals by composite Gauss-Legendre with panels
/// of at most `panel`.
pub fn integrate_over(intervals: &[(f64, f64)], density: impl Fn(f64) -> f64, panel: f64) -> f64 {
    intervals
        .iter()
        .filter(|(lo, hi)| hi > lo && lo.is_finite() && hi.is_finite())
        .map(|&(lo, hi)| {
            composite_rule(lo, hi, panel, 16)
                .into_iter()
                .map(|(x, w)| w * density(x))
                .sum::<f64>()
        })
        .fold(0.0, |a, b| a + b)
}
