use alloc::vec::Vec;
#[allow(unused_imports)] // unused when num-traits/std is on
use num_traits::Float;

use crate::error::{Error, Result};
use crate::povm::sigma_from_efficiency;

/// Below this `|a|` a quadratic profile is treated as linear.
pub const LINEAR_TOL: f64 = 1e-14;
/// Discriminants in `(-DISCRIMINANT_TOL, 0)` count as "no roots".
pub const DISCRIMINANT_TOL: f64 = 1e-12;

/// Displaced thermal state and detector in quadrature units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateParams {
    pub alpha_r: f64,
    pub alpha_i: f64,
    pub n_th: f64,
    pub sigma_eta: f64,
}

impl StateParams {
    pub fn new(alpha_r: f64, alpha_i: f64, n_th: f64, sigma_eta: f64) -> Result<Self> {
        let check = |what, v: f64, ok: bool| {
            if ok && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain { what, value: v })
            }
        };
        check("alpha_r", alpha_r, true)?;
        check("alpha_i", alpha_i, true)?;
        check("n_th", n_th, n_th >= 0.0)?;
        check("sigma_eta", sigma_eta, sigma_eta >= 0.0)?;
        Ok(Self {
            alpha_r,
            alpha_i,
            n_th,
            sigma_eta,
        })
    }

    /// Same, with the detector width taken from the quantum efficiency.
    pub fn with_efficiency(alpha_r: f64, alpha_i: f64, n_th: f64, eta: f64) -> Result<Self> {
        Self::new(alpha_r, alpha_i, n_th, sigma_from_efficiency(eta)?)
    }

    /// `sigma_th^2 = n_th + 1/2`
    pub fn thermal_variance(&self) -> f64 {
        self.n_th + 0.5
    }

    pub fn detector_variance(&self) -> f64 {
        self.sigma_eta * self.sigma_eta
    }

    /// Variance of the smeared postselection marginal, `sigma_th^2 + sigma_eta^2`.
    pub fn total_variance(&self) -> f64 {
        self.thermal_variance() + self.detector_variance()
    }

    /// `|alpha|^2` of the Fock amplitude `(alpha_r + i alpha_i)/sqrt(2)`.
    pub fn mean_photons_coherent(&self) -> f64 {
        0.5 * (self.alpha_r * self.alpha_r + self.alpha_i * self.alpha_i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileObservable {
    MomentumSquared,
    Energy,
    Number,
}

impl ProfileObservable {
    pub fn label(self) -> &'static str {
        match self {
            Self::MomentumSquared => "p2",
            Self::Energy => "H",
            Self::Number => "n",
        }
    }
}

/// `Re nu_w(q) = a q^2 + b q + c` on a displaced thermal state.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakValueProfile {
    pub observable: ProfileObservable,
    pub params: StateParams,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Real roots, ascending.
    pub roots: Vec<f64>,
}

impl WeakValueProfile {
    pub fn re_value(&self, q: f64) -> f64 {
        (self.a * q + self.b) * q + self.c
    }

    /// Sets of `q` where `Re nu_w(q) < threshold`, as disjoint open
    /// intervals (unbounded ends are infinite).
    pub fn intervals_below(&self, threshold: f64) -> Vec<(f64, f64)> {
        let roots = quadratic_roots(self.a, self.b, self.c - threshold);
        below_intervals(self.a, self.b, self.c - threshold, &roots)
    }

    pub fn negative_intervals(&self) -> Vec<(f64, f64)> {
        self.intervals_below(0.0)
    }
}

pub fn p2_closed_profile(alpha_r: f64, alpha_i: f64, n_th: f64, sigma_eta: f64) -> Result<WeakValueProfile> {
    let prm = StateParams::new(alpha_r, alpha_i, n_th, sigma_eta)?;
    let s = prm.total_variance();
    let k = alpha_i * alpha_i + prm.thermal_variance();
    let a = -1.0 / (4.0 * s * s);
    let b = alpha_r / (2.0 * s * s);
    let c = (1.0 + 4.0 * k * s) / (4.0 * s) - alpha_r * alpha_r / (4.0 * s * s);
    let half = (s * (1.0 + 4.0 * k * s)).sqrt();
    Ok(WeakValueProfile {
        observable: ProfileObservable::MomentumSquared,
        params: prm,
        a,
        b,
        c,
        roots: alloc::vec![alpha_r - half, alpha_r + half],
    })
}

pub fn h_closed_profile(alpha_r: f64, alpha_i: f64, n_th: f64, sigma_eta: f64) -> Result<WeakValueProfile> {
    let prm = StateParams::new(alpha_r, alpha_i, n_th, sigma_eta)?;
    let (a, b, c) = energy_coefficients(&prm);
    Ok(WeakValueProfile {
        observable: ProfileObservable::Energy,
        params: prm,
        a,
        b,
        c,
        roots: quadratic_roots(a, b, c),
    })
}

pub fn n_closed_profile(alpha_r: f64, alpha_i: f64, n_th: f64, sigma_eta: f64) -> Result<WeakValueProfile> {
    let prm = StateParams::new(alpha_r, alpha_i, n_th, sigma_eta)?;
    let (a, b, c) = energy_coefficients(&prm);
    let c = c - 0.5;
    Ok(WeakValueProfile {
        observable: ProfileObservable::Number,
        params: prm,
        a,
        b,
        c,
        roots: quadratic_roots(a, b, c),
    })
}

/// Closed profile for any of the three observables.
pub fn closed_profile(obs: ProfileObservable, prm: &StateParams) -> Result<WeakValueProfile> {
    let f = match obs {
        ProfileObservable::MomentumSquared => p2_closed_profile,
        ProfileObservable::Energy => h_closed_profile,
        ProfileObservable::Number => n_closed_profile,
    };
    f(prm.alpha_r, prm.alpha_i, prm.n_th, prm.sigma_eta)
}

fn energy_coefficients(prm: &StateParams) -> (f64, f64, f64) {
    let vt = prm.thermal_variance();
    let ve = prm.detector_variance();
    let s = vt + ve;
    let s2 = s * s;
    let a = (4.0 * vt * vt - 1.0) / (8.0 * s2);
    let b = prm.alpha_r * (4.0 * vt * ve + 1.0) / (4.0 * s2);
    let c = 0.5 * vt
        + 0.5 * prm.alpha_i * prm.alpha_i
        + (1.0 + 4.0 * vt * ve) / (8.0 * s)
        + prm.alpha_r * prm.alpha_r * (4.0 * ve * ve - 1.0) / (8.0 * s2);
    (a, b, c)
}

/// Real roots of `a q^2 + b q + c`, ascending, with the degeneracy rules
/// of [`LINEAR_TOL`] and [`DISCRIMINANT_TOL`].
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a.abs() < LINEAR_TOL {
        if b == 0.0 {
            return Vec::new();
        }
        return alloc::vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        // covers the (-DISCRIMINANT_TOL, 0) band as well
        return Vec::new();
    }
    let sq = disc.sqrt();
    // avoid cancellation between -b and sq
    let t = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
    let (r1, r2) = if t == 0.0 { (0.0, 0.0) } else { (t / a, c / t) };
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    if disc == 0.0 {
        alloc::vec![lo]
    } else {
        alloc::vec![lo, hi]
    }
}

fn below_intervals(a: f64, b: f64, c: f64, roots: &[f64]) -> Vec<(f64, f64)> {
    let inf = f64::INFINITY;
    let everywhere = alloc::vec![(-inf, inf)];
    if a.abs() < LINEAR_TOL {
        return match roots {
            [] if c < 0.0 => everywhere,
            [] => Vec::new(),
            [r, ..] if b > 0.0 => alloc::vec![(-inf, *r)],
            [r, ..] => alloc::vec![(*r, inf)],
        };
    }
    match (roots, a > 0.0) {
        ([lo, hi], true) => alloc::vec![(*lo, *hi)],
        ([lo, hi], false) => alloc::vec![(-inf, *lo), (*hi, inf)],
        // a double root: touches zero without going below
        ([r], false) => alloc::vec![(-inf, *r), (*r, inf)],
        (_, true) => Vec::new(),
        (_, false) => everywhere,
    }
}
