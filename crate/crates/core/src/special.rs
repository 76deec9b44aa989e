//! Special functions and quadrature rules.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};
#[allow(unused_imports)] // unused when num-traits/std is on
use num_traits::Float;

/// Complementary error function (musl port in `libm`, ~1 ulp).
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Probability that a normal variable with the given mean and standard
/// deviation lies in `[lo, hi]`. Infinite bounds are allowed.
pub fn normal_interval(mean: f64, sd: f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let z = |x: f64| (x - mean) / sd * FRAC_1_SQRT_2;
    let (zl, zh) = (z(lo), z(hi));
    // evaluate in the tail that keeps erfc away from cancellation
    if zl >= 0.0 {
        0.5 * (erfc(zl) - erfc(zh))
    } else if zh <= 0.0 {
        0.5 * (erfc(-zh) - erfc(-zl))
    } else {
        1.0 - 0.5 * (erfc(-zl) + erfc(zh))
    }
}

pub fn normal_pdf(x: f64, mean: f64, var: f64) -> f64 {
    (-(x - mean) * (x - mean) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
///
/// Newton iteration on the three-term Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d.is_finite() {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Composite Gauss-Legendre rule on `[a, b]` with panels no wider than
/// `max_panel` and `order` nodes per panel.
pub fn composite_rule(a: f64, b: f64, max_panel: f64, order: usize) -> Vec<(f64, f64)> {
    if b <= a {
        return Vec::new();
    }
    let panels = ((b - a) / max_panel).ceil().max(1.0) as usize;
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let mid = lo + 0.5 * h;
        for (xi, wi) in x.iter().zip(&w) {
            out.push((mid + 0.5 * h * xi, 0.5 * h * wi));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erfc_reference_values() {
        // erfc(1) to 20 digits: 0.15729920705028513066
        assert!((erfc(1.0) - 0.157_299_207_050_285_13).abs() < 1e-16);
        assert!((erfc(0.0) - 1.0).abs() < 1e-16);
        assert!((erfc(-1.0) - 1.842_700_792_949_715).abs() < 1e-15);
        // deep tail, relative accuracy
        let e5 = 1.537_459_794_428_034_8e-12;
        assert!(((erfc(5.0) - e5) / e5).abs() < 1e-13);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(7);
        // degree 13 is exact for 7 nodes
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((s - 2.0 / 13.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn large_rule_is_accurate() {
        let (x, w) = gauss_legendre(400);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-13);
        // integral of exp(x) over [-1,1]
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.exp()).sum();
        assert!((s - (1f64.exp() - (-1f64).exp())).abs() < 1e-13);
    }

    #[test]
    fn normal_interval_matches_pdf_quadrature() {
        let rule = composite_rule(-0.3, 2.1, 0.25, 16);
        let q: f64 = rule.iter().map(|(x, w)| w * normal_pdf(*x, 0.4, 0.7)).sum();
        let c = normal_interval(0.4, 0.7f64.sqrt(), -0.3, 2.1);
        assert!((q - c).abs() < 1e-14);
        assert!((normal_interval(0.0, 1.0, f64::NEG_INFINITY, f64::INFINITY) - 1.0).abs() < 1e-16);
    }
}
