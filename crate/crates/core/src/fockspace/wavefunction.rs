use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)] // unused when num-traits/std is on
use num_traits::Float;

/// `pi^(-1/4)`
pub const PI_M_QUARTER: f64 = 0.751_125_544_464_942_5;

/// Position wavefunction `<q|n>` of the n-th Fock state.
///
/// Real Hermite-function convention, `<q|0> = pi^(-1/4) exp(-q^2/2)`,
/// evaluated with the normalized three-term recurrence so that no
/// factorials or raw Hermite polynomials appear.
pub fn quadrature_wavefunction(n: usize, q: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI_M_QUARTER * (-0.5 * q * q).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * q * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `<q|n>` for `n = 0..count`.
pub fn hermite_functions(count: usize, q: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    fill_hermite_functions(q, count, &mut out);
    out
}

pub(crate) fn fill_hermite_functions(q: f64, count: usize, out: &mut Vec<f64>) {
    out.clear();
    if count == 0 {
        return;
    }
    out.push(PI_M_QUARTER * (-0.5 * q * q).exp());
    if count == 1 {
        return;
    }
    out.push(core::f64::consts::SQRT_2 * q * out[0]);
    for k in 1..count - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * q * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
}

/// `<p|n> = (-i)^n psi_n(p)`, the Fock states in the momentum
/// representation under `<q|p> = exp(i p q)/sqrt(2 pi)`.
pub fn momentum_wavefunctions(count: usize, p: f64) -> Vec<Complex64> {
    hermite_functions(count, p)
        .into_iter()
        .enumerate()
        .map(|(n, v)| minus_i_pow(n) * v)
        .collect()
}

/// `<q|p>`
pub fn position_momentum_overlap(q: f64, p: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), p * q)
}

pub(crate) fn minus_i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}
