use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)] // unused when num-traits/std is on
use num_traits::Float;

use super::pointer::{qubit_density, PointerState};
use crate::error::{Error, Result};
use crate::fockspace::{fill_hermite_functions, make_operator, DensityOperator, OperatorKind};
use crate::povm::DetectorKernel;
use crate::quasiprob::MIN_POSTSELECTION;
use crate::weakvalues::weak_value;

/// `<n| Pi_phi |m>` in the Fock basis.
fn postselection_matrix(kernel: &DetectorKernel, phi: f64, dim: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(dim, dim);
    let mut psi = Vec::with_capacity(dim);
    for (x, w) in kernel.rule(phi) {
        if w == 0.0 {
            continue;
        }
        fill_hermite_functions(x, dim, &mut psi);
        for n in 0..dim {
            for m in 0..dim {
                out[(n, m)] += w * psi[n] * psi[m];
            }
        }
    }
    out
}

/// Probe state after the coupling `exp(-i eps n_obj ⊗ D)` with diagonal
/// probe operator `D = diag(d)`, conditioned on the object outcome `phi`:
/// `sum_mn <n|Pi|m> rho_mn U_m sigma U_n^dag`, normalized.
fn conditioned_probe(
    rho: &DensityOperator,
    kernel: &DetectorKernel,
    phi: f64,
    sigma: &DMatrix<Complex64>,
    d: &[f64],
    eps: f64,
) -> Result<DMatrix<Complex64>> {
    let dim = rho.dim();
    let post = postselection_matrix(kernel, phi, dim);
    let size = sigma.nrows();
    let mut acc = DMatrix::<Complex64>::zeros(size, size);
    let mut norm = 0.0;
    for m in 0..dim {
        for n in 0..dim {
            let c = post[(n, m)] * rho.matrix()[(m, n)];
            if c.norm() == 0.0 {
                continue;
            }
            norm += c.re;
            let (mf, nf) = (m as f64, n as f64);
            for j in 0..size {
                for k in 0..size {
                    let phase = Complex64::from_polar(1.0, -eps * (mf * d[j] - nf * d[k]));
                    acc[(j, k)] += c * sigma[(j, k)] * phase;
                }
            }
        }
    }
    if !(norm > MIN_POSTSELECTION) {
        return Err(Error::UndefinedWeakValue(norm));
    }
    Ok(acc / Complex64::new(norm, 0.0))
}

fn expect(op: &DMatrix<Complex64>, rho: &DMatrix<Complex64>) -> Complex64 {
    (op * rho).trace()
}

/// Conditional readout of the cross-Kerr probe mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossKerrReport {
    pub epsilon: f64,
    pub phase: f64,
    pub q: f64,
    /// `<x_theta>` of the probe conditioned on `q`, with and without coupling.
    pub quadrature: f64,
    pub quadrature_baseline: f64,
    /// `-i <[x_theta, n_b]>` in the unperturbed probe.
    pub susceptibility: f64,
    /// `(quadrature - baseline) / (eps susceptibility)`, the estimate of `Re n_w`.
    pub estimate: f64,
    /// `-arg(<b>_eps / <b>_0) / eps`, exact for Fock-state objects.
    pub phase_estimate: f64,
    /// Trace-formula `n_w(q)` of the object.
    pub reference: Complex64,
}

/// Exact two-mode evolution under `exp(-i eps n_a ⊗ n_b)` followed by
/// postselection of mode a at `q` and homodyne readout of
/// `x_theta = (b e^{-i theta} + b^dag e^{i theta}) / sqrt(2)` on mode b.
pub fn simulate_cross_kerr(
    rho_a: &DensityOperator,
    rho_b: &DensityOperator,
    epsilon: f64,
    phase: f64,
    kernel: &DetectorKernel,
    q: f64,
) -> Result<CrossKerrReport> {
    let db = rho_b.dim();
    let b = make_operator(OperatorKind::Annihilation, db)?.matrix().clone();
    let n_b = make_operator(OperatorKind::Number, db)?.matrix().clone();
    let x = (&b * Complex64::from_polar(1.0, -phase) + b.adjoint() * Complex64::from_polar(1.0, phase))
        * Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    let levels: Vec<f64> = (0..db).map(|j| j as f64).collect();
    let on = conditioned_probe(rho_a, kernel, q, rho_b.matrix(), &levels, epsilon)?;
    let off = conditioned_probe(rho_a, kernel, q, rho_b.matrix(), &levels, 0.0)?;
    let comm = &x * &n_b - &n_b * &x;
    let susceptibility = (expect(&comm, rho_b.matrix()) * Complex64::new(0.0, -1.0)).re;
    let quadrature = expect(&x, &on).re;
    let quadrature_baseline = expect(&x, &off).re;
    let (b_on, b_off) = (expect(&b, &on), expect(&b, &off));
    let na = make_operator(OperatorKind::Number, rho_a.dim())?;
    let reference = weak_value(&na, rho_a, kernel, q)?;
    let (estimate, phase_estimate) = if epsilon == 0.0 {
        (0.0, 0.0)
    } else {
        (
            (quadrature - quadrature_baseline) / (epsilon * susceptibility),
            -(b_on / b_off).arg() / epsilon,
        )
    };
    Ok(CrossKerrReport {
        epsilon,
        phase,
        q,
        quadrature,
        quadrature_baseline,
        susceptibility,
        estimate,
        phase_estimate,
        reference,
    })
}

/// Conditional atomic response to `exp(-i eps n ⊗ sigma_z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitReport {
    pub epsilon: f64,
    pub q: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub sigma_x_baseline: f64,
    pub sigma_y_baseline: f64,
    /// `(<sigma_x> - baseline) / eps`
    pub slope_x: f64,
    /// `(<sigma_y> - baseline) / eps`
    pub slope_y: f64,
    /// Bloch-vector rotation angle over `2 eps`.
    pub extracted_n: f64,
    /// Trace-formula `n_w(q)` of the object.
    pub reference: Complex64,
    /// `slope_y / Re n_w`, the measured proportionality.
    pub ratio_y: f64,
}

pub fn simulate_qubit_pointer(
    rho_s: &DensityOperator,
    qubit: &PointerState,
    epsilon: f64,
    kernel: &DetectorKernel,
    q: f64,
) -> Result<QubitReport> {
    let (s_x, s_y) = match qubit {
        PointerState::Qubit { s_x, s_y } => (*s_x, *s_y),
        _ => return Err(Error::Unsupported("the sigma_z coupling needs a qubit pointer")),
    };
    let sigma = DMatrix::from_fn(2, 2, |r, c| qubit_density(s_x, s_y)[(r, c)]);
    let d = [1.0, -1.0];
    let on = conditioned_probe(rho_s, kernel, q, &sigma, &d, epsilon)?;
    let off = conditioned_probe(rho_s, kernel, q, &sigma, &d, 0.0)?;
    // <sigma_x> + i <sigma_y> = 2 rho_10
    let bloch = |r: &DMatrix<Complex64>| r[(1, 0)] * 2.0;
    let (b_on, b_off) = (bloch(&on), bloch(&off));
    let n = make_operator(OperatorKind::Number, rho_s.dim())?;
    let reference = weak_value(&n, rho_s, kernel, q)?;
    let (slope_x, slope_y, extracted_n) = if epsilon == 0.0 {
        (0.0, 0.0, 0.0)
    } else {
        (
            (b_on.re - b_off.re) / epsilon,
            (b_on.im - b_off.im) / epsilon,
            (b_on / b_off).arg() / (2.0 * epsilon),
        )
    };
    Ok(QubitReport {
        epsilon,
        q,
        sigma_x: b_on.re,
        sigma_y: b_on.im,
        sigma_x_baseline: b_off.re,
        sigma_y_baseline: b_off.im,
        slope_x,
        slope_y,
        extracted_n,
        reference,
        ratio_y: slope_y / reference.re,
    })
}
