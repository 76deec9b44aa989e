use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::{fill_hermite_functions, DensityOperator, Observable};
use crate::povm::DetectorKernel;
use crate::quasiprob::MIN_POSTSELECTION;

/// `nu_w(phi) = Tr(Pi_phi nu rho) / Tr(Pi_phi rho)` with the diagonal
/// postselection operator `Pi_phi = ∫ dphi' K(phi, phi') |phi'><phi'|`.
pub fn weak_value(nu: &Observable, rho: &DensityOperator, kernel: &DetectorKernel, phi: f64) -> Result<Complex64> {
    WeakValueEvaluator::new(nu, rho)?.at(kernel, phi)
}

/// `Tr(Pi_phi rho)`, the smeared postselection density.
pub fn postselection_density(rho: &DensityOperator, kernel: &DetectorKernel, phi: f64) -> f64 {
    kernel.smear(phi, |x| rho.position_density(x))
}

/// Reusable evaluator holding `nu rho` so that profiles over many `phi`
/// avoid repeated matrix products.
#[derive(Debug, Clone)]
pub struct WeakValueEvaluator {
    nu_rho: DMatrix<Complex64>,
    rho: DMatrix<Complex64>,
}

impl WeakValueEvaluator {
    pub fn new(nu: &Observable, rho: &DensityOperator) -> Result<Self> {
        if nu.dim() != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                got: nu.dim(),
            });
        }
        Ok(Self {
            nu_rho: nu.matrix() * rho.matrix(),
            rho: rho.matrix().clone(),
        })
    }

    /// Numerator and denominator of the weak value.
    pub fn parts(&self, kernel: &DetectorKernel, phi: f64) -> (Complex64, f64) {
        let dim = self.rho.nrows();
        let mut psi = Vec::with_capacity(dim);
        let (mut num, mut den) = (Complex64::new(0.0, 0.0), 0.0);
        for (x, w) in kernel.rule(phi) {
            if w == 0.0 {
                continue;
            }
            fill_hermite_functions(x, dim, &mut psi);
            num += w * quadratic_form(&self.nu_rho, &psi);
            den += w * quadratic_form(&self.rho, &psi).re;
        }
        (num, den)
    }

    pub fn at(&self, kernel: &DetectorKernel, phi: f64) -> Result<Complex64> {
        let (num, den) = self.parts(kernel, phi);
        if !(den > MIN_POSTSELECTION) {
            return Err(Error::UndefinedWeakValue(den));
        }
        Ok(num / den)
    }
}

/// `psi^T M psi` for a real vector.
fn quadratic_form(m: &DMatrix<Complex64>, psi: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..psi.len() {
        if psi[r] == 0.0 {
            continue;
        }
        let mut row = Complex64::new(0.0, 0.0);
        for k in 0..psi.len() {
            row += m[(r, k)] * psi[k];
        }
        acc += row * psi[r];
    }
    acc
}
