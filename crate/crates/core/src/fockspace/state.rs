use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
#[allow(unused_imports)] // unused when num-traits/std is on
use num_traits::Float;

use super::operator::{hermitian_defect, make_operator, Observable, OperatorKind};
use super::wavefunction::hermite_functions;
use crate::error::{Error, Result};

const TRACE_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const PSD_TOL: f64 = -1e-10;

/// Non-fatal diagnostics attached to constructed values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// `|alpha|^2 + n_th` exceeds `dim / 4`.
    Truncation { load: f64, limit: f64 },
    /// The integration grid does not reach the state's tails.
    GridTooNarrow { edge_density: f64 },
}

/// Trace-one, Hermitian, positive semidefinite matrix on a truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<Complex64>,
    warnings: Vec<Warning>,
}

impl DensityOperator {
    /// Validates all invariants; does not renormalize.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: matrix.ncols(),
            });
        }
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        if (matrix.trace() - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity("trace differs from 1"));
        }
        if hermitian_defect(&matrix) > HERMITIAN_TOL {
            return Err(Error::InvalidDensity("not Hermitian"));
        }
        let min_ev = matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |m, &v| m.min(v));
        if min_ev < PSD_TOL {
            return Err(Error::InvalidDensity("negative eigenvalue"));
        }
        Ok(Self {
            matrix,
            warnings: Vec::new(),
        })
    }

    /// Hermitizes and rescales to unit trace before validating. Used after
    /// truncation, where both properties drift by rounding.
    pub fn from_unnormalized(matrix: DMatrix<Complex64>) -> Result<Self> {
        let herm = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let tr = herm.trace().re;
        if !(tr > 0.0) {
            return Err(Error::InvalidDensity("non-positive trace"));
        }
        Self::new(herm / Complex64::new(tr, 0.0))
    }

    /// `|psi><psi|` from (unnormalized) Fock amplitudes.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let v = DVector::from_column_slice(amplitudes);
        let norm = v.norm();
        if !(norm > 0.0) {
            return Err(Error::InvalidDensity("zero state vector"));
        }
        let v = v / Complex64::new(norm, 0.0);
        Self::from_unnormalized(&v * v.adjoint())
    }

    /// Fock-diagonal mixture from nonnegative weights (renormalized).
    pub fn diagonal(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidDensity("negative weight"));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidDensity("zero total weight"));
        }
        let dim = weights.len();
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let m = DMatrix::from_fn(dim, dim, |r, k| {
            if r == k {
                Complex64::new(weights[r] / total, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::new(m)
    }

    /// `|k><k|`
    pub fn fock(k: usize, dim: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::Domain {
                what: "Fock level",
                value: k as f64,
            });
        }
        let mut w = alloc::vec![0.0; dim];
        w[k] = 1.0;
        Self::diagonal(&w)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    pub(crate) fn push_warning(&mut self, w: Warning) {
        self.warnings.push(w);
    }

    /// `Tr(A rho)`
    pub fn expectation(&self, op: &Observable) -> Result<Complex64> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: op.dim(),
            });
        }
        Ok((op.matrix() * &self.matrix).trace())
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// `rho |q>` as Fock coefficients, i.e. `sum_n rho_mn psi_n(q)`.
    pub fn apply_position_ket(&self, q: f64) -> DVector<Complex64> {
        let psi = hermite_functions(self.dim(), q);
        let v = DVector::from_iterator(self.dim(), psi.iter().map(|&x| Complex64::new(x, 0.0)));
        &self.matrix * v
    }

    /// Position density `<q|rho|q>`.
    pub fn position_density(&self, q: f64) -> f64 {
        position_kernel(self, q, q).re
    }
}

/// `<q|rho|q2> = sum_mn psi_m(q) rho_mn psi_n(q2)`.
pub fn position_kernel(rho: &DensityOperator, q: f64, q2: f64) -> Complex64 {
    let dim = rho.dim();
    let a = hermite_functions(dim, q);
    let b = hermite_functions(dim, q2);
    let m = rho.matrix();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..dim {
        if a[r] == 0.0 {
            continue;
        }
        let mut row = Complex64::new(0.0, 0.0);
        for k in 0..dim {
            row += m[(r, k)] * b[k];
        }
        acc += row * a[r];
    }
    acc
}

/// Fock amplitude for quadrature-mean coordinates: `alpha = (alpha_r + i alpha_i)/sqrt(2)`.
pub fn amplitude_from_quadratures(alpha_r: f64, alpha_i: f64) -> Complex64 {
    Complex64::new(alpha_r, alpha_i) * FRAC_1_SQRT_2
}

/// Construction context: truncation dimension and adequacy policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockSpace {
    dim: usize,
    strict: bool,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self { dim, strict: false })
    }

    /// Reject states that fail the truncation heuristic instead of warning.
    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operator(&self, kind: OperatorKind) -> Result<Observable> {
        make_operator(kind, self.dim)
    }

    fn adequacy(&self, load: f64) -> Result<Option<Warning>> {
        let limit = self.dim as f64 / 4.0;
        if load <= limit {
            Ok(None)
        } else if self.strict {
            Err(Error::Truncation { load, limit })
        } else {
            Ok(Some(Warning::Truncation { load, limit }))
        }
    }

    /// Pure coherent state `|alpha>`, truncated and renormalized.
    pub fn coherent(&self, alpha: Complex64) -> Result<DensityOperator> {
        let warning = self.adequacy(alpha.norm_sqr())?;
        let mut amps = Vec::with_capacity(self.dim);
        let mut cur = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        for n in 0..self.dim {
            amps.push(cur);
            cur = cur * alpha / ((n + 1) as f64).sqrt();
        }
        let mut rho = DensityOperator::pure(&amps)?;
        if let Some(w) = warning {
            rho.push_warning(w);
        }
        Ok(rho)
    }

    /// `D(alpha) rho_th D(alpha)^dag` with geometric thermal weights.
    pub fn displaced_thermal(&self, alpha: Complex64, n_th: f64) -> Result<DensityOperator> {
        if !(n_th >= 0.0) || !n_th.is_finite() {
            return Err(Error::Domain {
                what: "n_th",
                value: n_th,
            });
        }
        let warning = self.adequacy(alpha.norm_sqr() + n_th)?;
        let dim = self.dim;
        let mut weights = Vec::with_capacity(dim);
        let ratio = n_th / (1.0 + n_th);
        let mut w = 1.0 / (1.0 + n_th);
        for _ in 0..dim {
            weights.push(w);
            w *= ratio;
        }
        let thermal = DensityOperator::diagonal(&weights)?;
        let d = displacement(alpha, dim)?;
        let mut rho = DensityOperator::from_unnormalized(&d * thermal.matrix() * d.adjoint())?;
        if let Some(w) = warning {
            rho.push_warning(w);
        }
        Ok(rho)
    }

    pub fn thermal(&self, n_th: f64) -> Result<DensityOperator> {
        self.displaced_thermal(Complex64::new(0.0, 0.0), n_th)
    }
}

/// Truncated displacement operator `exp(alpha a^dag - alpha^* a)`.
///
/// The generator is anti-Hermitian, so the exponential is taken through the
/// eigendecomposition of the Hermitian matrix `i G`.
pub fn displacement(alpha: Complex64, dim: usize) -> Result<DMatrix<Complex64>> {
    let a = make_operator(OperatorKind::Annihilation, dim)?;
    let a = a.matrix();
    let gen = a.adjoint() * alpha - a * alpha.conj();
    let herm = gen * Complex64::i();
    let eig = herm.symmetric_eigen();
    let phases = DMatrix::from_fn(dim, dim, |r, k| {
        if r == k {
            Complex64::from_polar(1.0, -eig.eigenvalues[r])
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(&eig.eigenvectors * phases * eig.eigenvectors.adjoint())
}

pub fn coherent_state(alpha: Complex64, dim: usize) -> Result<DensityOperator> {
    FockSpace::new(dim)?.coherent(alpha)
}

pub fn displaced_thermal_state(alpha: Complex64, n_th: f64, dim: usize) -> Result<DensityOperator> {
    FockSpace::new(dim)?.displaced_thermal(alpha, n_th)
}
