use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
#[allow(unused_imports)] // unused when num-traits/std is on
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fockspace::{fill_hermite_functions, minus_i_pow, DensityOperator, QuadratureGrid};

/// Nodes per axis of a default distribution grid.
pub const DEFAULT_DISTRIBUTION_NODES: usize = 200;

/// Second basis of an S-distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum XiBasis {
    /// Fock states `|n>`, `n < dim`.
    Fock,
    /// Momentum eigenstates on a grid, `<q|p> = exp(i p q)/sqrt(2 pi)`.
    Momentum(QuadratureGrid),
    /// Orthonormal columns given in Fock coordinates.
    Custom(DMatrix<Complex64>),
}

/// Pair `(|phi>, |xi>)` with `|phi>` position eigenstates on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisPair {
    phi: QuadratureGrid,
    xi: XiBasis,
}

impl BasisPair {
    pub fn new(phi: QuadratureGrid, xi: XiBasis) -> Result<Self> {
        if let XiBasis::Custom(u) = &xi {
            if u.ncols() == 0 || u.ncols() > u.nrows() {
                return Err(Error::DimensionMismatch {
                    expected: u.nrows(),
                    got: u.ncols(),
                });
            }
            let gram = u.adjoint() * u;
            let defect = (gram - DMatrix::identity(u.ncols(), u.ncols()))
                .iter()
                .fold(0.0f64, |m, z| m.max(z.norm()));
            if defect > 1e-6 {
                return Err(Error::NotOrthonormal(defect));
            }
        }
        Ok(Self { phi, xi })
    }

    pub fn position_fock(phi: QuadratureGrid) -> Self {
        Self { phi, xi: XiBasis::Fock }
    }

    pub fn position_momentum(phi: QuadratureGrid, p: QuadratureGrid) -> Self {
        Self {
            phi,
            xi: XiBasis::Momentum(p),
        }
    }

    /// `(q, p)` pair with both axes on the default `±L` grid of
    /// [`DEFAULT_DISTRIBUTION_NODES`] nodes.
    pub fn default_phase_space(alpha_sq: f64, n_th: f64) -> Result<Self> {
        let half = crate::fockspace::default_half_width(alpha_sq, n_th);
        let g = QuadratureGrid::symmetric(half, DEFAULT_DISTRIBUTION_NODES)?;
        Ok(Self::position_momentum(g.clone(), g))
    }

    pub fn phi(&self) -> &QuadratureGrid {
        &self.phi
    }

    pub fn xi(&self) -> &XiBasis {
        &self.xi
    }

    /// Number of `xi` states for a state of Fock dimension `dim`.
    pub fn xi_len(&self, dim: usize) -> usize {
        match &self.xi {
            XiBasis::Fock => dim,
            XiBasis::Momentum(g) => g.len(),
            XiBasis::Custom(u) => u.ncols(),
        }
    }

    /// Labels of the `xi` axis: Fock level, momentum, or column index.
    pub fn xi_points(&self, dim: usize) -> Vec<f64> {
        match &self.xi {
            XiBasis::Momentum(g) => g.points().to_vec(),
            _ => (0..self.xi_len(dim)).map(|j| j as f64).collect(),
        }
    }

    /// Integration weights of the `xi` axis (1 for discrete bases).
    pub fn xi_weights(&self, dim: usize) -> Vec<f64> {
        match &self.xi {
            XiBasis::Momentum(g) => g.weights().to_vec(),
            _ => alloc::vec![1.0; self.xi_len(dim)],
        }
    }

    /// `<xi|rho|xi>` for every `xi`, the exact `phi`-marginal of S.
    pub fn xi_density(&self, rho: &DensityOperator) -> Vec<f64> {
        let c = self.xi_coefficients(rho.dim());
        let m = &c * rho.matrix() * c.adjoint();
        (0..m.nrows()).map(|j| m[(j, j)].re).collect()
    }

    /// Largest deviation of `sum_xi w <m|xi><xi|n>` from `delta_mn` over
    /// the first `dim` Fock levels.
    pub fn resolution_defect(&self, dim: usize) -> f64 {
        let c = self.xi_coefficients(dim);
        let w = self.xi_weights(dim);
        let mut worst: f64 = 0.0;
        for m in 0..dim {
            for n in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..c.nrows() {
                    acc += w[j] * c[(j, m)].conj() * c[(j, n)];
                }
                let want = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((acc - want).norm());
            }
        }
        worst
    }

    /// Matrix of `<xi_j|m>`, one row per `xi`.
    pub(crate) fn xi_coefficients(&self, dim: usize) -> DMatrix<Complex64> {
        match &self.xi {
            XiBasis::Fock => DMatrix::identity(dim, dim),
            XiBasis::Momentum(g) => {
                let mut c = DMatrix::zeros(g.len(), dim);
                let mut psi = Vec::with_capacity(dim);
                for (j, &p) in g.points().iter().enumerate() {
                    fill_hermite_functions(p, dim, &mut psi);
                    for m in 0..dim {
                        c[(j, m)] = minus_i_pow(m) * psi[m];
                    }
                }
                c
            }
            XiBasis::Custom(u) => u.adjoint(),
        }
    }

    /// `<phi|xi_j>` for every `j`, given `psi_m(phi)` and the coefficient
    /// matrix. Plane waves are evaluated exactly, not via Fock expansion.
    pub(crate) fn overlaps(&self, phi: f64, psi: &[f64], coeffs: &DMatrix<Complex64>) -> Vec<Complex64> {
        match &self.xi {
            XiBasis::Fock => psi.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            XiBasis::Momentum(g) => g
                .points()
                .iter()
                .map(|&p| Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), p * phi))
                .collect(),
            XiBasis::Custom(_) => (0..coeffs.nrows())
                .map(|j| (0..psi.len()).map(|m| coeffs[(j, m)].conj() * psi[m]).sum())
                .collect(),
        }
    }
}

/// Per-`phi` amplitudes shared by the distribution and representation
/// routines.
pub(crate) struct Amplitudes {
    /// `<phi|xi_j>`
    pub overlap: Vec<Complex64>,
    /// `<xi_j|rho|phi>`
    pub xi_rho_phi: Vec<Complex64>,
}

pub(crate) struct AmplitudeBuilder<'a> {
    basis: &'a BasisPair,
    rho: &'a DensityOperator,
    coeffs: DMatrix<Complex64>,
    psi: Vec<f64>,
}

impl<'a> AmplitudeBuilder<'a> {
    pub fn new(basis: &'a BasisPair, rho: &'a DensityOperator) -> Result<Self> {
        let dim = rho.dim();
        if let XiBasis::Custom(u) = basis.xi() {
            if u.nrows() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: u.nrows(),
                });
            }
        }
        Ok(Self {
            basis,
            rho,
            coeffs: basis.xi_coefficients(dim),
            psi: Vec::with_capacity(dim),
        })
    }

    pub fn coeffs(&self) -> &DMatrix<Complex64> {
        &self.coeffs
    }

    pub fn psi(&mut self, phi: f64) -> &[f64] {
        fill_hermite_functions(phi, self.rho.dim(), &mut self.psi);
        &self.psi
    }

    pub fn at(&mut self, phi: f64) -> Amplitudes {
        let dim = self.rho.dim();
        fill_hermite_functions(phi, dim, &mut self.psi);
        let ket = DVector::from_iterator(dim, self.psi.iter().map(|&x| Complex64::new(x, 0.0)));
        let rho_phi = self.rho.matrix() * ket;
        let xi_rho_phi = (&self.coeffs * rho_phi).iter().copied().collect();
        Amplitudes {
            overlap: self.basis.overlaps(phi, &self.psi, &self.coeffs),
            xi_rho_phi,
        }
    }
}
