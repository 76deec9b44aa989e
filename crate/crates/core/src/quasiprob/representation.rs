use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)] // unused when num-traits/std is on
use num_traits::Float;

use super::basis::{AmplitudeBuilder, BasisPair, XiBasis};
use crate::error::{Error, Result};
use crate::fockspace::{fill_hermite_functions, DensityOperator, Observable};
use crate::povm::DetectorKernel;

/// Points whose overlap falls below this fraction of the largest overlap
/// on the grid are left undefined.
pub const OVERLAP_THRESHOLD: f64 = 1e-12;

/// Smallest postselection probability accepted by [`conditional_expectation`].
pub const MIN_POSTSELECTION: f64 = 1e-14;

/// `S_nu(phi, xi) = <phi|nu|xi> / <phi|xi>` on a basis grid; `None` where
/// the overlap is too small to divide by.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    values: Vec<Option<Complex64>>,
    basis: BasisPair,
    xi_len: usize,
}

impl Representation {
    pub fn basis(&self) -> &BasisPair {
        &self.basis
    }

    pub fn values(&self) -> &[Option<Complex64>] {
        &self.values
    }

    pub fn xi_len(&self) -> usize {
        self.xi_len
    }

    pub fn value(&self, i_phi: usize, j_xi: usize) -> Option<Complex64> {
        self.values[i_phi * self.xi_len + j_xi]
    }

    /// `T_nu = Re S_nu`
    pub fn t_value(&self, i_phi: usize, j_xi: usize) -> Option<f64> {
        self.value(i_phi, j_xi).map(|z| z.re)
    }

    pub fn undefined_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// Largest `|Im S_nu|` over defined points; zero when the pair meets
    /// the classical (real-representation) condition.
    pub fn max_imaginary(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m: f64, z| m.max(z.im.abs()))
    }
}

/// `<phi|nu|xi_j>` for all `j` at one `phi`.
struct OperatorAmplitudes<'a> {
    basis: &'a BasisPair,
    nu: &'a Observable,
    /// `nu |xi_j>` in Fock coordinates, one column per `xi` (discrete bases).
    nu_xi: Option<DMatrix<Complex64>>,
    psi: Vec<f64>,
}

impl<'a> OperatorAmplitudes<'a> {
    fn new(basis: &'a BasisPair, nu: &'a Observable) -> Result<Self> {
        let dim = nu.dim();
        let nu_xi = match basis.xi() {
            XiBasis::Momentum(_) => {
                if nu.symbol().is_none() {
                    return Err(Error::NoPhaseSpaceSymbol);
                }
                None
            }
            XiBasis::Fock => Some(nu.matrix().clone()),
            XiBasis::Custom(u) => {
                if u.nrows() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: u.nrows(),
                    });
                }
                Some(nu.matrix() * u)
            }
        };
        Ok(Self {
            basis,
            nu,
            nu_xi,
            psi: Vec::with_capacity(dim),
        })
    }

    /// Returns `<phi|nu|xi_j>`, or for plane waves the symbol times the
    /// overlap.
    fn at(&mut self, phi: f64, overlap: &[Complex64]) -> Vec<Complex64> {
        match (&self.nu_xi, self.basis.xi()) {
            (Some(m), _) => {
                fill_hermite_functions(phi, self.nu.dim(), &mut self.psi);
                (0..m.ncols())
                    .map(|j| (0..m.nrows()).map(|r| m[(r, j)] * self.psi[r]).sum())
                    .collect()
            }
            (None, XiBasis::Momentum(g)) => {
                let sym = self.nu.symbol().expect("checked in new");
                g.points()
                    .iter()
                    .zip(overlap)
                    .map(|(&p, o)| sym.eval(phi, p) * o)
                    .collect()
            }
            (None, _) => unreachable!("discrete bases carry a matrix"),
        }
    }
}

/// The S-representation of an observable over a basis pair.
///
/// Plane-wave bases use the operator's standard-ordered symbol, for which
/// the ratio is exact; an observable without one is rejected.
pub fn s_representation(nu: &Observable, basis: &BasisPair) -> Result<Representation> {
    let dim = nu.dim();
    // the state only feeds the overlap computation here
    let probe = DensityOperator::fock(0, dim)?;
    let mut amp = AmplitudeBuilder::new(basis, &probe)?;
    let mut ops = OperatorAmplitudes::new(basis, nu)?;
    let xi_len = basis.xi_len(dim);
    let mut overlaps = Vec::with_capacity(basis.phi().len());
    let mut max_overlap: f64 = 0.0;
    for &phi in basis.phi().points() {
        let psi = amp.psi(phi).to_vec();
        let o = basis.overlaps(phi, &psi, amp.coeffs());
        max_overlap = o.iter().fold(max_overlap, |m, z| m.max(z.norm()));
        overlaps.push(o);
    }
    let cut = OVERLAP_THRESHOLD * max_overlap;
    let mut values = Vec::with_capacity(basis.phi().len() * xi_len);
    for (&phi, o) in basis.phi().points().iter().zip(&overlaps) {
        let num = ops.at(phi, o);
        values.extend(
            o.iter()
                .zip(&num)
                .map(|(o, n)| if o.norm() >= cut { Some(n / o) } else { None }),
        );
    }
    Ok(Representation {
        values,
        basis: basis.clone(),
        xi_len,
    })
}

/// Conditional expectation `∫dxi S_nu S / ∫dxi S`, smeared over `phi` by
/// the detector kernel.
///
/// `S_nu S` is evaluated as `<phi|nu|xi><xi|rho|phi>`, its continuous
/// extension through points of vanishing overlap.
pub fn conditional_expectation(
    nu: &Observable,
    rho: &DensityOperator,
    basis: &BasisPair,
    kernel: &DetectorKernel,
    phi: f64,
) -> Result<Complex64> {
    if nu.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: nu.dim(),
        });
    }
    let mut amp = AmplitudeBuilder::new(basis, rho)?;
    let mut ops = OperatorAmplitudes::new(basis, nu)?;
    let w = basis.xi_weights(rho.dim());
    let (mut num, mut den) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for (x, k) in kernel.rule(phi) {
        if k == 0.0 {
            continue;
        }
        let a = amp.at(x);
        let nu_amp = ops.at(x, &a.overlap);
        for j in 0..w.len() {
            num += k * w[j] * nu_amp[j] * a.xi_rho_phi[j];
            den += k * w[j] * a.overlap[j] * a.xi_rho_phi[j];
        }
    }
    if !(den.norm() > MIN_POSTSELECTION) {
        return Err(Error::UndefinedWeakValue(den.norm()));
    }
    Ok(num / den)
}

/// Weak value of the density operator, `<xi|rho|phi> / <xi|phi>`, on the
/// basis grid. `T` is this times the nonnegative `|<phi|xi>|^2`, so the two
/// share their sign wherever the overlap is defined.
pub fn density_weak_values(rho: &DensityOperator, basis: &BasisPair) -> Result<Vec<Option<Complex64>>> {
    let mut amp = AmplitudeBuilder::new(basis, rho)?;
    let rows: Vec<_> = basis.phi().points().iter().map(|&phi| amp.at(phi)).collect();
    let max_overlap = rows
        .iter()
        .flat_map(|a| a.overlap.iter())
        .fold(0.0f64, |m, z| m.max(z.norm()));
    let cut = OVERLAP_THRESHOLD * max_overlap;
    Ok(rows
        .iter()
        .flat_map(|a| {
            a.overlap
                .iter()
                .zip(&a.xi_rho_phi)
                .map(move |(o, r)| if o.norm() >= cut { Some(r / o.conj()) } else { None })
        })
        .collect())
}
