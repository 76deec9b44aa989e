use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)] // unused when num-traits/std is on
use num_traits::Float;

use super::basis::{AmplitudeBuilder, BasisPair};
use crate::error::{Error, Result};
use crate::fockspace::{DensityOperator, Warning};
use crate::povm::{DetectorKernel, KernelKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistributionKind {
    S,
    T,
    SEta,
    TEta,
}

impl DistributionKind {
    pub fn is_real(self) -> bool {
        matches!(self, Self::T | Self::TEta)
    }

    pub fn is_effective(self) -> bool {
        matches!(self, Self::SEta | Self::TEta)
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::S => "S",
            Self::T => "T",
            Self::SEta => "S_eta",
            Self::TEta => "T_eta",
        }
    }
}

/// Quasi-probability values on the `(phi, xi)` grid, stored row-major with
/// one row per `phi`.
#[derive(Debug, Clone)]
pub struct QuasiDistribution {
    kind: DistributionKind,
    values: Vec<Complex64>,
    basis: BasisPair,
    rho: DensityOperator,
    kernel: Option<DetectorKernel>,
    warnings: Vec<Warning>,
}

impl QuasiDistribution {
    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn basis(&self) -> &BasisPair {
        &self.basis
    }

    pub fn state(&self) -> &DensityOperator {
        &self.rho
    }

    pub fn kernel(&self) -> Option<&DetectorKernel> {
        self.kernel.as_ref()
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn phi_len(&self) -> usize {
        self.basis.phi().len()
    }

    pub fn xi_len(&self) -> usize {
        self.basis.xi_len(self.rho.dim())
    }

    pub fn phi_points(&self) -> &[f64] {
        self.basis.phi().points()
    }

    pub fn xi_points(&self) -> Vec<f64> {
        self.basis.xi_points(self.rho.dim())
    }

    pub fn xi_weights(&self) -> Vec<f64> {
        self.basis.xi_weights(self.rho.dim())
    }

    pub fn value(&self, i_phi: usize, j_xi: usize) -> Complex64 {
        self.values[i_phi * self.xi_len() + j_xi]
    }

    pub fn row(&self, i_phi: usize) -> &[Complex64] {
        let n = self.xi_len();
        &self.values[i_phi * n..(i_phi + 1) * n]
    }

    /// `∫ dxi S(phi, xi)` at every `phi`.
    pub fn phi_marginal(&self) -> Vec<Complex64> {
        let w = self.xi_weights();
        (0..self.phi_len())
            .map(|i| self.row(i).iter().zip(&w).map(|(v, w)| v * w).sum())
            .collect()
    }

    /// `∫ dphi S(phi, xi)` at every `xi`.
    pub fn xi_marginal(&self) -> Vec<Complex64> {
        let n = self.xi_len();
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); n];
        for (i, &w) in self.basis.phi().weights().iter().enumerate() {
            for (acc, v) in out.iter_mut().zip(self.row(i)) {
                *acc += v * w;
            }
        }
        out
    }

    /// `∫∫ S`, which is 1 up to grid truncation.
    pub fn total(&self) -> Complex64 {
        self.xi_marginal()
            .iter()
            .zip(self.xi_weights())
            .map(|(v, w)| v * w)
            .sum()
    }

    pub fn max_imaginary(&self) -> f64 {
        self.values.iter().fold(0.0, |m: f64, z| m.max(z.im.abs()))
    }
}

/// `S(phi, xi) = <phi|xi><xi|rho|phi>` on the basis grid.
pub fn s_distribution(rho: &DensityOperator, basis: &BasisPair) -> Result<QuasiDistribution> {
    let mut amp = AmplitudeBuilder::new(basis, rho)?;
    let n = basis.xi_len(rho.dim());
    let mut values = Vec::with_capacity(basis.phi().len() * n);
    for &phi in basis.phi().points() {
        let a = amp.at(phi);
        values.extend(a.overlap.iter().zip(&a.xi_rho_phi).map(|(o, r)| o * r));
    }
    let mut warnings = Vec::new();
    let edge = rho
        .position_density(basis.phi().lower())
        .max(rho.position_density(basis.phi().upper()));
    if edge > 1e-10 {
        warnings.push(Warning::GridTooNarrow { edge_density: edge });
    }
    Ok(QuasiDistribution {
        kind: DistributionKind::S,
        values,
        basis: basis.clone(),
        rho: rho.clone(),
        kernel: None,
        warnings,
    })
}

/// `T = Re S`. Already-real inputs are returned unchanged.
pub fn t_distribution(s: &QuasiDistribution) -> QuasiDistribution {
    let kind = match s.kind {
        DistributionKind::S | DistributionKind::T => DistributionKind::T,
        DistributionKind::SEta | DistributionKind::TEta => DistributionKind::TEta,
    };
    QuasiDistribution {
        kind,
        values: s.values.iter().map(|z| Complex64::new(z.re, 0.0)).collect(),
        basis: s.basis.clone(),
        rho: s.rho.clone(),
        kernel: s.kernel.clone(),
        warnings: s.warnings.clone(),
    }
}

/// `S_eta(phi, xi) = ∫ dphi' K(phi, phi') S(phi', xi)`.
///
/// The smeared values are recomputed from the state at the kernel's
/// quadrature nodes, so `phi'` is not restricted to the stored grid. A
/// T input yields `T_eta`.
pub fn effective_distribution(s: &QuasiDistribution, kernel: &DetectorKernel) -> Result<QuasiDistribution> {
    if s.kind.is_effective() {
        return Err(Error::Unsupported("distribution is already smeared"));
    }
    let mut out = if kernel.kind() == KernelKind::Delta {
        s.clone()
    } else {
        let mut amp = AmplitudeBuilder::new(&s.basis, &s.rho)?;
        let n = s.xi_len();
        let mut values = Vec::with_capacity(s.values.len());
        let mut row = alloc::vec![Complex64::new(0.0, 0.0); n];
        for &phi in s.basis.phi().points() {
            row.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            for (x, w) in kernel.rule(phi) {
                if w == 0.0 {
                    continue;
                }
                let a = amp.at(x);
                for ((acc, o), r) in row.iter_mut().zip(&a.overlap).zip(&a.xi_rho_phi) {
                    *acc += w * o * r;
                }
            }
            values.extend_from_slice(&row);
        }
        QuasiDistribution {
            kind: s.kind,
            values,
            basis: s.basis.clone(),
            rho: s.rho.clone(),
            kernel: None,
            warnings: s.warnings.clone(),
        }
    };
    out.kind = if s.kind.is_real() {
        out.values.iter_mut().for_each(|z| z.im = 0.0);
        DistributionKind::TEta
    } else {
        DistributionKind::SEta
    };
    out.kernel = Some(kernel.clone());
    Ok(out)
}

/// Where and how much a real distribution goes negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityReport {
    pub min_value: f64,
    /// `(phi, xi)` of the minimum.
    pub min_location: (f64, f64),
    /// `∫ |T| 1[T < 0] / ∫ |T|`
    pub negative_mass_fraction: f64,
}

/// Scans the real part of the grid values (for T kinds, the values
/// themselves).
pub fn negativity_scan(t: &QuasiDistribution) -> NegativityReport {
    let xi = t.xi_points();
    let xw = t.xi_weights();
    let n = xi.len();
    let mut report = NegativityReport {
        min_value: f64::INFINITY,
        min_location: (f64::NAN, f64::NAN),
        negative_mass_fraction: 0.0,
    };
    let (mut neg, mut abs) = (0.0, 0.0);
    for (i, (&phi, &pw)) in t.phi_points().iter().zip(t.basis.phi().weights()).enumerate() {
        for j in 0..n {
            let v = t.values[i * n + j].re;
            let m = pw * xw[j] * v.abs();
            abs += m;
            if v < 0.0 {
                neg += m;
            }
            if v < report.min_value {
                report.min_value = v;
                report.min_location = (phi, xi[j]);
            }
        }
    }
    if abs > 0.0 {
        report.negative_mass_fraction = neg / abs;
    }
    report
}
