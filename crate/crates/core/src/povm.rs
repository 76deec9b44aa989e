//! Diagonal POVM detector models.
//!
//! An imperfect measurement of `phi` is `Pi_phi = ∫ dphi' K(phi, phi') |phi'><phi'|`
//! with a nonnegative kernel `K`. A valid kernel is normalized over `phi`
//! for every `phi'` and unbiased: its mean over `phi` is `phi'`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
#[allow(unused_imports)] // unused when num-traits/std is on
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fockspace::{DensityOperator, QuadratureGrid, Warning};
use crate::special::composite_rule;

/// Half-width of the Gaussian integration window, in standard deviations.
const GAUSSIAN_WINDOW: f64 = 10.0;
const PANEL_ORDER: usize = 16;

type KernelFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Gaussian,
    Delta,
    Custom,
}

#[derive(Clone)]
enum Shape {
    Delta,
    Gaussian { sigma: f64 },
    Custom { f: KernelFn, width: f64, support: f64 },
}

/// Kernel `K(phi, phi')` of a diagonal POVM.
#[derive(Clone)]
pub struct DetectorKernel {
    shape: Shape,
}

impl fmt::Debug for DetectorKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Delta => f.write_str("DetectorKernel::Delta"),
            Shape::Gaussian { sigma } => write!(f, "DetectorKernel::Gaussian({sigma})"),
            Shape::Custom { width, support, .. } => {
                write!(f, "DetectorKernel::Custom(width={width}, support={support})")
            }
        }
    }
}

impl DetectorKernel {
    /// Perfect projective detector.
    pub fn delta() -> Self {
        Self { shape: Shape::Delta }
    }

    /// User kernel. `support` bounds `|phi - phi'|` where `K` is nonzero;
    /// `width` is the nominal resolution reported by [`Self::width_sigma_eta`].
    pub fn custom<F>(f: F, width: f64, support: f64) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        if !(support > 0.0) || !support.is_finite() {
            return Err(Error::Domain {
                what: "kernel support",
                value: support,
            });
        }
        Ok(Self {
            shape: Shape::Custom {
                f: Arc::new(f),
                width,
                support,
            },
        })
    }

    pub fn kind(&self) -> KernelKind {
        match self.shape {
            Shape::Delta => KernelKind::Delta,
            Shape::Gaussian { .. } => KernelKind::Gaussian,
            Shape::Custom { .. } => KernelKind::Custom,
        }
    }

    pub fn width_sigma_eta(&self) -> f64 {
        match self.shape {
            Shape::Delta => 0.0,
            Shape::Gaussian { sigma } => sigma,
            Shape::Custom { width, .. } => width,
        }
    }

    /// Half-width beyond which the kernel is negligible.
    pub fn support(&self) -> f64 {
        match self.shape {
            Shape::Delta => 0.0,
            Shape::Gaussian { sigma } => GAUSSIAN_WINDOW * sigma,
            Shape::Custom { support, .. } => support,
        }
    }

    /// `K(phi, phi')`; `None` for the projective kernel, which has no
    /// pointwise density.
    pub fn density(&self, phi: f64, phi_prime: f64) -> Option<f64> {
        match &self.shape {
            Shape::Delta => None,
            Shape::Gaussian { sigma } => {
                let d = phi - phi_prime;
                Some((-d * d / (2.0 * sigma * sigma)).exp() / ((2.0 * PI).sqrt() * sigma))
            }
            Shape::Custom { f, .. } => Some(f(phi, phi_prime)),
        }
    }

    /// Quadrature rule for `∫ dphi' K(phi, phi') f(phi')`: pairs
    /// `(phi', weight * K(phi, phi'))`. The projective kernel yields the
    /// single node `(phi, 1)`.
    pub fn rule(&self, phi: f64) -> Vec<(f64, f64)> {
        match &self.shape {
            Shape::Delta => alloc::vec![(phi, 1.0)],
            Shape::Gaussian { sigma } => {
                let half = GAUSSIAN_WINDOW * sigma;
                let panel = (2.0 * sigma).min(0.5);
                composite_rule(phi - half, phi + half, panel, PANEL_ORDER)
                    .into_iter()
                    .map(|(x, w)| {
                        let d = phi - x;
                        (
                            x,
                            w * (-d * d / (2.0 * sigma * sigma)).exp() / ((2.0 * PI).sqrt() * sigma),
                        )
                    })
                    .collect()
            }
            Shape::Custom { f, support, .. } => {
                composite_rule(phi - support, phi + support, 0.25f64.min(*support / 2.0), PANEL_ORDER)
                    .into_iter()
                    .map(|(x, w)| (x, w * f(phi, x)))
                    .filter(|(_, w)| *w != 0.0)
                    .collect()
            }
        }
    }

    /// `∫ dphi' K(phi, phi') f(phi')`
    pub fn smear(&self, phi: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.rule(phi).into_iter().map(|(x, w)| w * f(x)).sum()
    }
}

/// Gaussian kernel of width `sigma_eta`; zero width gives the projective kind.
pub fn gaussian_kernel(sigma_eta: f64) -> Result<DetectorKernel> {
    if !(sigma_eta >= 0.0) || !sigma_eta.is_finite() {
        return Err(Error::Domain {
            what: "sigma_eta",
            value: sigma_eta,
        });
    }
    if sigma_eta == 0.0 {
        return Ok(DetectorKernel::delta());
    }
    Ok(DetectorKernel {
        shape: Shape::Gaussian { sigma: sigma_eta },
    })
}

/// Homodyne width for single-detector quantum efficiency `eta`:
/// `sigma_eta^2 = (1 - eta) / (2 eta)`.
pub fn sigma_from_efficiency(eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain {
            what: "eta",
            value: eta,
        });
    }
    Ok(((1.0 - eta) / (2.0 * eta)).sqrt())
}

/// Worst normalization and bias defects of a kernel over sampled `phi'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub max_normalization_defect: f64,
    pub max_bias: f64,
    pub samples: usize,
}

impl ValidationReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.samples > 0 && self.max_normalization_defect <= tol && self.max_bias.abs() <= tol
    }
}

/// Checks `∫ dphi K(phi, phi') = 1` and `∫ dphi phi K(phi, phi') = phi'` by
/// integrating over `phi` on `grid`, for every grid point `phi'` whose
/// kernel support fits inside the grid.
pub fn validate(kernel: &DetectorKernel, grid: &QuadratureGrid) -> ValidationReport {
    if kernel.kind() == KernelKind::Delta {
        return ValidationReport {
            max_normalization_defect: 0.0,
            max_bias: 0.0,
            samples: grid.len(),
        };
    }
    let reach = match kernel.kind() {
        KernelKind::Gaussian => 8.0 * kernel.width_sigma_eta(),
        _ => kernel.support(),
    };
    let mut report = ValidationReport {
        max_normalization_defect: 0.0,
        max_bias: 0.0,
        samples: 0,
    };
    for &phi_prime in grid.points() {
        if phi_prime - reach < grid.lower() || phi_prime + reach > grid.upper() {
            continue;
        }
        let (mut norm, mut mean) = (0.0, 0.0);
        for (phi, w) in grid.iter() {
            let k = kernel.density(phi, phi_prime).unwrap_or(0.0);
            norm += w * k;
            mean += w * phi * k;
        }
        report.samples += 1;
        report.max_normalization_defect = report.max_normalization_defect.max((norm - 1.0).abs());
        let bias = mean / norm - phi_prime;
        if bias.abs() > report.max_bias.abs() {
            report.max_bias = bias;
        }
    }
    report
}

/// Smeared postselection density `rho_eta(q) = Tr[Pi_q rho]`.
#[derive(Debug, Clone)]
pub struct EffectiveMarginal {
    rho: DensityOperator,
    kernel: DetectorKernel,
    grid: QuadratureGrid,
    values: Vec<f64>,
    warnings: Vec<Warning>,
}

impl EffectiveMarginal {
    pub fn density_at(&self, q: f64) -> f64 {
        self.kernel.smear(q, |x| self.rho.position_density(x))
    }

    /// Values at the grid points.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn total_probability(&self) -> f64 {
        self.grid.weights().iter().zip(&self.values).map(|(w, v)| w * v).sum()
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }
}

pub fn effective_marginal(rho: &DensityOperator, kernel: &DetectorKernel, grid: &QuadratureGrid) -> EffectiveMarginal {
    let edge = rho
        .position_density(grid.lower())
        .max(rho.position_density(grid.upper()));
    let mut warnings = Vec::new();
    if edge > 1e-10 {
        warnings.push(Warning::GridTooNarrow { edge_density: edge });
    }
    let mut m = EffectiveMarginal {
        rho: rho.clone(),
        kernel: kernel.clone(),
        grid: grid.clone(),
        values: Vec::new(),
        warnings,
    };
    m.values = grid.points().iter().map(|&q| m.density_at(q)).collect();
    m
}
