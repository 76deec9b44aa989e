use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
#[allow(unused_imports)] // unused when num-traits/std is on
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fockspace::{make_operator, DensityOperator, OperatorKind, QuadratureGrid};

/// Largest zero-current violation accepted for a user pointer.
pub const CURRENT_TOL: f64 = 1e-8;

/// One pure Gaussian pointer wavefunction,
/// `(2 pi w^2)^(-1/4) exp(-(Q - c)^2 / (4 w^2) + i k Q)`, with mixing weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianComponent {
    pub weight: f64,
    pub center: f64,
    /// Standard deviation of `|psi(Q)|^2`.
    pub width: f64,
    /// Momentum boost `k`; nonzero boosts carry current.
    pub boost: f64,
}

impl GaussianComponent {
    pub fn new(weight: f64, center: f64, width: f64) -> Self {
        Self {
            weight,
            center,
            width,
            boost: 0.0,
        }
    }

    pub fn with_boost(mut self, k: f64) -> Self {
        self.boost = k;
        self
    }

    pub fn density(&self, q: f64) -> f64 {
        crate::special::normal_pdf(q, self.center, self.width * self.width)
    }

    pub fn amplitude(&self, q: f64) -> Complex64 {
        let d = q - self.center;
        let r = (2.0 * PI * self.width * self.width).powf(-0.25) * (-d * d / (4.0 * self.width * self.width)).exp();
        Complex64::from_polar(r, self.boost * q)
    }
}

/// State of the measuring device.
#[derive(Debug, Clone, PartialEq)]
pub enum PointerState {
    /// Incoherent mixture of Gaussian wavefunctions.
    GaussianMixture(Vec<GaussianComponent>),
    /// A bosonic mode, as in the cross-Kerr coupling.
    FockMode(DensityOperator),
    /// Two-level atom `(1 + s_x sigma_x + s_y sigma_y) / 2`.
    Qubit { s_x: f64, s_y: f64 },
}

impl PointerState {
    /// The default pointer: one real Gaussian of width 1 at the origin.
    pub fn default_gaussian() -> Self {
        Self::GaussianMixture(alloc::vec![GaussianComponent::new(1.0, 0.0, 1.0)])
    }

    pub fn gaussian(center: f64, width: f64) -> Result<Self> {
        Self::mixture(alloc::vec![GaussianComponent::new(1.0, center, width)])
    }

    /// Validates weights (nonnegative, renormalized to 1) and widths.
    pub fn mixture(mut comps: Vec<GaussianComponent>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::Unsupported("empty pointer mixture"));
        }
        for c in &comps {
            if !(c.weight >= 0.0) || !c.weight.is_finite() {
                return Err(Error::Domain {
                    what: "pointer weight",
                    value: c.weight,
                });
            }
            if !(c.width > 0.0) || !c.width.is_finite() {
                return Err(Error::Domain {
                    what: "pointer width",
                    value: c.width,
                });
            }
            if !c.center.is_finite() || !c.boost.is_finite() {
                return Err(Error::Domain {
                    what: "pointer center",
                    value: c.center,
                });
            }
        }
        let total: f64 = comps.iter().map(|c| c.weight).sum();
        if !(total > 0.0) {
            return Err(Error::Domain {
                what: "pointer weight",
                value: total,
            });
        }
        comps.iter_mut().for_each(|c| c.weight /= total);
        Ok(Self::GaussianMixture(comps))
    }

    pub fn qubit(s_x: f64, s_y: f64) -> Result<Self> {
        let r2 = s_x * s_x + s_y * s_y;
        if !(r2 <= 1.0 + 1e-12) {
            return Err(Error::Domain {
                what: "Bloch radius squared",
                value: r2,
            });
        }
        Ok(Self::Qubit { s_x, s_y })
    }

    /// Readout grid reaching 12 widths past every Gaussian component, or
    /// the default state grid for a mode pointer.
    pub fn readout_grid(&self, nodes: usize) -> Result<QuadratureGrid> {
        match self {
            Self::GaussianMixture(comps) => {
                let lo = comps
                    .iter()
                    .map(|c| c.center - 12.0 * c.width)
                    .fold(f64::INFINITY, f64::min);
                let hi = comps
                    .iter()
                    .map(|c| c.center + 12.0 * c.width)
                    .fold(f64::NEG_INFINITY, f64::max);
                QuadratureGrid::gauss_legendre(lo, hi, nodes)
            }
            Self::FockMode(rho) => {
                QuadratureGrid::symmetric(crate::fockspace::default_half_width(rho.dim() as f64 / 4.0, 0.0), nodes)
            }
            Self::Qubit { .. } => Err(Error::Unsupported("a qubit pointer has no position readout")),
        }
    }
}

/// Largest value of the current density `j(Q) = <Q|(P rho + rho P)|Q> / 2`
/// found on the sampled points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentReport {
    pub max_violation: f64,
    /// Where it occurs (`Q`, or the sign of the `sigma_x` eigenstate).
    pub location: f64,
    pub samples: usize,
}

impl CurrentReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_violation <= tol
    }
}

/// Zero-current check on the pointer's own readout grid (400 nodes); the
/// qubit form is checked on the two `sigma_x` eigenstates.
pub fn check_zero_current(pointer: &PointerState) -> Result<CurrentReport> {
    match pointer {
        PointerState::Qubit { s_x, s_y } => Ok(qubit_current(*s_x, *s_y)),
        _ => check_zero_current_on(pointer, &pointer.readout_grid(400)?),
    }
}

pub fn check_zero_current_on(pointer: &PointerState, grid: &QuadratureGrid) -> Result<CurrentReport> {
    let current: alloc::boxed::Box<dyn Fn(f64) -> f64> = match pointer {
        PointerState::GaussianMixture(comps) => {
            // -i d/dQ acting on a boosted Gaussian gives (k + i (Q - c)/(2 w^2)) psi
            let comps = comps.clone();
            alloc::boxed::Box::new(move |q| comps.iter().map(|c| c.weight * c.boost * c.density(q)).sum())
        }
        PointerState::FockMode(rho) => {
            let p = make_operator(OperatorKind::Momentum, rho.dim())?;
            let sym = p.matrix() * rho.matrix() + rho.matrix() * p.matrix();
            let sym: DMatrix<Complex64> = sym * Complex64::new(0.5, 0.0);
            alloc::boxed::Box::new(move |q| {
                let psi = crate::fockspace::hermite_functions(sym.nrows(), q);
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..psi.len() {
                    for k in 0..psi.len() {
                        acc += psi[r] * sym[(r, k)] * psi[k];
                    }
                }
                acc.re
            })
        }
        PointerState::Qubit { s_x, s_y } => return Ok(qubit_current(*s_x, *s_y)),
    };
    let mut report = CurrentReport {
        max_violation: 0.0,
        location: f64::NAN,
        samples: grid.len(),
    };
    for &q in grid.points() {
        let j = current(q).abs();
        if j > report.max_violation || report.location.is_nan() {
            report.max_violation = j;
            report.location = q;
        }
    }
    Ok(report)
}

pub(crate) fn qubit_density(s_x: f64, s_y: f64) -> Matrix2<Complex64> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    Matrix2::new(
        c(0.5, 0.0),
        c(0.5 * s_x, -0.5 * s_y),
        c(0.5 * s_x, 0.5 * s_y),
        c(0.5, 0.0),
    )
}

fn qubit_current(s_x: f64, s_y: f64) -> CurrentReport {
    let rho = qubit_density(s_x, s_y);
    let z = Matrix2::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(-1.0, 0.0),
    );
    let anti = z * rho + rho * z;
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let mut report = CurrentReport {
        max_violation: 0.0,
        location: 1.0,
        samples: 2,
    };
    for sign in [1.0, -1.0] {
        let v = nalgebra::Vector2::new(Complex64::new(h, 0.0), Complex64::new(sign * h, 0.0));
        let j = (v.adjoint() * anti * v)[(0, 0)].norm();
        if j > report.max_violation {
            report.max_violation = j;
            report.location = sign;
        }
    }
    report
}
