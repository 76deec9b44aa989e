use alloc::vec::Vec;
#[allow(unused_imports)] // unused when num-traits/std is on
use num_traits::Float;

use crate::error::{Error, Result};
use crate::special::gauss_legendre;

/// Default number of Gauss-Legendre nodes of a state grid.
pub const DEFAULT_NODES: usize = 400;

/// Quadrature points and weights along one real axis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    /// Validates strict ordering and positive weights.
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("no points"));
        }
        if points.len() != weights.len() {
            return Err(Error::InvalidGrid("points and weights differ in length"));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidGrid("non-finite point"));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid("points not strictly increasing"));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidGrid("non-positive weight"));
        }
        Ok(Self { points, weights })
    }

    /// Gauss-Legendre rule with `n` nodes on `[a, b]`.
    pub fn gauss_legendre(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(b > a) || n == 0 {
            return Err(Error::InvalidGrid("empty interval"));
        }
        let (x, w) = gauss_legendre(n);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        Self::new(
            x.iter().map(|x| mid + half * x).collect(),
            w.iter().map(|w| half * w).collect(),
        )
    }

    /// Gauss-Legendre rule on `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Self::gauss_legendre(-half_width, half_width, n)
    }

    /// Default grid for a displaced thermal state: `L = 6 + 2 sqrt(|alpha|^2 + n_th)`.
    pub fn for_state(alpha_sq: f64, n_th: f64) -> Result<Self> {
        Self::symmetric(default_half_width(alpha_sq, n_th), DEFAULT_NODES)
    }

    /// Equally spaced points with trapezoid weights.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(b > a) || n < 2 {
            return Err(Error::InvalidGrid("uniform grid needs n >= 2 on a proper interval"));
        }
        let h = (b - a) / (n - 1) as f64;
        let points = (0..n).map(|i| a + i as f64 * h).collect();
        let weights = (0..n).map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h }).collect();
        Self::new(points, weights)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lower(&self) -> f64 {
        self.points[0]
    }

    pub fn upper(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// `(point, weight)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }

    /// `sum w(q) <q|0>^2`, which is 1 on any adequate grid.
    pub fn vacuum_normalization(&self) -> f64 {
        self.integrate(|q| {
            let v = super::quadrature_wavefunction(0, q);
            v * v
        })
    }

    /// Index of a point equal to `x` within `tol`.
    pub fn position_of(&self, x: f64, tol: f64) -> Option<usize> {
        self.points.iter().position(|p| (p - x).abs() <= tol)
    }
}

pub fn default_half_width(alpha_sq: f64, n_th: f64) -> f64 {
    6.0 + 2.0 * (alpha_sq + n_th).max(0.0).sqrt()
}
