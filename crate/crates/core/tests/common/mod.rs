#![allow(dead_code)]

use nalgebra::DMatrix;
use proptest::prelude::*;
use weakmeas_core::fockspace::DensityOperator;
use weakmeas_core::Complex64;

/// `G G^dag / Tr` from `2 dim^2` uniform entries.
pub fn mixed_state(dim: usize, entries: &[f64]) -> DensityOperator {
    let g = DMatrix::from_fn(dim, dim, |r, c| {
        let k = 2 * (r * dim + c);
        Complex64::new(entries[k], entries[k + 1])
    });
    DensityOperator::from_unnormalized(&g * g.adjoint()).unwrap()
}

pub fn mixed_states(dim: usize) -> impl Strategy<Value = DensityOperator> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim).prop_map(move |e| mixed_state(dim, &e))
}

/// Random Hermitian matrix with entries of order one.
pub fn hermitian(dim: usize, entries: &[f64]) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(dim, dim, |r, c| {
        let k = 2 * (r * dim + c);
        Complex64::new(entries[k], entries[k + 1])
    });
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn diagonal_states(dim: usize) -> impl Strategy<Value = DensityOperator> {
    prop::collection::vec(0.0f64..1.0, dim).prop_map(|w| {
        let total: f64 = w.iter().sum();
        let w: Vec<f64> = if total > 0.0 { w } else { vec![1.0; w.len()] };
        DensityOperator::diagonal(&w).unwrap()
    })
}

/// Embeds `rho` into a larger truncation with the top levels empty, so
/// operators that raise by two stay inside the space.
pub fn padded(rho: &DensityOperator, dim: usize) -> DensityOperator {
    let mut m = DMatrix::zeros(dim, dim);
    let d = rho.dim();
    m.view_mut((0, 0), (d, d)).copy_from(rho.matrix());
    DensityOperator::new(m).unwrap()
}
