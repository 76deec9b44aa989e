//! Numerical core for weak measurements with imperfect detectors.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure numerics:
//!
//! * [`fockspace`]: truncated Fock-space states, operators and the
//!   position-representation transforms built on Hermite functions.
//! * [`povm`]: diagonal detector kernels (Gaussian, projective, custom) and
//!   the smeared postselection marginal.
//! * [`quasiprob`]: generalized Kirkwood (S) and Terletsky-Margenau-Hill (T)
//!   distributions over a basis pair, observable representations,
//!   marginals and negativity scans.
//! * [`weakvalues`]: weak values by the trace formula, closed-form profiles
//!   for `p^2`, `H` and `n` on displaced thermal states, negativity
//!   probabilities and strange-value classification.
//! * [`vonneumann`]: exact finite-coupling pointer simulations, including
//!   the cross-Kerr and two-level-atom couplings.
//!
//! Units: `hbar = 1`, `omega = 1`, quadratures `q = (a + a^dag)/sqrt(2)`,
//! `p = (a - a^dag)/(i sqrt(2))` so that `[q, p] = i`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

extern crate alloc;

pub mod error;
pub mod fockspace;
pub mod povm;
pub mod quasiprob;
pub mod special;
pub mod vonneumann;
pub mod weakvalues;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Default Fock truncation.
pub const DEFAULT_DIM: usize = 40;
