//! Generalized Kirkwood (S) and Terletsky-Margenau-Hill (T)
//! quasi-probabilities over a basis pair `(|phi>, |xi>)`, with `|phi>`
//! always position eigenstates.
//!
//! ```text
//! S(phi, xi)    = <phi|xi><xi|rho|phi>
//! T(phi, xi)    = Re S(phi, xi)
//! S_nu(phi, xi) = <phi|nu|xi> / <phi|xi>
//! ```

mod basis;
mod distribution;
mod representation;

pub use basis::{BasisPair, XiBasis, DEFAULT_DISTRIBUTION_NODES};
pub use distribution::{
    effective_distribution, negativity_scan, s_distribution, t_distribution, DistributionKind, NegativityReport,
    QuasiDistribution,
};
pub use representation::{
    conditional_expectation, density_weak_values, s_representation, Representation, MIN_POSTSELECTION,
    OVERLAP_THRESHOLD,
};
