//! Exact finite-coupling simulation of the impulsive measurement
//! interaction `H = eps delta(t) nu ⊗ P`, with position, mode and two-level
//! pointers.

mod couplings;
mod evolution;
mod pointer;

pub use couplings::{simulate_cross_kerr, simulate_qubit_pointer, CrossKerrReport, QubitReport};
pub use evolution::{
    conditional_pointer_shift, evolve_exact, joint_distribution, JointOutcomeTable, JointState, MIN_ROW_MASS,
};
pub use pointer::{
    check_zero_current, check_zero_current_on, CurrentReport, GaussianComponent, PointerState, CURRENT_TOL,
};
