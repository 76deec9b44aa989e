//! Truncated Fock-space linear algebra: states, operators and the
//! quadrature (position) representation.

mod glauber;
mod grid;
mod operator;
mod state;
mod wavefunction;

pub use glauber::{glauber_p_displaced_thermal, GlauberP};
pub use grid::{default_half_width, QuadratureGrid, DEFAULT_NODES};
pub use operator::{make_operator, Observable, OperatorKind, PhaseSpaceSymbol};
pub use state::{
    amplitude_from_quadratures, coherent_state, displaced_thermal_state, displacement, position_kernel,
    DensityOperator, FockSpace, Warning,
};
pub use wavefunction::{hermite_functions, momentum_wavefunctions, position_momentum_overlap, quadrature_wavefunction};

pub(crate) use wavefunction::{fill_hermite_functions, minus_i_pow};
