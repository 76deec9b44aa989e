use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)] // unused when num-traits/std is on
use num_traits::Float;

use crate::error::{Error, Result};

/// Glauber P-distribution of a displaced thermal state,
/// `P(gamma) = exp(-|gamma - alpha|^2 / n_th) / (pi n_th)`.
///
/// Nonnegative for every `n_th > 0`; at `n_th = 0` it degenerates to a delta
/// function and is rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlauberP {
    alpha: Complex64,
    n_th: f64,
}

impl GlauberP {
    pub fn density(&self, gamma: Complex64) -> f64 {
        (-(gamma - self.alpha).norm_sqr() / self.n_th).exp() / (PI * self.n_th)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn n_th(&self) -> f64 {
        self.n_th
    }
}

pub fn glauber_p_displaced_thermal(alpha: Complex64, n_th: f64) -> Result<GlauberP> {
    if n_th == 0.0 {
        return Err(Error::DeltaDistribution);
    }
    if !(n_th > 0.0) || !n_th.is_finite() {
        return Err(Error::Domain {
            what: "n_th",
            value: n_th,
        });
    }
    Ok(GlauberP { alpha, n_th })
}
