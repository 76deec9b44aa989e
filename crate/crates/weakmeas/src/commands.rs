//! The four subcommands, on fully resolved parameters.

use std::io::Write;
use std::str::FromStr;

use serde_json::{json, Value};
use weakmeas_core::fockspace::{
    amplitude_from_quadratures, coherent_state, displaced_thermal_state, make_operator, DensityOperator, OperatorKind,
    QuadratureGrid, Warning,
};
use weakmeas_core::povm::{gaussian_kernel, sigma_from_efficiency, DetectorKernel};
use weakmeas_core::quasiprob::{effective_distribution, s_distribution, t_distribution, BasisPair, DistributionKind};
use weakmeas_core::vonneumann::{
    check_zero_current, conditional_pointer_shift, evolve_exact, joint_distribution, simulate_cross_kerr,
    simulate_qubit_pointer, GaussianComponent, PointerState, CURRENT_TOL,
};
use weakmeas_core::weakvalues::{
    classify_value, closed_profile, postselection_density, weak_value, ProfileObservable, StateParams,
};
use weakmeas_core::{Complex64, Error};

use crate::error::{CliError, CliResult};
use crate::table::{rows_of, write_grid, Summary};

/// Object state: displaced thermal by default, or a Fock state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSpec {
    pub alpha_r: f64,
    pub alpha_i: f64,
    pub n_th: f64,
    pub eta: f64,
    pub fock: Option<usize>,
    pub dim: usize,
}

impl StateSpec {
    pub fn validate(&self) -> CliResult<()> {
        let finite = [self.alpha_r, self.alpha_i, self.n_th, self.eta]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(CliError::usage("state parameters must be finite"));
        }
        if self.n_th < 0.0 {
            return Err(CliError::usage(format!("--nth {} must be nonnegative", self.n_th)));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(CliError::usage(format!("--eta {} must lie in (0, 1]", self.eta)));
        }
        if self.dim < 2 {
            return Err(CliError::usage("Fock dimension must be at least 2"));
        }
        if let Some(k) = self.fock {
            if k >= self.dim {
                return Err(CliError::usage(format!(
                    "--fock {k} needs a truncation above {}",
                    self.dim
                )));
            }
        }
        Ok(())
    }

    pub fn density(&self) -> CliResult<DensityOperator> {
        Ok(match self.fock {
            Some(k) => DensityOperator::fock(k, self.dim)?,
            None => displaced_thermal_state(
                amplitude_from_quadratures(self.alpha_r, self.alpha_i),
                self.n_th,
                self.dim,
            )?,
        })
    }

    pub fn sigma_eta(&self) -> CliResult<f64> {
        Ok(sigma_from_efficiency(self.eta)?)
    }

    pub fn kernel(&self) -> CliResult<DetectorKernel> {
        Ok(gaussian_kernel(self.sigma_eta()?)?)
    }

    fn to_json(self) -> Value {
        json!({
            "alpha_r": self.alpha_r,
            "alpha_i": self.alpha_i,
            "n_th": self.n_th,
            "eta": self.eta,
            "fock": self.fock,
            "dim": self.dim,
        })
    }
}

fn warnings_json(ws: &[Warning]) -> Vec<String> {
    ws.iter().map(|w| format!("{w:?}")).collect()
}

/// Observable tags accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableTag {
    P2,
    H,
    N,
    Q,
    P,
}

impl ObservableTag {
    pub fn label(self) -> &'static str {
        match self {
            Self::P2 => "p2",
            Self::H => "H",
            Self::N => "n",
            Self::Q => "q",
            Self::P => "p",
        }
    }

    pub fn kind(self) -> OperatorKind {
        match self {
            Self::P2 => OperatorKind::MomentumSquared,
            Self::H => OperatorKind::Hamiltonian,
            Self::N => OperatorKind::Number,
            Self::Q => OperatorKind::Position,
            Self::P => OperatorKind::Momentum,
        }
    }

    /// The observables with closed-form profiles.
    pub fn profile(self) -> Option<ProfileObservable> {
        match self {
            Self::P2 => Some(ProfileObservable::MomentumSquared),
            Self::H => Some(ProfileObservable::Energy),
            Self::N => Some(ProfileObservable::Number),
            _ => None,
        }
    }
}

impl FromStr for ObservableTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "p2" => Ok(Self::P2),
            "H" | "h" => Ok(Self::H),
            "n" => Ok(Self::N),
            "q" => Ok(Self::Q),
            "p" => Ok(Self::P),
            _ => Err(format!("unknown observable {s:?} (p2, H, n, q, p)")),
        }
    }
}

pub fn weak_value_report(obs: ObservableTag, state: &StateSpec, q: f64) -> CliResult<Value> {
    state.validate()?;
    if !q.is_finite() {
        return Err(CliError::usage("--q must be finite"));
    }
    let rho = state.density()?;
    let kernel = state.kernel()?;
    let nu = make_operator(obs.kind(), state.dim)?;
    let v = weak_value(&nu, &rho, &kernel, q)?;
    let closed = match (obs.profile(), state.fock) {
        (Some(p), None) => {
            let prm = StateParams::new(state.alpha_r, state.alpha_i, state.n_th, state.sigma_eta()?)?;
            Some(closed_profile(p, &prm)?.re_value(q))
        }
        _ => None,
    };
    let category = obs.profile().map(|p| classify_value(p, v.re).label());
    Ok(json!({
        "params": {
            "observable": obs.label(),
            "q": q,
            "state": state.to_json(),
        },
        "results": {
            "re": v.re,
            "im": v.im,
            "category": category,
            "postselection_density": postselection_density(&rho, &kernel, q),
            "closed_form_re": closed,
            "warnings": warnings_json(rho.warnings()),
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiChoice {
    Fock,
    Momentum,
}

impl FromStr for XiChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fock" => Ok(Self::Fock),
            "momentum" => Ok(Self::Momentum),
            _ => Err(format!("unknown xi basis {s:?} (fock or momentum)")),
        }
    }
}

pub fn parse_kind(s: &str) -> Result<DistributionKind, String> {
    match s {
        "S" => Ok(DistributionKind::S),
        "T" => Ok(DistributionKind::T),
        "S_eta" => Ok(DistributionKind::SEta),
        "T_eta" => Ok(DistributionKind::TEta),
        _ => Err(format!("unknown distribution kind {s:?} (S, T, S_eta, T_eta)")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nodes: usize,
    pub half_width: Option<f64>,
}

/// Writes the grid CSV to `out` and returns the JSON summary record.
pub fn distribution_report<W: Write>(
    kind: DistributionKind,
    xi: XiChoice,
    state: &StateSpec,
    grid: GridSpec,
    out: W,
) -> CliResult<Value> {
    state.validate()?;
    if grid.nodes < 2 {
        return Err(CliError::usage("--nodes must be at least 2"));
    }
    let alpha_sq = 0.5 * (state.alpha_r * state.alpha_r + state.alpha_i * state.alpha_i);
    let load = state.fock.map_or(alpha_sq + state.n_th, |k| k as f64);
    let half = grid
        .half_width
        .unwrap_or_else(|| weakmeas_core::fockspace::default_half_width(load, 0.0));
    if !(half > 0.0) || !half.is_finite() {
        return Err(CliError::usage("--half-width must be positive"));
    }
    let g = QuadratureGrid::symmetric(half, grid.nodes)?;
    let basis = match xi {
        XiChoice::Fock => BasisPair::position_fock(g),
        XiChoice::Momentum => BasisPair::position_momentum(g.clone(), g),
    };
    let rho = state.density()?;
    let s = s_distribution(&rho, &basis)?;
    let d = match kind {
        DistributionKind::S => s,
        DistributionKind::T => t_distribution(&s),
        DistributionKind::SEta => effective_distribution(&s, &state.kernel()?)?,
        DistributionKind::TEta => t_distribution(&effective_distribution(&s, &state.kernel()?)?),
    };
    let rows = rows_of(&d);
    let summary = write_grid(&rows, out)?;
    Ok(json!({
        "params": {
            "kind": kind.label(),
            "xi_basis": match xi { XiChoice::Fock => "fock", XiChoice::Momentum => "momentum" },
            "nodes": grid.nodes,
            "half_width": half,
            "state": state.to_json(),
        },
        "results": summary_json(&summary, &d),
    }))
}

fn summary_json(s: &Summary, d: &weakmeas_core::quasiprob::QuasiDistribution) -> Value {
    let mut warnings = warnings_json(d.warnings());
    warnings.extend(warnings_json(d.state().warnings()));
    json!({
        "min_value": s.min_value,
        "phi_at_min": s.phi_at_min,
        "xi_at_min": s.xi_at_min,
        "negative_mass_fraction": s.negative_mass_fraction,
        "total": s.total,
        "max_imaginary": d.max_imaginary(),
        "warnings": warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    Generic,
    Kerr,
    Qubit,
}

impl FromStr for Coupling {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "generic" => Ok(Self::Generic),
            "kerr" => Ok(Self::Kerr),
            "qubit" => Ok(Self::Qubit),
            _ => Err(format!("unknown coupling {s:?} (generic, kerr, qubit)")),
        }
    }
}

/// `weight:center:width[:boost]` components separated by `;` or `,`.
pub fn parse_pointer(spec: &str) -> Result<Vec<GaussianComponent>, String> {
    spec.split([';', ','])
        .filter(|s| !s.trim().is_empty())
        .map(|c| {
            let v: Vec<f64> = c
                .split(':')
                .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
                .collect::<Result<_, _>>()?;
            match v.as_slice() {
                [w, m, s] => Ok(GaussianComponent::new(*w, *m, *s)),
                [w, m, s, k] => Ok(GaussianComponent::new(*w, *m, *s).with_boost(*k)),
                _ => Err(format!("pointer component {c:?} needs weight:center:width[:boost]")),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateSpec {
    pub coupling: Coupling,
    pub epsilon: f64,
    pub observable: ObservableTag,
    pub pointer_sigma: f64,
    pub pointer: Option<Vec<GaussianComponent>>,
    pub q: f64,
    pub state: StateSpec,
    /// Real coherent amplitude of the cross-Kerr probe.
    pub probe_amplitude: f64,
    pub theta: f64,
    pub qubit: (f64, f64),
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den != 0.0 && num.is_finite() && den.is_finite()).then(|| num / den)
}

pub fn simulate_report(spec: &SimulateSpec) -> CliResult<Value> {
    spec.state.validate()?;
    if !spec.epsilon.is_finite() || !spec.q.is_finite() {
        return Err(CliError::usage("--epsilon and --postselect-q must be finite"));
    }
    if spec.coupling != Coupling::Generic && spec.observable != ObservableTag::N {
        return Err(CliError::usage(
            "the kerr and qubit couplings measure the photon number n",
        ));
    }
    let rho = spec.state.density()?;
    let kernel = spec.state.kernel()?;
    let eps = spec.epsilon;
    // (raw shift, estimate at eps, estimate at eps/2, reference, extras)
    let (shift, estimate, half, reference, extra) = match spec.coupling {
        Coupling::Generic => {
            let pointer = match &spec.pointer {
                Some(c) => PointerState::mixture(c.clone()).map_err(|e| CliError::usage(e.to_string()))?,
                None => PointerState::gaussian(0.0, spec.pointer_sigma).map_err(|e| CliError::usage(e.to_string()))?,
            };
            let current = check_zero_current(&pointer)?;
            if !current.passes(CURRENT_TOL) {
                return Err(Error::PointerCurrent(current.max_violation).into());
            }
            let nu = make_operator(spec.observable.kind(), spec.state.dim)?;
            let pg = QuadratureGrid::new(vec![spec.q], vec![1.0])?;
            let qg = pointer.readout_grid(400)?;
            let delta = DetectorKernel::delta();
            let table = |e: f64| -> CliResult<_> {
                Ok(joint_distribution(
                    &evolve_exact(&rho, &pointer, &nu, e)?,
                    &kernel,
                    &delta,
                    &pg,
                    &qg,
                ))
            };
            let base = table(0.0)?;
            let mean0 = base.conditional_mean(spec.q)?;
            let shift = table(eps)?.conditional_mean(spec.q)? - mean0;
            let (est, half) = if eps == 0.0 {
                (None, None)
            } else {
                (
                    Some(shift / eps),
                    Some(conditional_pointer_shift(&table(0.5 * eps)?, spec.q, &base)?),
                )
            };
            let reference = weak_value(&nu, &rho, &kernel, spec.q)?;
            (
                shift,
                est,
                half,
                reference,
                json!({ "zero_current_violation": current.max_violation }),
            )
        }
        Coupling::Kerr => {
            let probe = coherent_state(Complex64::new(spec.probe_amplitude, 0.0), spec.state.dim)?;
            let r = simulate_cross_kerr(&rho, &probe, eps, spec.theta, &kernel, spec.q)?;
            let shift = r.quadrature - r.quadrature_baseline;
            let (est, half, phase) = if eps == 0.0 {
                (None, None, None)
            } else {
                let h = simulate_cross_kerr(&rho, &probe, 0.5 * eps, spec.theta, &kernel, spec.q)?;
                (Some(r.estimate), Some(h.estimate), Some(r.phase_estimate))
            };
            let extra = json!({
                "susceptibility": r.susceptibility,
                "phase_estimate": phase,
                "quadrature": r.quadrature,
                "quadrature_baseline": r.quadrature_baseline,
            });
            (shift, est, half, r.reference, extra)
        }
        Coupling::Qubit => {
            let ptr = PointerState::qubit(spec.qubit.0, spec.qubit.1).map_err(|e| CliError::usage(e.to_string()))?;
            let r = simulate_qubit_pointer(&rho, &ptr, eps, &kernel, spec.q)?;
            let shift = r.sigma_y - r.sigma_y_baseline;
            let (est, half) = if eps == 0.0 {
                (None, None)
            } else {
                let h = simulate_qubit_pointer(&rho, &ptr, 0.5 * eps, &kernel, spec.q)?;
                (Some(r.extracted_n), Some(h.extracted_n))
            };
            let linear = (eps != 0.0)
                .then(|| r.slope_y / (2.0 * spec.qubit.0))
                .filter(|v| v.is_finite());
            let extra = json!({
                "sigma_x": r.sigma_x,
                "sigma_y": r.sigma_y,
                "slope_x": r.slope_x,
                "slope_y": r.slope_y,
                "linear_estimate": linear,
            });
            (shift, est, half, r.reference, extra)
        }
    };
    let deviation = estimate.map(|e| e - reference.re);
    let relative = deviation.and_then(|d| ratio(d, reference.re.abs()));
    let richardson = deviation.zip(half).and_then(|(d, h)| ratio(d, h - reference.re));
    Ok(json!({
        "params": {
            "coupling": match spec.coupling { Coupling::Generic => "generic", Coupling::Kerr => "kerr", Coupling::Qubit => "qubit" },
            "epsilon": eps,
            "observable": spec.observable.label(),
            "pointer_sigma": spec.pointer_sigma,
            "pointer": spec.pointer.as_ref().map(|c| c.iter().map(|g| [g.weight, g.center, g.width, g.boost]).collect::<Vec<_>>()),
            "postselect_q": spec.q,
            "probe_amplitude": spec.probe_amplitude,
            "theta": spec.theta,
            "qubit": [spec.qubit.0, spec.qubit.1],
            "state": spec.state.to_json(),
        },
        "results": {
            "shift": shift,
            "estimate": estimate,
            "reference_re": reference.re,
            "reference_im": reference.im,
            "deviation": deviation,
            "relative_deviation": relative,
            "richardson_ratio": richardson,
            "details": extra,
        }
    }))
}
