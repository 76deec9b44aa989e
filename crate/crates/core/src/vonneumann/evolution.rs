use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)] // unused when num-traits/std is on
use num_traits::Float;

use super::pointer::{GaussianComponent, PointerState};
use crate::error::{Error, Result};
use crate::fockspace::{fill_hermite_functions, DensityOperator, Observable, QuadratureGrid};
use crate::povm::{DetectorKernel, KernelKind};
use crate::special::normal_pdf;

/// Smallest conditional row mass accepted when extracting a shift.
pub const MIN_ROW_MASS: f64 = 1e-12;

/// Object and pointer after `exp(-i eps nu ⊗ P)`, kept in the eigenbasis
/// of `nu` where the coupling only translates the pointer.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    eigenvalues: Vec<f64>,
    /// Columns are eigenvectors of `nu` in Fock coordinates.
    eigenvectors: DMatrix<Complex64>,
    /// Object state in the eigenbasis.
    rho_eig: DMatrix<Complex64>,
    components: Vec<GaussianComponent>,
    /// Pointer translation attached to each eigenvector.
    shifts: Vec<f64>,
    epsilon: f64,
}

/// Exact evolution under the impulsive coupling `eps delta(t) nu ⊗ P`.
/// Only Gaussian-mixture pointers have a position readout to translate.
pub fn evolve_exact(
    rho_s: &DensityOperator,
    pointer: &PointerState,
    nu: &Observable,
    epsilon: f64,
) -> Result<JointState> {
    let comps = match pointer {
        PointerState::GaussianMixture(c) => c.clone(),
        _ => {
            return Err(Error::Unsupported(
                "translation coupling needs a Gaussian-mixture pointer",
            ))
        }
    };
    if !nu.is_hermitian() {
        return Err(Error::Unsupported("coupling observable must be Hermitian"));
    }
    if nu.dim() != rho_s.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho_s.dim(),
            got: nu.dim(),
        });
    }
    if !epsilon.is_finite() {
        return Err(Error::Domain {
            what: "epsilon",
            value: epsilon,
        });
    }
    let eig = nu.matrix().clone().symmetric_eigen();
    let eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let v = eig.eigenvectors;
    let rho_eig = v.adjoint() * rho_s.matrix() * &v;
    Ok(JointState {
        shifts: eigenvalues.iter().map(|l| epsilon * l).collect(),
        eigenvalues,
        eigenvectors: v,
        rho_eig,
        components: comps,
        epsilon,
    })
}

impl JointState {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Applies a further coupling step of strength `eps` with the same
    /// observable.
    pub fn step(&self, eps: f64) -> Self {
        let mut next = self.clone();
        for (s, l) in next.shifts.iter_mut().zip(&self.eigenvalues) {
            *s += eps * l;
        }
        next.epsilon += eps;
        next
    }

    /// `<l| Pi_phi |k>` for the object's eigenvectors.
    fn object_overlaps(&self, kernel: &DetectorKernel, phi: f64) -> DMatrix<Complex64> {
        let dim = self.eigenvalues.len();
        let mut out = DMatrix::zeros(dim, dim);
        let mut psi = Vec::with_capacity(dim);
        for (x, w) in kernel.rule(phi) {
            if w == 0.0 {
                continue;
            }
            fill_hermite_functions(x, dim, &mut psi);
            let chi: Vec<Complex64> = (0..dim)
                .map(|k| (0..dim).map(|m| self.eigenvectors[(m, k)] * psi[m]).sum())
                .collect();
            for l in 0..dim {
                let cl = chi[l].conj() * w;
                for k in 0..dim {
                    out[(l, k)] += cl * chi[k];
                }
            }
        }
        out
    }

    /// `sum_c w_c <g_cl| Pi_Q |g_ck>` for every pair.
    fn pointer_overlaps(&self, kernel: &DetectorKernel, q: f64) -> DMatrix<Complex64> {
        let dim = self.eigenvalues.len();
        let mut out = DMatrix::zeros(dim, dim);
        for c in &self.components {
            let var = c.width * c.width;
            for k in 0..dim {
                for l in 0..dim {
                    let d = self.shifts[k] - self.shifts[l];
                    let mean = c.center + 0.5 * (self.shifts[k] + self.shifts[l]);
                    let envelope = (-d * d / (8.0 * var)).exp();
                    let phase = Complex64::from_polar(1.0, -c.boost * d);
                    out[(l, k)] += c.weight * envelope * phase * smeared_normal(kernel, q, mean, var);
                }
            }
        }
        out
    }
}

/// `∫ dQ' K(Q, Q') N(Q'; mean, var)`.
fn smeared_normal(kernel: &DetectorKernel, q: f64, mean: f64, var: f64) -> f64 {
    match kernel.kind() {
        KernelKind::Delta => normal_pdf(q, mean, var),
        KernelKind::Gaussian => {
            let s = kernel.width_sigma_eta();
            normal_pdf(q, mean, var + s * s)
        }
        KernelKind::Custom => kernel.smear(q, |x| normal_pdf(x, mean, var)),
    }
}

/// `rho_eps(phi, Q) = Tr(Pi_phi Pi_Q rho_eps)` on a grid, one row per `phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointOutcomeTable {
    phi: QuadratureGrid,
    q: QuadratureGrid,
    values: Vec<f64>,
    epsilon: f64,
}

pub fn joint_distribution(
    joint: &JointState,
    kernel_phi: &DetectorKernel,
    kernel_q: &DetectorKernel,
    phi_grid: &QuadratureGrid,
    q_grid: &QuadratureGrid,
) -> JointOutcomeTable {
    let objects: Vec<DMatrix<Complex64>> = phi_grid
        .points()
        .iter()
        .map(|&phi| {
            joint
                .object_overlaps(kernel_phi, phi)
                .component_mul(&joint.rho_eig.transpose())
        })
        .collect();
    let mut values = Vec::with_capacity(phi_grid.len() * q_grid.len());
    let pointers: Vec<DMatrix<Complex64>> = q_grid
        .points()
        .iter()
        .map(|&q| joint.pointer_overlaps(kernel_q, q))
        .collect();
    for obj in &objects {
        for ptr in &pointers {
            values.push(obj.component_mul(ptr).sum().re);
        }
    }
    JointOutcomeTable {
        phi: phi_grid.clone(),
        q: q_grid.clone(),
        values,
        epsilon: joint.epsilon,
    }
}

impl JointOutcomeTable {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn phi_grid(&self) -> &QuadratureGrid {
        &self.phi
    }

    pub fn q_grid(&self) -> &QuadratureGrid {
        &self.q
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i_phi: usize, j_q: usize) -> f64 {
        self.values[i_phi * self.q.len() + j_q]
    }

    pub fn row(&self, i_phi: usize) -> &[f64] {
        let n = self.q.len();
        &self.values[i_phi * n..(i_phi + 1) * n]
    }

    pub fn total(&self) -> f64 {
        self.phi_marginal()
            .iter()
            .zip(self.phi.weights())
            .map(|(m, w)| m * w)
            .sum()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `∫ dQ rho_eps(phi, Q)` for every `phi`.
    pub fn phi_marginal(&self) -> Vec<f64> {
        (0..self.phi.len())
            .map(|i| self.row(i).iter().zip(self.q.weights()).map(|(v, w)| v * w).sum())
            .collect()
    }

    /// `∫ dphi rho_eps(phi, Q)` for every `Q`.
    pub fn q_marginal(&self) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.q.len()];
        for (i, &w) in self.phi.weights().iter().enumerate() {
            for (acc, v) in out.iter_mut().zip(self.row(i)) {
                *acc += w * v;
            }
        }
        out
    }

    fn row_index(&self, phi: f64) -> Result<usize> {
        self.phi
            .position_of(phi, 1e-12 * (1.0 + phi.abs()))
            .ok_or(Error::NotOnGrid(phi))
    }

    /// `E(Q | phi)`
    pub fn conditional_mean(&self, phi: f64) -> Result<f64> {
        let row = self.row(self.row_index(phi)?);
        let (mut mass, mut first) = (0.0, 0.0);
        for ((&v, &q), &w) in row.iter().zip(self.q.points()).zip(self.q.weights()) {
            mass += w * v;
            first += w * v * q;
        }
        if !(mass > MIN_ROW_MASS) {
            return Err(Error::UndefinedWeakValue(mass));
        }
        Ok(first / mass)
    }
}

/// `[E_eps(Q|phi) - E_0(Q|phi)] / eps`, the pointer's estimate of
/// `Re nu_w(phi)`.
pub fn conditional_pointer_shift(table: &JointOutcomeTable, phi: f64, baseline: &JointOutcomeTable) -> Result<f64> {
    let eps = table.epsilon - baseline.epsilon;
    if eps == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    Ok((table.conditional_mean(phi)? - baseline.conditional_mean(phi)?) / eps)
}
