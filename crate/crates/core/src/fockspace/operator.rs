use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)] // unused when num-traits/std is on
use num_traits::Float;

use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    Annihilation,
    Creation,
    Number,
    Position,
    Momentum,
    MomentumSquared,
    Hamiltonian,
}

/// Standard-ordered (all `q` to the left of all `p`) polynomial symbol of
/// an operator, `sum c_jk q^j p^k`.
///
/// For such an operator `<q|A|p> / <q|p>` is exactly the polynomial, which
/// is what makes momentum-basis representations computable without
/// expanding a plane wave in Fock states.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceSymbol {
    terms: Vec<(u32, u32, Complex64)>,
}

impl PhaseSpaceSymbol {
    pub fn new(terms: Vec<(u32, u32, Complex64)>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[(u32, u32, Complex64)] {
        &self.terms
    }

    pub fn eval(&self, q: f64, p: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(j, k, c)| c * q.powi(j as i32) * p.powi(k as i32))
            .sum()
    }
}

/// Operator on the truncated Fock space.
///
/// Hermitian for every kind except the ladder operators, which are kept
/// here because their (complex) weak values are still meaningful.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: DMatrix<Complex64>,
    spectrum_lower_bound: f64,
    symbol: Option<PhaseSpaceSymbol>,
    hermitian: bool,
}

impl Observable {
    /// Hermitian observable with a known lower bound on its spectrum
    /// (`f64::NEG_INFINITY` when unbounded).
    pub fn new(matrix: DMatrix<Complex64>, spectrum_lower_bound: f64) -> Result<Self> {
        check_square(&matrix)?;
        let defect = hermitian_defect(&matrix);
        if defect > HERMITIAN_TOL * (1.0 + max_abs(&matrix)) {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self {
            matrix,
            spectrum_lower_bound,
            symbol: None,
            hermitian: true,
        })
    }

    /// General, possibly non-Hermitian operator.
    pub fn general(matrix: DMatrix<Complex64>) -> Result<Self> {
        check_square(&matrix)?;
        let hermitian = hermitian_defect(&matrix) <= HERMITIAN_TOL * (1.0 + max_abs(&matrix));
        Ok(Self {
            matrix,
            spectrum_lower_bound: f64::NEG_INFINITY,
            symbol: None,
            hermitian,
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let mut o = Self::new(DMatrix::identity(dim, dim), 1.0)?;
        o.symbol = Some(PhaseSpaceSymbol::new(alloc::vec![(0, 0, c(1.0))]));
        Ok(o)
    }

    pub fn with_symbol(mut self, symbol: PhaseSpaceSymbol) -> Self {
        self.symbol = Some(symbol);
        self
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn spectrum_lower_bound(&self) -> f64 {
        self.spectrum_lower_bound
    }

    pub fn symbol(&self) -> Option<&PhaseSpaceSymbol> {
        self.symbol.as_ref()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Eigenvalues in ascending order (Hermitian operators only).
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.hermitian {
            return Err(Error::NotHermitian(hermitian_defect(&self.matrix)));
        }
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        Ok(ev)
    }
}

/// Builds the truncated matrix of a standard oscillator operator.
///
/// Quadratic operators are the projection of the exact operator onto the
/// first `dim` levels, not the product of truncated linear operators.
pub fn make_operator(kind: OperatorKind, dim: usize) -> Result<Observable> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    let a = annihilation(dim);
    let ad = a.adjoint();
    let s = FRAC_1_SQRT_2;
    let i = Complex64::i();
    let (matrix, bound, terms): (DMatrix<Complex64>, f64, Vec<(u32, u32, Complex64)>) = match kind {
        OperatorKind::Annihilation => (a, f64::NEG_INFINITY, alloc::vec![(1, 0, c(s)), (0, 1, i * s)]),
        OperatorKind::Creation => (ad, f64::NEG_INFINITY, alloc::vec![(1, 0, c(s)), (0, 1, -i * s)]),
        OperatorKind::Number => (
            number(dim),
            0.0,
            alloc::vec![(2, 0, c(0.5)), (0, 2, c(0.5)), (0, 0, c(-0.5))],
        ),
        OperatorKind::Hamiltonian => (
            number(dim) + DMatrix::identity(dim, dim) * c(0.5),
            0.5,
            alloc::vec![(2, 0, c(0.5)), (0, 2, c(0.5))],
        ),
        OperatorKind::Position => ((&a + &ad) * c(s), f64::NEG_INFINITY, alloc::vec![(1, 0, c(1.0))]),
        OperatorKind::Momentum => ((&a - &ad) * (-i * s), f64::NEG_INFINITY, alloc::vec![(0, 1, c(1.0))]),
        OperatorKind::MomentumSquared => {
            // (2n + 1 - a^2 - a^dag^2) / 2 with exact matrix elements
            let mut m = DMatrix::zeros(dim, dim);
            for n in 0..dim {
                m[(n, n)] = c(n as f64 + 0.5);
                if n + 2 < dim {
                    let v = c(-0.5 * (((n + 1) * (n + 2)) as f64).sqrt());
                    m[(n, n + 2)] = v;
                    m[(n + 2, n)] = v;
                }
            }
            (m, 0.0, alloc::vec![(0, 2, c(1.0))])
        }
    };
    let hermitian = !matches!(kind, OperatorKind::Annihilation | OperatorKind::Creation);
    Ok(Observable {
        matrix,
        spectrum_lower_bound: bound,
        symbol: Some(PhaseSpaceSymbol::new(terms)),
        hermitian,
    })
}

fn annihilation(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = c((n as f64).sqrt());
    }
    a
}

fn number(dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |r, k| if r == k { c(r as f64) } else { c(0.0) })
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check_square(m: &DMatrix<Complex64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    if m.nrows() < 2 {
        return Err(Error::InvalidDimension(m.nrows()));
    }
    Ok(())
}

pub(crate) fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    let mut d: f64 = 0.0;
    for r in 0..m.nrows() {
        for k in r..m.ncols() {
            d = d.max((m[(r, k)] - m[(k, r)].conj()).norm());
        }
    }
    d
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc: f64, z| acc.max(z.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_and_hamiltonian_are_diagonal() {
        let n = make_operator(OperatorKind::Number, 4).unwrap();
        let h = make_operator(OperatorKind::Hamiltonian, 4).unwrap();
        for k in 0..4 {
            assert_eq!(n.matrix()[(k, k)].re, k as f64);
            assert_eq!(h.matrix()[(k, k)].re, k as f64 + 0.5);
        }
        assert_eq!(h.spectrum_lower_bound(), 0.5);
        assert_eq!(n.spectrum_lower_bound(), 0.0);
        assert!(make_operator(OperatorKind::Position, 4)
            .unwrap()
            .spectrum_lower_bound()
            .is_infinite());
    }

    #[test]
    fn rejects_small_dimension() {
        assert_eq!(make_operator(OperatorKind::Number, 1), Err(Error::InvalidDimension(1)));
    }

    #[test]
    fn canonical_commutator_away_from_cutoff() {
        let q = make_operator(OperatorKind::Position, 40).unwrap();
        let p = make_operator(OperatorKind::Momentum, 40).unwrap();
        let comm = q.matrix() * p.matrix() - p.matrix() * q.matrix();
        for r in 0..30 {
            for k in 0..30 {
                let want = if r == k { Complex64::i() } else { c(0.0) };
                assert!((comm[(r, k)] - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn ladder_from_quadratures() {
        let dim = 12;
        let a = make_operator(OperatorKind::Annihilation, dim).unwrap();
        let q = make_operator(OperatorKind::Position, dim).unwrap();
        let p = make_operator(OperatorKind::Momentum, dim).unwrap();
        let rebuilt = (q.matrix() + p.matrix() * Complex64::i()) * c(FRAC_1_SQRT_2);
        assert!((rebuilt - a.matrix()).iter().all(|z| z.norm() < 1e-12));
        assert!(!a.is_hermitian());
        assert!(q.is_hermitian());
    }

    #[test]
    fn hamiltonian_is_half_p2_plus_q2_projected() {
        let dim = 10;
        let p2 = make_operator(OperatorKind::MomentumSquared, dim).unwrap();
        let q = make_operator(OperatorKind::Position, dim).unwrap();
        let h = make_operator(OperatorKind::Hamiltonian, dim).unwrap();
        // q^2 projected differs from q*q only in the last level
        let q2 = q.matrix() * q.matrix();
        let sum = (p2.matrix() + q2) * c(0.5);
        for r in 0..dim - 1 {
            for k in 0..dim - 1 {
                assert!((sum[(r, k)] - h.matrix()[(r, k)]).norm() < 1e-12);
            }
        }
        let ev = p2.eigenvalues().unwrap();
        assert!(ev[0] >= -1e-12);
    }

    #[test]
    fn symbols_evaluate() {
        let h = make_operator(OperatorKind::Hamiltonian, 4).unwrap();
        assert!((h.symbol().unwrap().eval(1.0, 2.0) - c(2.5)).norm() < 1e-15);
        let n = make_operator(OperatorKind::Number, 4).unwrap();
        assert!((n.symbol().unwrap().eval(1.0, 2.0) - c(2.0)).norm() < 1e-15);
    }

    #[test]
    fn observable_rejects_non_hermitian() {
        let m = annihilation(3);
        assert!(matches!(Observable::new(m.clone(), 0.0), Err(Error::NotHermitian(_))));
        assert!(!Observable::general(m).unwrap().is_hermitian());
    }
}
