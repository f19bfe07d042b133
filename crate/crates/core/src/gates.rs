//! Dense operators and the fixed gates the protocols use.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevec::StateVector;

/// Square complex matrix acting on `log2(dim)` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: DMatrix<Complex64>,
}

impl Operator {
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        let d = mat.nrows();
        if d != mat.ncols() || !d.is_power_of_two() {
            return Err(Error::BadShape(format!(
                "operator must be square with power-of-two dimension, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { mat })
    }

    /// Row-major real entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::BadShape(format!(
                "{} entries for a {dim}x{dim} operator",
                entries.len()
            )));
        }
        Self::new(DMatrix::from_fn(dim, dim, |r, c| {
            Complex64::new(entries[r * dim + c], 0.0)
        }))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    /// `|ψ><ψ|` for a normalized state.
    pub fn projector(psi: &StateVector) -> Self {
        Self::outer(psi.amps(), psi.amps())
    }

    /// `|u><v|` from raw amplitude slices of equal length.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let d = u.len();
        Self {
            mat: DMatrix::from_fn(d, d, |r, c| u[r] * v[c].conj()),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
        }
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Operator) -> Self {
        Self {
            mat: &self.mat * &rhs.mat,
        }
    }

    pub fn add(&self, rhs: &Operator) -> Self {
        Self {
            mat: &self.mat + &rhs.mat,
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            mat: &self.mat * Complex64::new(k, 0.0),
        }
    }

    pub fn kron(&self, rhs: &Operator) -> Self {
        Self {
            mat: self.mat.kronecker(&rhs.mat),
        }
    }

    /// `U† self U`.
    pub fn conjugate_by(&self, u: &Operator) -> Self {
        Self {
            mat: u.mat.adjoint() * &self.mat * &u.mat,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.mat - &other.mat)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `<ψ|self|ψ>` for a raw amplitude vector of matching length.
    pub fn expectation(&self, psi: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (r, x) in psi.iter().enumerate() {
            for (c, y) in psi.iter().enumerate() {
                acc += x.conj() * self.mat[(r, c)] * y;
            }
        }
        acc
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.mat - self.mat.adjoint())
            .iter()
            .all(|z| z.norm() <= tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.mat.adjoint() * &self.mat;
        Operator { mat: prod }.max_abs_diff(&Operator::identity(self.dim())) <= tol
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.mat + self.mat.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.is_hermitian(tol)
            && self
                .hermitian_eigenvalues()
                .first()
                .is_none_or(|&m| m >= -tol)
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.compose(self).max_abs_diff(self) <= tol
    }

    /// Numerical rank of a Hermitian operator.
    pub fn rank(&self, tol: f64) -> usize {
        self.hermitian_eigenvalues()
            .iter()
            .filter(|e| e.abs() > tol)
            .count()
    }

    /// Unique PSD square root via the Hermitian eigendecomposition.
    pub fn psd_sqrt(&self) -> Result<Operator> {
        if !self.is_hermitian(crate::CONSTRUCT_TOL) {
            return Err(Error::NotPsd(f64::NAN));
        }
        let herm = (&self.mat + self.mat.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = herm.symmetric_eigen();
        let min = eig.eigenvalues.min();
        if min < -crate::CONSTRUCT_TOL {
            return Err(Error::NotPsd(min));
        }
        let roots = eig
            .eigenvalues
            .map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
        let v = &eig.eigenvectors;
        let mat = v * DMatrix::from_diagonal(&roots) * v.adjoint();
        Ok(Operator { mat })
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|c| {
                    let z = self.mat[(r, c)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn sigma_x() -> Operator {
    Operator::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("static gate")
}

pub fn sigma_z() -> Operator {
    Operator::from_real(2, &[1.0, 0.0, 0.0, -1.0]).expect("static gate")
}

/// Controlled-NOT, first qubit control: `|10> -> |11>`, `|11> -> |10>`.
pub fn cnot() -> Operator {
    Operator::from_real(
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 0.0,
        ],
    )
    .expect("static gate")
}

/// Projectors onto `|x+>` and `|x->`.
pub fn x_basis() -> (Operator, Operator) {
    let h = 0.5;
    (
        Operator::from_real(2, &[h, h, h, h]).expect("static"),
        Operator::from_real(2, &[h, -h, -h, h]).expect("static"),
    )
}

/// Pauli correction `σz^phase · σx^flip` (σx acts first).
pub fn pauli_correction(flip: bool, phase: bool) -> Operator {
    let mut op = Operator::identity(2);
    if flip {
        op = sigma_x();
    }
    if phase {
        op = sigma_z().compose(&op);
    }
    op
}

/// Outcome of a Bell-basis measurement.
///
/// Encoded as two bits `[flip, sign]`: `Φ+ = 00`, `Φ- = 01`, `Ψ+ = 10`, `Ψ- = 11`,
/// so the receiver's correction is `σz^sign · σx^flip`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PhiPlus,
        BellOutcome::PhiMinus,
        BellOutcome::PsiPlus,
        BellOutcome::PsiMinus,
    ];

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn flip(self) -> bool {
        matches!(self, BellOutcome::PsiPlus | BellOutcome::PsiMinus)
    }

    pub fn sign(self) -> bool {
        matches!(self, BellOutcome::PhiMinus | BellOutcome::PsiMinus)
    }

    pub fn bits(self) -> [u8; 2] {
        [self.flip() as u8, self.sign() as u8]
    }

    pub fn from_bits(bits: [u8; 2]) -> Option<Self> {
        match bits {
            [0, 0] => Some(BellOutcome::PhiPlus),
            [0, 1] => Some(BellOutcome::PhiMinus),
            [1, 0] => Some(BellOutcome::PsiPlus),
            [1, 1] => Some(BellOutcome::PsiMinus),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BellOutcome::PhiPlus => "phi+",
            BellOutcome::PhiMinus => "phi-",
            BellOutcome::PsiPlus => "psi+",
            BellOutcome::PsiMinus => "psi-",
        }
    }

    /// Two-qubit amplitudes of the Bell state.
    pub fn amplitudes(self) -> [Complex64; 4] {
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        match self {
            BellOutcome::PhiPlus => [r, z, z, r],
            BellOutcome::PhiMinus => [r, z, z, -r],
            BellOutcome::PsiPlus => [z, r, r, z],
            BellOutcome::PsiMinus => [z, r, -r, z],
        }
    }

    pub fn correction(self) -> Operator {
        pauli_correction(self.flip(), self.sign())
    }
}
