//! Dense pure states over labelled qubits, plus reduced density matrices.
//!
//! Basis indices are most-significant-bit first: bit `k` of an index (counting
//! from the left) is the computational value of `labels[k]`, so `|01>` on
//! labels `["A", "B"]` is index 1.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gates::Operator;
use crate::{CONSTRUCT_TOL, TOL};

/// A single complex amplitude.
pub type ComplexAmp = Complex64;

/// Norm below which a vector is treated as the zero vector.
pub(crate) const ZERO_NORM: f64 = 1e-15;

/// Normalized pure state over an ordered list of named qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    labels: Vec<String>,
    amps: Vec<Complex64>,
}

fn check_labels(labels: &[String]) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

#[inline]
fn bit_of(index: usize, pos: usize, n: usize) -> usize {
    (index >> (n - 1 - pos)) & 1
}

impl StateVector {
    /// Builds a normalized state from raw amplitudes.
    pub fn new<S: AsRef<str>>(amps: Vec<Complex64>, labels: &[S]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        if labels.is_empty() {
            return Err(Error::BadShape("a state needs at least one qubit".into()));
        }
        if labels.len() >= usize::BITS as usize || amps.len() != 1usize << labels.len() {
            return Err(Error::BadShape(format!(
                "{} amplitudes for {} qubits",
                amps.len(),
                labels.len()
            )));
        }
        check_labels(&labels)?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < ZERO_NORM {
            return Err(Error::ZeroNorm);
        }
        let amps = amps.into_iter().map(|z| z / norm).collect();
        Ok(Self { labels, amps })
    }

    /// Real-amplitude convenience constructor.
    pub fn from_real<S: AsRef<str>>(amps: &[f64], labels: &[S]) -> Result<Self> {
        Self::new(
            amps.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            labels,
        )
    }

    /// Computational basis state `|index>`.
    pub fn basis<S: AsRef<str>>(labels: &[S], index: usize) -> Result<Self> {
        let dim = 1usize
            .checked_shl(labels.len() as u32)
            .ok_or_else(|| Error::BadShape("too many qubits".into()))?;
        if index >= dim {
            return Err(Error::BadShape(format!("basis index {index} >= {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(amps, labels)
    }

    /// Single qubit `a|0> + b|1>`.
    pub fn qubit(label: &str, a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(vec![a, b], &[label])
    }

    /// Wraps amplitudes that are already normalized. Internal use only.
    pub(crate) fn from_normalized(amps: Vec<Complex64>, labels: Vec<String>) -> Self {
        debug_assert_eq!(amps.len(), 1 << labels.len());
        Self { labels, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Position of a label in the qubit order.
    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let p = self.position(l.as_ref())?;
            if out.contains(&p) {
                return Err(Error::DuplicateLabel(l.as_ref().to_string()));
            }
            out.push(p);
        }
        Ok(out)
    }

    /// `self ⊗ other`, labels concatenated.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        check_labels(&labels)?;
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for x in &self.amps {
            for y in &other.amps {
                amps.push(x * y);
            }
        }
        Ok(Self { labels, amps })
    }

    /// Applies `op` to the `targets` subsystem without renormalizing.
    ///
    /// The first target is the most significant qubit of `op`'s index.
    pub(crate) fn apply_raw<S: AsRef<str>>(
        &self,
        op: &Operator,
        targets: &[S],
    ) -> Result<Vec<Complex64>> {
        let pos = self.positions(targets)?;
        let k = pos.len();
        let sub = 1usize << k;
        if op.dim() != sub {
            return Err(Error::DimensionMismatch {
                expected: sub,
                got: op.dim(),
            });
        }
        let n = self.n_qubits();
        let masks: Vec<usize> = pos.iter().map(|&p| 1usize << (n - 1 - p)).collect();
        let target_mask: usize = masks.iter().sum();
        // full index offsets for each sub-index, MSB-first over the targets
        let offsets: Vec<usize> = (0..sub)
            .map(|j| {
                (0..k)
                    .filter(|&t| (j >> (k - 1 - t)) & 1 == 1)
                    .map(|t| masks[t])
                    .sum()
            })
            .collect();
        let mat = op.matrix();
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        let mut gathered = vec![Complex64::new(0.0, 0.0); sub];
        for base in (0..self.dim()).filter(|i| i & target_mask == 0) {
            for (g, off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amps[base | off];
            }
            for (r, off) in offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, g) in gathered.iter().enumerate() {
                    acc += mat[(r, c)] * g;
                }
                out[base | off] = acc;
            }
        }
        Ok(out)
    }

    /// Applies `op` on `targets` (identity elsewhere) and renormalizes.
    ///
    /// Unitaries leave the norm untouched; a non-unitary that annihilates the
    /// state yields `ZeroNorm`.
    pub fn apply_operator<S: AsRef<str>>(&self, op: &Operator, targets: &[S]) -> Result<Self> {
        let amps = self.apply_raw(op, targets)?;
        Self::new(amps, &self.labels)
    }

    /// `<self|other>`; both states must carry the same labels in the same order.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch(
                self.labels.clone(),
                other.labels.clone(),
            ));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| x.conj() * y)
            .sum())
    }

    /// `|<self|other>|^2`, clamped to `[0, 1]`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().clamp(0.0, 1.0))
    }

    /// Same state with qubits permuted into `order`.
    pub fn reorder<S: AsRef<str>>(&self, order: &[S]) -> Result<StateVector> {
        if order.len() != self.n_qubits() {
            return Err(Error::LabelMismatch(
                self.labels.clone(),
                order.iter().map(|s| s.as_ref().to_string()).collect(),
            ));
        }
        let pos = self.positions(order)?;
        let n = self.n_qubits();
        let mut amps = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (i, z) in self.amps.iter().enumerate() {
            let j = pos
                .iter()
                .fold(0usize, |acc, &p| (acc << 1) | bit_of(i, p, n));
            amps[j] = *z;
        }
        Ok(Self {
            labels: order.iter().map(|s| s.as_ref().to_string()).collect(),
            amps,
        })
    }

    /// Partial trace onto `keep` (in the given order).
    pub fn reduced_density<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument(
                "reduced_density needs at least one qubit".into(),
            ));
        }
        let keep_pos = self.positions(keep)?;
        let n = self.n_qubits();
        let rest_pos: Vec<usize> = (0..n).filter(|p| !keep_pos.contains(p)).collect();
        let dk = 1usize << keep_pos.len();
        let dr = 1usize << rest_pos.len();
        let mut m = DMatrix::<Complex64>::zeros(dk, dr);
        for (i, z) in self.amps.iter().enumerate() {
            let ki = keep_pos
                .iter()
                .fold(0usize, |acc, &p| (acc << 1) | bit_of(i, p, n));
            let ri = rest_pos
                .iter()
                .fold(0usize, |acc, &p| (acc << 1) | bit_of(i, p, n));
            m[(ki, ri)] = *z;
        }
        let rho = &m * m.adjoint();
        Ok(DensityMatrix {
            labels: keep.iter().map(|s| s.as_ref().to_string()).collect(),
            mat: rho,
        })
    }

    /// Projector `|self><self|` as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let v = nalgebra::DVector::from_column_slice(&self.amps);
        DensityMatrix {
            labels: self.labels.clone(),
            mat: &v * v.adjoint(),
        }
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n_qubits();
        let mut first = true;
        for (i, z) in self.amps.iter().enumerate() {
            if z.norm_sqr() < 1e-24 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)|{:0width$b}>", z.re, z.im, i, width = n)?;
        }
        write!(f, " [{}]", self.labels.join(","))
    }
}

/// Serialized as `{"labels": [...], "amps": [[re, im], ...]}`.
impl Serialize for StateVector {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeStruct;
        let amps: Vec<[f64; 2]> = self.amps.iter().map(|z| [z.re, z.im]).collect();
        let mut st = s.serialize_struct("StateVector", 2)?;
        st.serialize_field("labels", &self.labels)?;
        st.serialize_field("amps", &amps)?;
        st.end()
    }
}

/// Reduced (possibly mixed) state of a subset of qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    labels: Vec<String>,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity at the construction
    /// tolerance.
    pub fn new<S: AsRef<str>>(mat: DMatrix<Complex64>, labels: &[S]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        check_labels(&labels)?;
        let dim = 1usize << labels.len();
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: mat.nrows(),
            });
        }
        let rho = Self { labels, mat };
        if !rho.is_hermitian(CONSTRUCT_TOL) {
            return Err(Error::BadShape("density matrix is not Hermitian".into()));
        }
        if (rho.trace() - 1.0).abs() > CONSTRUCT_TOL {
            return Err(Error::BadShape(format!("trace {} != 1", rho.trace())));
        }
        let min = rho.min_eigenvalue();
        if min < -CONSTRUCT_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(rho)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.mat[(r, c)]
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.mat - self.mat.adjoint())
            .iter()
            .all(|z| z.norm() <= tol)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.mat + self.mat.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().min()
    }

    /// Checks the density-matrix invariants at the strict tolerance.
    pub fn is_valid(&self) -> bool {
        self.is_hermitian(TOL) && (self.trace() - 1.0).abs() <= TOL && self.min_eigenvalue() >= -TOL
    }

    /// Largest absolute off-diagonal entry.
    pub fn max_off_diagonal(&self) -> f64 {
        let d = self.mat.nrows();
        let mut m = 0.0f64;
        for r in 0..d {
            for c in 0..d {
                if r != c {
                    m = m.max(self.mat[(r, c)].norm());
                }
            }
        }
        m
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch(
                self.labels.clone(),
                other.labels.clone(),
            ));
        }
        Ok((&self.mat - &other.mat)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    /// `<psi|rho|psi>`.
    pub fn fidelity_with(&self, psi: &StateVector) -> Result<f64> {
        if self.labels != psi.labels {
            return Err(Error::LabelMismatch(
                self.labels.clone(),
                psi.labels.clone(),
            ));
        }
        let v = nalgebra::DVector::from_column_slice(&psi.amps);
        let f = (v.adjoint() * &self.mat * &v)[(0, 0)].re;
        Ok(f.clamp(0.0, 1.0))
    }

    /// Eigenvector of the largest eigenvalue, i.e. the state itself when the
    /// matrix is a pure-state projector.
    pub fn principal_state(&self) -> StateVector {
        let herm = (&self.mat + self.mat.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = herm.symmetric_eigen();
        let idx = eig.eigenvalues.imax();
        let col = eig.eigenvectors.column(idx);
        let mut amps: Vec<Complex64> = col.iter().copied().collect();
        // fix the global phase so the first sizeable amplitude is real and positive
        if let Some(lead) = amps.iter().copied().find(|z| z.norm() > 1e-8) {
            let phase = lead.conj() / lead.norm();
            for z in &mut amps {
                *z *= phase;
            }
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let amps = amps.into_iter().map(|z| z / norm).collect();
        StateVector::from_normalized(amps, self.labels.clone())
    }

    /// Probability-weighted sum `Σ p_i ρ_i`. All terms must share labels.
    pub fn mixture<'a, I>(terms: I) -> Result<DensityMatrix>
    where
        I: IntoIterator<Item = (f64, &'a DensityMatrix)>,
    {
        let mut iter = terms.into_iter();
        let (p0, first) = iter
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let mut acc = &first.mat * Complex64::new(p0, 0.0);
        for (p, rho) in iter {
            if rho.labels != first.labels {
                return Err(Error::LabelMismatch(
                    first.labels.clone(),
                    rho.labels.clone(),
                ));
            }
            acc += &rho.mat * Complex64::new(p, 0.0);
        }
        Ok(DensityMatrix {
            labels: first.labels.clone(),
            mat: acc,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn make_state_examples() {
        let s = StateVector::from_real(&[1.0, 0.0], &["B"]).unwrap();
        assert_eq!(s.amps(), &[c(1.0), c(0.0)]);

        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::from_real(&[r, 0.0, 0.0, r], &["A", "B"]).unwrap();
        assert!((bell.amp(0).re - r).abs() < 1e-15 && (bell.amp(3).re - r).abs() < 1e-15);

        let s = StateVector::from_real(&[2.0, 0.0], &["B"]).unwrap();
        assert!((s.amp(0).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn make_state_errors() {
        assert_eq!(
            StateVector::from_real(&[0.0, 0.0], &["B"]),
            Err(Error::ZeroNorm)
        );
        assert!(matches!(
            StateVector::from_real(&[1.0, 0.0, 0.0], &["A", "B"]),
            Err(Error::BadShape(_))
        ));
        assert!(matches!(
            StateVector::from_real(&[1.0, 0.0], &["A", "B"]),
            Err(Error::BadShape(_))
        ));
        assert!(matches!(
            StateVector::from_real(&[1.0, 0.0, 0.0, 0.0], &["A", "A"]),
            Err(Error::DuplicateLabel(_))
        ));
        assert_eq!(
            StateVector::from_real(&[f64::NAN, 1.0], &["A"]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn tensor_examples() {
        let z = StateVector::basis(&["1"], 0).unwrap();
        let o = StateVector::basis(&["2"], 1).unwrap();
        let t = z.tensor(&o).unwrap();
        assert_eq!(t.amps(), &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        assert_eq!(t.labels(), &["1", "2"]);
        assert!(matches!(z.tensor(&z), Err(Error::DuplicateLabel(_))));
    }

    #[test]
    fn tensor_with_channel_matches_three_qubit_expansion() {
        let (a, b) = (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        let (al, be) = (0.8, 0.6);
        let q = StateVector::qubit("1", a, b).unwrap();
        let ch = StateVector::from_real(&[al, 0.0, 0.0, be], &["A", "B"]).unwrap();
        let s = q.tensor(&ch).unwrap();
        // |1AB>: a α|000> + a β|011> + b α|100> + b β|111>
        let expect = [
            a * al,
            c(0.0),
            c(0.0),
            a * be,
            b * al,
            c(0.0),
            c(0.0),
            b * be,
        ];
        for (x, y) in s.amps().iter().zip(expect) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn apply_examples() {
        let z = StateVector::basis(&["B"], 0).unwrap();
        let x = z.apply_operator(&gates::sigma_x(), &["B"]).unwrap();
        assert_eq!(x.amps(), &[c(0.0), c(1.0)]);
        let same = z.apply_operator(&Operator::identity(2), &["B"]).unwrap();
        assert_eq!(same, z);
        assert!(matches!(
            z.apply_operator(&gates::cnot(), &["B"]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            z.apply_operator(&gates::sigma_x(), &["Q"]),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn cnot_creates_correlated_pair() {
        // a α|00> + b β|10> -> a α|00> + b β|11>
        let (a, b, al, be) = (0.6, 0.8, 0.8, 0.6);
        let s = StateVector::from_real(&[a * al, 0.0, b * be, 0.0], &["1", "2"]).unwrap();
        let t = s.apply_operator(&gates::cnot(), &["1", "2"]).unwrap();
        let n = ((a * al).powi(2) + (b * be).powi(2)).sqrt();
        assert!((t.amp(0).re - a * al / n).abs() < 1e-15);
        assert!((t.amp(3).re - b * be / n).abs() < 1e-15);
        assert!(t.amp(1).norm() < 1e-15 && t.amp(2).norm() < 1e-15);
    }

    #[test]
    fn target_order_is_respected() {
        // control on the second listed label
        let s = StateVector::basis(&["x", "y"], 0b01).unwrap();
        let t = s.apply_operator(&gates::cnot(), &["y", "x"]).unwrap();
        assert_eq!(t.amp(0b11), c(1.0));
    }

    #[test]
    fn fidelity_examples() {
        let z = StateVector::basis(&["q"], 0).unwrap();
        let o = StateVector::basis(&["q"], 1).unwrap();
        assert_eq!(z.fidelity(&z).unwrap(), 1.0);
        assert_eq!(z.fidelity(&o).unwrap(), 0.0);

        // frozen oracle: (0.8*0.5 + 0.6*0.5)^2 / (0.5*0.64 + 0.5*0.36) = 0.98
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let phi = StateVector::from_real(&[r, r], &["q"]).unwrap();
        let distorted = StateVector::from_real(&[r * 0.8, r * 0.6], &["q"]).unwrap();
        assert!((phi.fidelity(&distorted).unwrap() - 0.98).abs() < 1e-12);

        let other = StateVector::basis(&["p"], 0).unwrap();
        assert!(matches!(z.fidelity(&other), Err(Error::LabelMismatch(..))));
    }

    #[test]
    fn reduced_density_examples() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::from_real(&[r, 0.0, 0.0, r], &["A", "B"]).unwrap();
        let rho = bell.reduced_density(&["B"]).unwrap();
        assert!((rho.get(0, 0).re - 0.5).abs() < 1e-15);
        assert!((rho.get(1, 1).re - 0.5).abs() < 1e-15);
        assert!(rho.max_off_diagonal() < 1e-15);

        let ch = StateVector::from_real(&[0.8, 0.0, 0.0, 0.6], &["A", "B"]).unwrap();
        let rho = ch.reduced_density(&["B"]).unwrap();
        assert!((rho.get(0, 0).re - 0.64).abs() < 1e-15);
        assert!((rho.get(1, 1).re - 0.36).abs() < 1e-15);
        assert!(rho.max_off_diagonal() < 1e-15);
        assert!(rho.is_valid());

        let psi = StateVector::new(
            vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)],
            &["B"],
        )
        .unwrap();
        let prod = StateVector::basis(&["A"], 0).unwrap().tensor(&psi).unwrap();
        let rho = prod.reduced_density(&["B"]).unwrap();
        assert!(rho.max_abs_diff(&psi.density()).unwrap() < 1e-15);

        assert!(matches!(
            prod.reduced_density(&["Z"]),
            Err(Error::UnknownLabel(_))
        ));
        assert!(prod.reduced_density::<&str>(&[]).is_err());
    }

    #[test]
    fn reorder_round_trip() {
        let s = StateVector::from_real(&[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8], &["a", "b", "c"])
            .unwrap();
        let t = s.reorder(&["c", "a", "b"]).unwrap();
        // |a b c> = |1 0 0> (index 4) lands at |c a b> = |0 1 0> (index 2)
        assert_eq!(t.amp(2), s.amp(4));
        assert_eq!(t.reorder(&["a", "b", "c"]).unwrap(), s);
    }

    #[test]
    fn principal_state_recovers_pure_state() {
        let psi = StateVector::new(
            vec![Complex64::new(0.0, 0.6), Complex64::new(-0.8, 0.0)],
            &["B"],
        )
        .unwrap();
        let back = psi.density().principal_state();
        assert!((back.fidelity(&psi).unwrap() - 1.0).abs() < 1e-12);
    }
}
