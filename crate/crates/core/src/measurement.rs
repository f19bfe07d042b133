//! Projective and generalized measurements, sampled or fully enumerated.

use std::sync::LazyLock;

use num_complex::Complex64;
use rand::Rng;

use crate::channel::ChannelSpec;
use crate::error::{Error, Result};
use crate::gates::{BellOutcome, Operator};
use crate::statevec::StateVector;
use crate::CONSTRUCT_TOL;

/// Branch probabilities at or below this are treated as impossible.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// Complete set of mutually orthogonal projectors (ranks may differ).
#[derive(Clone, Debug)]
pub struct ProjectiveMeasurement {
    projectors: Vec<Operator>,
    labels: Vec<String>,
}

fn check_complete(ops: &[Operator], dim: usize, what: &str) -> std::result::Result<(), String> {
    let sum = ops.iter().fold(Operator::zeros(dim), |acc, p| acc.add(p));
    let err = sum.max_abs_diff(&Operator::identity(dim));
    if err > CONSTRUCT_TOL {
        return Err(format!("{what} sum deviates from identity by {err:e}"));
    }
    Ok(())
}

fn check_dims(ops: &[Operator], n_labels: usize) -> std::result::Result<usize, String> {
    let first = ops.first().ok_or("no outcomes")?;
    let dim = first.dim();
    if ops.iter().any(|p| p.dim() != dim) {
        return Err("outcome operators differ in dimension".into());
    }
    if n_labels != ops.len() {
        return Err(format!("{} labels for {} outcomes", n_labels, ops.len()));
    }
    Ok(dim)
}

impl ProjectiveMeasurement {
    pub fn new<S: AsRef<str>>(projectors: Vec<Operator>, labels: &[S]) -> Result<Self> {
        let dim = check_dims(&projectors, labels.len()).map_err(Error::InvalidMeasurement)?;
        for (i, p) in projectors.iter().enumerate() {
            if !p.is_projector(CONSTRUCT_TOL) {
                return Err(Error::InvalidMeasurement(format!(
                    "outcome {i} is not a projector"
                )));
            }
        }
        for i in 0..projectors.len() {
            for j in (i + 1)..projectors.len() {
                let overlap = projectors[i]
                    .compose(&projectors[j])
                    .max_abs_diff(&Operator::zeros(dim));
                if overlap > CONSTRUCT_TOL {
                    return Err(Error::InvalidMeasurement(format!(
                        "outcomes {i} and {j} are not orthogonal ({overlap:e})"
                    )));
                }
            }
        }
        check_complete(&projectors, dim, "projector").map_err(Error::InvalidMeasurement)?;
        Ok(Self {
            projectors,
            labels: labels.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    /// Bell basis measurement, outcomes in `BellOutcome::ALL` order.
    pub fn bell() -> Self {
        static BELL: LazyLock<ProjectiveMeasurement> = LazyLock::new(|| {
            let projectors = BellOutcome::ALL
                .iter()
                .map(|o| {
                    let v = o.amplitudes();
                    Operator::outer(&v, &v)
                })
                .collect();
            let labels: Vec<&str> = BellOutcome::ALL.iter().map(|o| o.label()).collect();
            ProjectiveMeasurement::new(projectors, &labels).expect("Bell basis is complete")
        });
        BELL.clone()
    }

    /// Single-qubit computational basis.
    pub fn computational() -> Self {
        static Z: LazyLock<ProjectiveMeasurement> = LazyLock::new(|| {
            let p0 = Operator::from_real(2, &[1.0, 0.0, 0.0, 0.0]).expect("static");
            let p1 = Operator::from_real(2, &[0.0, 0.0, 0.0, 1.0]).expect("static");
            ProjectiveMeasurement::new(vec![p0, p1], &["0", "1"]).expect("static")
        });
        Z.clone()
    }

    /// Single-qubit `x` basis, outcomes `x+`, `x-`.
    pub fn x_basis() -> Self {
        static X: LazyLock<ProjectiveMeasurement> = LazyLock::new(|| {
            let (p, m) = crate::gates::x_basis();
            ProjectiveMeasurement::new(vec![p, m], &["x+", "x-"]).expect("static")
        });
        X.clone()
    }

    pub fn projectors(&self) -> &[Operator] {
        &self.projectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }
}

/// Generalized measurement with explicit Kraus operators `K_i† K_i = A_i`.
#[derive(Clone, Debug)]
pub struct PovmSet {
    elements: Vec<Operator>,
    kraus: Vec<Operator>,
    labels: Vec<String>,
    conclusive: Vec<bool>,
}

impl PovmSet {
    /// Builds the set with PSD square-root Kraus operators.
    pub fn new<S: AsRef<str>>(
        elements: Vec<Operator>,
        labels: &[S],
        conclusive: Vec<bool>,
    ) -> Result<Self> {
        let kraus = elements
            .iter()
            .map(kraus_from_element)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::InvalidPovm(e.to_string()))?;
        Self::with_kraus(elements, kraus, labels, conclusive)
    }

    pub fn with_kraus<S: AsRef<str>>(
        elements: Vec<Operator>,
        kraus: Vec<Operator>,
        labels: &[S],
        conclusive: Vec<bool>,
    ) -> Result<Self> {
        let dim = check_dims(&elements, labels.len()).map_err(Error::InvalidPovm)?;
        if kraus.len() != elements.len() || conclusive.len() != elements.len() {
            return Err(Error::InvalidPovm(
                "kraus / conclusive mask length differs from element count".into(),
            ));
        }
        for (i, (a, k)) in elements.iter().zip(&kraus).enumerate() {
            if !a.is_psd(CONSTRUCT_TOL) {
                return Err(Error::InvalidPovm(format!("element {i} is not PSD")));
            }
            if k.dim() != dim || k.adjoint().compose(k).max_abs_diff(a) > CONSTRUCT_TOL {
                return Err(Error::InvalidPovm(format!(
                    "Kraus operator {i} does not reproduce its element"
                )));
            }
        }
        check_complete(&elements, dim, "POVM").map_err(Error::InvalidPovm)?;
        Ok(Self {
            elements,
            kraus,
            labels: labels.iter().map(|s| s.as_ref().to_string()).collect(),
            conclusive,
        })
    }

    /// Assembles a set whose validity follows from how it was derived.
    fn from_parts(
        elements: Vec<Operator>,
        kraus: Vec<Operator>,
        labels: Vec<String>,
        conclusive: Vec<bool>,
    ) -> Self {
        Self {
            elements,
            kraus,
            labels,
            conclusive,
        }
    }

    pub fn elements(&self) -> &[Operator] {
        &self.elements
    }

    pub fn kraus(&self) -> &[Operator] {
        &self.kraus
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn conclusive_mask(&self) -> &[bool] {
        &self.conclusive
    }

    pub fn is_conclusive(&self, outcome: usize) -> bool {
        self.conclusive[outcome]
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Largest deviation of `Σ A_i` from the identity.
    pub fn completeness_error(&self) -> f64 {
        self.elements
            .iter()
            .fold(Operator::zeros(self.dim()), |acc, a| acc.add(a))
            .max_abs_diff(&Operator::identity(self.dim()))
    }

    /// Largest deviation of `K_i† K_i` from `A_i` over all outcomes.
    pub fn kraus_error(&self) -> f64 {
        self.elements
            .iter()
            .zip(&self.kraus)
            .map(|(a, k)| k.adjoint().compose(k).max_abs_diff(a))
            .fold(0.0, f64::max)
    }

    /// Same measurement performed after the unitary `u`: elements become
    /// `u† A u`, Kraus operators `u† K u`.
    pub fn conjugate_by(&self, u: &Operator) -> Result<Self> {
        if u.dim() != self.dim() || !u.is_unitary(CONSTRUCT_TOL) {
            return Err(Error::InvalidArgument(
                "conjugating operator must be unitary".into(),
            ));
        }
        Ok(Self::from_parts(
            self.elements.iter().map(|a| a.conjugate_by(u)).collect(),
            self.kraus.iter().map(|k| k.conjugate_by(u)).collect(),
            self.labels.clone(),
            self.conclusive.clone(),
        ))
    }

    /// Lifts the measurement into a larger space through an isometry whose
    /// columns are `basis`. The orthogonal complement of the span is added to
    /// outcome `complement_to`, so states inside the span see the original
    /// statistics.
    pub fn embed(&self, basis: &[Vec<Complex64>], complement_to: usize) -> Result<Self> {
        if basis.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: basis.len(),
            });
        }
        if complement_to >= self.len() {
            return Err(Error::InvalidArgument(format!(
                "complement outcome {complement_to} out of range"
            )));
        }
        let big = basis[0].len();
        if !big.is_power_of_two() || basis.iter().any(|v| v.len() != big) {
            return Err(Error::BadShape(
                "embedding basis vectors differ in length".into(),
            ));
        }
        let lift = |op: &Operator| {
            let mut acc = Operator::zeros(big);
            for (r, u) in basis.iter().enumerate() {
                for (c, v) in basis.iter().enumerate() {
                    let w = op.matrix()[(r, c)];
                    if w != Complex64::new(0.0, 0.0) {
                        let mut term = Operator::outer(u, v);
                        term = Operator::new(term.matrix() * w).expect("finite");
                        acc = acc.add(&term);
                    }
                }
            }
            acc
        };
        let span = basis.iter().fold(Operator::zeros(big), |acc, v| {
            acc.add(&Operator::outer(v, v))
        });
        let complement = Operator::identity(big).add(&span.scale(-1.0));
        let mut elements: Vec<Operator> = self.elements.iter().map(lift).collect();
        let mut kraus: Vec<Operator> = self.kraus.iter().map(lift).collect();
        elements[complement_to] = elements[complement_to].add(&complement);
        kraus[complement_to] = kraus[complement_to].add(&complement);
        let projector_err = span.compose(&span).max_abs_diff(&span);
        if projector_err > CONSTRUCT_TOL {
            return Err(Error::InvalidArgument(
                "embedding basis is not orthonormal".into(),
            ));
        }
        Ok(Self::from_parts(
            elements,
            kraus,
            self.labels.clone(),
            self.conclusive.clone(),
        ))
    }
}

/// Optimal unambiguous discrimination of `(α, β)` from `(α, -β)` for equal
/// priors.
///
/// Outcome 0 (`plus`) never fires on `(α, -β)`, outcome 1 (`minus`) never
/// fires on `(α, β)`, outcome 2 is inconclusive. Each input is identified with
/// probability `2β²`:
///
/// ```text
/// A_plus  = 1/(2α²) [[β²,  αβ], [ αβ, α²]]
/// A_minus = 1/(2α²) [[β², -αβ], [-αβ, α²]]
/// A_inc   = [[1 - β²/α², 0], [0, 0]]
/// ```
pub fn discrimination_povm(c: &ChannelSpec) -> Result<PovmSet> {
    let (a, b) = (c.alpha(), c.beta());
    if a <= 0.0 {
        return Err(Error::BadSpec("alpha must be positive".into()));
    }
    let k = 1.0 / (2.0 * a * a);
    let plus = Operator::from_real(2, &[k * b * b, k * a * b, k * a * b, k * a * a])?;
    let minus = Operator::from_real(2, &[k * b * b, -k * a * b, -k * a * b, k * a * a])?;
    let r = 1.0 - b * b / (a * a);
    let inc = Operator::from_real(2, &[r, 0.0, 0.0, 0.0])?;
    // A_plus and A_minus are rank one with trace 1/(2α²), so their square
    // roots are A·√2α; A_inc is diagonal.
    let s = std::f64::consts::SQRT_2 * a;
    let kraus = vec![
        plus.scale(s),
        minus.scale(s),
        Operator::from_real(2, &[r.max(0.0).sqrt(), 0.0, 0.0, 0.0])?,
    ];
    Ok(PovmSet::from_parts(
        vec![plus, minus, inc],
        kraus,
        ["plus", "minus", "inconclusive"].map(String::from).to_vec(),
        vec![true, true, false],
    ))
}

/// PSD square root `K` with `K² = K†K = a`.
pub fn kraus_from_element(a: &Operator) -> Result<Operator> {
    a.psd_sqrt()
}

/// One measurement branch.
///
/// `post_state` is `None` when the branch has (numerically) zero probability.
#[derive(Clone, Debug)]
pub struct BranchResult {
    pub outcome: usize,
    pub label: String,
    pub probability: f64,
    pub post_state: Option<StateVector>,
}

impl BranchResult {
    pub fn is_null(&self) -> bool {
        self.post_state.is_none()
    }
}

fn branch_from_raw(
    s: &StateVector,
    outcome: usize,
    label: &str,
    raw: Vec<Complex64>,
) -> BranchResult {
    let p: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
    let post_state = (p > ZERO_PROBABILITY).then(|| {
        let n = p.sqrt();
        StateVector::from_normalized(
            raw.into_iter().map(|z| z / n).collect(),
            s.labels().to_vec(),
        )
    });
    BranchResult {
        outcome,
        label: label.to_string(),
        probability: p,
        post_state,
    }
}

/// Every outcome of `m` on `targets`, with exact probabilities.
pub fn enumerate_projective<S: AsRef<str>>(
    s: &StateVector,
    m: &ProjectiveMeasurement,
    targets: &[S],
) -> Result<Vec<BranchResult>> {
    m.projectors
        .iter()
        .zip(&m.labels)
        .enumerate()
        .map(|(i, (p, label))| Ok(branch_from_raw(s, i, label, s.apply_raw(p, targets)?)))
        .collect()
}

/// Every outcome of `p` on `targets`; post-states use the Kraus operators.
pub fn enumerate_povm<S: AsRef<str>>(
    s: &StateVector,
    p: &PovmSet,
    targets: &[S],
) -> Result<Vec<BranchResult>> {
    p.kraus
        .iter()
        .zip(&p.labels)
        .enumerate()
        .map(|(i, (k, label))| Ok(branch_from_raw(s, i, label, s.apply_raw(k, targets)?)))
        .collect()
}

/// Draws a branch index with probability proportional to its weight.
pub fn sample_branch<R: Rng + ?Sized>(branches: &[BranchResult], rng: &mut R) -> usize {
    let total: f64 = branches.iter().map(|b| b.probability.max(0.0)).sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, b) in branches.iter().enumerate() {
        if b.is_null() {
            continue;
        }
        acc += b.probability;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

pub fn projective_measure<S: AsRef<str>, R: Rng + ?Sized>(
    s: &StateVector,
    m: &ProjectiveMeasurement,
    targets: &[S],
    rng: &mut R,
) -> Result<BranchResult> {
    let mut branches = enumerate_projective(s, m, targets)?;
    let i = sample_branch(&branches, rng);
    Ok(branches.swap_remove(i))
}

pub fn povm_measure<S: AsRef<str>, R: Rng + ?Sized>(
    s: &StateVector,
    p: &PovmSet,
    targets: &[S],
    rng: &mut R,
) -> Result<BranchResult> {
    let mut branches = enumerate_povm(s, p, targets)?;
    let i = sample_branch(&branches, rng);
    Ok(branches.swap_remove(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn amps(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn basis_measurement_of_basis_state() {
        let s = StateVector::basis(&["q"], 0).unwrap();
        let b = enumerate_projective(&s, &ProjectiveMeasurement::computational(), &["q"]).unwrap();
        assert_eq!(b[0].probability, 1.0);
        assert!(b[1].is_null() && b[1].probability == 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            let r = projective_measure(
                &s,
                &ProjectiveMeasurement::computational(),
                &["q"],
                &mut rng,
            )
            .unwrap();
            assert_eq!(r.outcome, 0);
        }
    }

    #[test]
    fn bell_measurement_on_maximal_channel_is_uniform() {
        let q = StateVector::new(
            vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)],
            &["1"],
        )
        .unwrap();
        let ch = ChannelSpec::maximal().state(&["A", "B"]).unwrap();
        let s = q.tensor(&ch).unwrap();
        let b = enumerate_projective(&s, &ProjectiveMeasurement::bell(), &["1", "A"]).unwrap();
        assert_eq!(b.len(), 4);
        for br in &b {
            assert!((br.probability - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn perturbed_projectors_rejected() {
        let mut p = ProjectiveMeasurement::computational().projectors().to_vec();
        p[0] = p[0].add(&Operator::from_real(2, &[1e-3, 0.0, 0.0, 0.0]).unwrap());
        assert!(matches!(
            ProjectiveMeasurement::new(p, &["0", "1"]),
            Err(Error::InvalidMeasurement(_))
        ));
        let p0 = Operator::from_real(2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            ProjectiveMeasurement::new(vec![p0.clone(), p0], &["a", "b"]),
            Err(Error::InvalidMeasurement(_))
        ));
    }

    #[test]
    fn povm_maximal_is_orthogonal_basis() {
        let p = discrimination_povm(&ChannelSpec::maximal()).unwrap();
        assert!(p.elements()[2].max_abs_diff(&Operator::zeros(2)) < 1e-15);
        assert!(p.elements()[0].is_projector(TOL) && p.elements()[1].is_projector(TOL));
    }

    #[test]
    fn povm_quadratic_forms_at_beta_0_6() {
        // oracle: with α=0.8, β=0.6, A_plus = 1/1.28 [[0.36,0.48],[0.48,0.64]]
        // <u+|A_plus|u+> = (0.36·0.64 + 2·0.48·0.48 + 0.64·0.36)/1.28 = 0.72
        // <u-|A_plus|u-> = (0.2304 - 0.4608 + 0.2304)/1.28 = 0
        let p = discrimination_povm(&ChannelSpec::new(0.8, 0.6).unwrap()).unwrap();
        let up = amps(&[0.8, 0.6]);
        let um = amps(&[0.8, -0.6]);
        assert!((p.elements()[0].expectation(&up).re - 0.72).abs() < 1e-12);
        assert!(p.elements()[0].expectation(&um).re.abs() < 1e-12);
        assert!((p.elements()[1].expectation(&um).re - 0.72).abs() < 1e-12);
        assert!(p.elements()[1].expectation(&up).re.abs() < 1e-12);
    }

    #[test]
    fn povm_degenerate_channel() {
        let p = discrimination_povm(&ChannelSpec::new(1.0, 0.0).unwrap()).unwrap();
        let zero_proj = Operator::from_real(2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(p.elements()[2].max_abs_diff(&zero_proj) < 1e-15);
        let u = amps(&[1.0, 0.0]);
        assert!(p.elements()[0].expectation(&u).re.abs() < 1e-15);
        assert!(p.elements()[1].expectation(&u).re.abs() < 1e-15);
    }

    #[test]
    fn povm_grid_invariants() {
        for i in 0..=40 {
            let beta = FRAC_1_SQRT_2 * i as f64 / 40.0;
            let c = ChannelSpec::from_beta(beta).unwrap();
            let p = discrimination_povm(&c).unwrap();
            let up = amps(&[c.alpha(), c.beta()]);
            let um = amps(&[c.alpha(), -c.beta()]);
            let [a1, a2, _] = [&p.elements()[0], &p.elements()[1], &p.elements()[2]];
            assert!(a2.expectation(&up).norm() < TOL);
            assert!(a1.expectation(&um).norm() < TOL);
            let both = a1.add(a2);
            assert!((both.expectation(&up).re - 2.0 * beta * beta).abs() < TOL);
            assert!((both.expectation(&um).re - 2.0 * beta * beta).abs() < TOL);
            assert!(p.completeness_error() < TOL);
            assert!(p.kraus_error() < TOL);
        }
    }

    #[test]
    fn kraus_examples() {
        let id = Operator::identity(2);
        assert!(kraus_from_element(&id).unwrap().max_abs_diff(&id) < 1e-14);
        let p = discrimination_povm(&ChannelSpec::new(0.8, 0.6).unwrap()).unwrap();
        let a1 = &p.elements()[0];
        let k = kraus_from_element(a1).unwrap();
        assert!(k.adjoint().compose(&k).max_abs_diff(a1) < 1e-12);
        let bad = Operator::from_real(2, &[0.0, 0.0, 0.0, -0.5]).unwrap();
        assert!(matches!(kraus_from_element(&bad), Err(Error::NotPsd(_))));
    }

    #[test]
    fn povm_mixture_conclusive_probability() {
        // equal mixture of u+ and u-, via a purification on a second qubit
        let c = ChannelSpec::new(0.8, 0.6).unwrap();
        let p = discrimination_povm(&c).unwrap();
        let r = FRAC_1_SQRT_2;
        // (u+ |0> + u- |1>)/√2 over labels (m, tag)
        let s =
            StateVector::from_real(&[0.8 * r, 0.8 * r, 0.6 * r, -0.6 * r], &["m", "tag"]).unwrap();
        let b = enumerate_povm(&s, &p, &["m"]).unwrap();
        let conclusive: f64 = b
            .iter()
            .filter(|x| p.is_conclusive(x.outcome))
            .map(|x| x.probability)
            .sum();
        assert!((conclusive - 0.72).abs() < 1e-12);
        let total: f64 = b.iter().map(|x| x.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn embedded_povm_keeps_statistics() {
        let c = ChannelSpec::new(0.8, 0.6).unwrap();
        let p = discrimination_povm(&c).unwrap();
        // span{|00>, |11>} inside two qubits
        let e0 = amps(&[1.0, 0.0, 0.0, 0.0]);
        let e1 = amps(&[0.0, 0.0, 0.0, 1.0]);
        let big = p.embed(&[e0, e1], 2).unwrap();
        assert!(big.completeness_error() < TOL && big.kraus_error() < TOL);
        let s = StateVector::from_real(&[0.8, 0.0, 0.0, 0.6], &["x", "y"]).unwrap();
        let b = enumerate_povm(&s, &big, &["x", "y"]).unwrap();
        assert!((b[0].probability - 0.72).abs() < 1e-12);
        assert!(b[1].probability.abs() < 1e-12);
    }

    #[test]
    fn invalid_povm_rejected() {
        let a = Operator::from_real(2, &[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(matches!(
            PovmSet::new(vec![a], &["half"], vec![true]),
            Err(Error::InvalidPovm(_))
        ));
        let neg = Operator::from_real(2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        let fix = Operator::from_real(2, &[-1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(PovmSet::new(vec![neg, fix], &["a", "b"], vec![true, false]).is_err());
    }
}
