//! Three-party quantum secret sharing over `α|000> + β|111>` and its
//! conclusive variants.
//!
//! Every protocol has the same skeleton. Stage one: Alice measures her input
//! `1` together with `A` and broadcasts the result to Bob and Charlie, who
//! correct until they share `a|00> + b|11>` (or a distorted version of it).
//! Stage two: Bob measures `B` and messages Charlie. Stage three: Charlie
//! corrects `C`. Charlie is always the party who ends up with the secret.

use rand::Rng;
use serde::Serialize;

use crate::channel::{ChannelSpec, InputQubit};
use crate::error::Result;
use crate::gates;
use crate::measurement::{discrimination_povm, ProjectiveMeasurement};
use crate::protocols::trace::Run;
use crate::protocols::{
    alice_bell, alice_qact1, alice_two_step, local_recovery, stage, AliceOutcome, Brancher, Party,
    ProtocolId, ProtocolTrace, Sampled,
};
use crate::statevec::StateVector;
use crate::TOL;

/// How Alice performs her conclusive measurement in the first proposal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AliceMethod {
    /// Parity projection followed by unambiguous discrimination.
    Mh,
    /// Ancilla-assisted three-qubit measurement.
    Qact1,
}

/// What a single party could reconstruct on its own right after stage one.
#[derive(Clone, Debug, Serialize)]
pub struct PartyKnowledge {
    pub party: Party,
    pub qubit: String,
    /// `<φ|ρ|φ>` of the party's marginal against the secret.
    pub marginal_fidelity: f64,
    pub can_reconstruct: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SecretShareTrace {
    #[serde(flatten)]
    pub trace: ProtocolTrace,
    pub claimant: Party,
    pub knowledge: Vec<PartyKnowledge>,
}

const CHANNELS: [(Party, Party); 3] = [
    (Party::Alice, Party::Bob),
    (Party::Alice, Party::Charlie),
    (Party::Bob, Party::Charlie),
];

/// `α|000> + β|111>` held as `A` (Alice), `B` (Bob), `C` (Charlie).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TripartiteChannel {
    pub spec: ChannelSpec,
}

impl TripartiteChannel {
    pub const LABELS: [&'static str; 3] = ["A", "B", "C"];

    pub fn new(spec: ChannelSpec) -> Self {
        Self { spec }
    }

    pub fn ghz() -> Self {
        Self::new(ChannelSpec::maximal())
    }

    pub fn state(&self) -> Result<StateVector> {
        self.spec.state(&Self::LABELS)
    }
}

pub fn tripartite_state(c: &ChannelSpec) -> Result<StateVector> {
    TripartiteChannel::new(*c).state()
}

fn initial_state(q: &InputQubit, c: &ChannelSpec) -> Result<StateVector> {
    q.state("1").tensor(&tripartite_state(c)?)
}

fn broadcast(run: &mut Run, alice: &AliceOutcome, meaning: &str) {
    run.send(Party::Alice, Party::Bob, alice.message.clone(), meaning);
    run.send(Party::Alice, Party::Charlie, alice.message.clone(), meaning);
}

/// Flip: both apply σx. Phase: Charlie applies σz.
fn stage_one_corrections(run: &mut Run, flip: bool, phase: bool) -> Result<()> {
    if flip {
        run.correct(Party::Bob, "B", true, false)?;
        run.correct(Party::Charlie, "C", true, false)?;
    }
    if phase {
        run.correct(Party::Charlie, "C", false, true)?;
    }
    Ok(())
}

/// Bob measures in the x basis, sends one bit, Charlie undoes the sign.
fn x_basis_stage(run: &mut Run) -> Result<()> {
    let k = run.measure(Party::Bob, &ProjectiveMeasurement::x_basis(), &["B"], "x")?;
    run.snapshot(stage::AFTER_BOB);
    run.send(Party::Bob, Party::Charlie, vec![k as u8], "x outcome");
    if k == 1 {
        run.correct(Party::Charlie, "C", false, true)?;
    }
    Ok(())
}

fn finish(
    run: Run,
    id: ProtocolId,
    c: &ChannelSpec,
    q: &InputQubit,
    receiver: &str,
    success: bool,
) -> Result<SecretShareTrace> {
    let trace = run.finish(id, c, q, receiver, success)?;
    let split = trace
        .snapshot(stage::STAGE1)
        .expect("every secret-sharing run records stage one");
    let knowledge = [(Party::Bob, "B"), (Party::Charlie, "C")]
        .into_iter()
        .map(|(party, qubit)| {
            let f = split
                .reduced_density(&[qubit])?
                .fidelity_with(&q.state(qubit))?;
            Ok(PartyKnowledge {
                party,
                qubit: qubit.to_string(),
                marginal_fidelity: f,
                can_reconstruct: f >= 1.0 - TOL,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SecretShareTrace {
        trace,
        claimant: Party::Charlie,
        knowledge,
    })
}

pub(crate) fn run_hbb(
    q: &InputQubit,
    c: &ChannelSpec,
    b: &mut dyn Brancher,
) -> Result<SecretShareTrace> {
    let mut run = Run::new(initial_state(q, c)?, &CHANNELS, b);
    run.snapshot(stage::INITIAL);
    let alice = alice_bell(&mut run)?;
    run.snapshot(stage::AFTER_ALICE);
    broadcast(&mut run, &alice, "bell outcome");
    stage_one_corrections(&mut run, alice.flip, alice.phase)?;
    run.snapshot(stage::STAGE1);
    x_basis_stage(&mut run)?;
    finish(run, ProtocolId::Hbb, c, q, "C", c.is_maximal())
}

pub(crate) fn run_css1(
    q: &InputQubit,
    c: &ChannelSpec,
    method: AliceMethod,
    b: &mut dyn Brancher,
) -> Result<SecretShareTrace> {
    let mut run = Run::new(initial_state(q, c)?, &CHANNELS, b);
    run.snapshot(stage::INITIAL);
    let (alice, id) = match method {
        AliceMethod::Mh => (alice_two_step(&mut run, c)?, ProtocolId::Css1Mh),
        AliceMethod::Qact1 => (alice_qact1(&mut run, c)?, ProtocolId::Css1Qact1),
    };
    run.snapshot(stage::AFTER_ALICE);
    let meaning = if alice.message.len() == 2 {
        "flip, sign"
    } else {
        "conclusive, flip, sign"
    };
    broadcast(&mut run, &alice, meaning);
    if alice.conclusive {
        stage_one_corrections(&mut run, alice.flip, alice.phase)?;
    }
    run.snapshot(stage::STAGE1);
    if alice.conclusive {
        x_basis_stage(&mut run)?;
    }
    finish(run, id, c, q, "C", alice.conclusive)
}

pub(crate) fn run_css2(
    q: &InputQubit,
    c: &ChannelSpec,
    b: &mut dyn Brancher,
) -> Result<SecretShareTrace> {
    let mut run = Run::new(initial_state(q, c)?, &CHANNELS, b);
    run.snapshot(stage::INITIAL);
    let alice = alice_bell(&mut run)?;
    run.snapshot(stage::AFTER_ALICE);
    broadcast(&mut run, &alice, "bell outcome");
    stage_one_corrections(&mut run, alice.flip, alice.phase)?;
    run.snapshot(stage::STAGE1);
    // BC = aα|00> + bβ|11>, or aβ|00> + bα|11> after a Ψ outcome
    let mut povm = discrimination_povm(c)?;
    if alice.flip {
        povm = povm.conjugate_by(&gates::sigma_x())?;
    }
    let k = run.measure_povm(Party::Bob, &povm, &["B"], "discriminate")?;
    run.snapshot(stage::AFTER_BOB);
    let conclusive = povm.is_conclusive(k);
    if conclusive {
        let minus = k == 1;
        run.send(
            Party::Bob,
            Party::Charlie,
            vec![1, minus as u8],
            "conclusive, sign",
        );
        if minus {
            run.correct(Party::Charlie, "C", false, true)?;
        }
    } else {
        run.send(Party::Bob, Party::Charlie, vec![0], "inconclusive");
    }
    finish(run, ProtocolId::Css2, c, q, "C", conclusive)
}

pub(crate) fn run_css3(
    q: &InputQubit,
    c: &ChannelSpec,
    b: &mut dyn Brancher,
) -> Result<SecretShareTrace> {
    let mut run = Run::new(initial_state(q, c)?, &CHANNELS, b);
    run.snapshot(stage::INITIAL);
    let alice = alice_bell(&mut run)?;
    run.snapshot(stage::AFTER_ALICE);
    broadcast(&mut run, &alice, "bell outcome");
    stage_one_corrections(&mut run, alice.flip, alice.phase)?;
    run.snapshot(stage::STAGE1);
    x_basis_stage(&mut run)?;
    // Charlie holds ∝ (aα, bβ), or ∝ (aβ, bα) after a Ψ outcome
    let ok = local_recovery(&mut run, Party::Charlie, "C", "C2", c, alice.flip)?;
    finish(run, ProtocolId::Css3, c, q, "C2", ok)
}

/// Three-party sharing over a GHZ state; always succeeds.
pub fn hbb_secret_share<R: Rng + ?Sized>(q: &InputQubit, rng: &mut R) -> Result<SecretShareTrace> {
    run_hbb(q, &ChannelSpec::maximal(), &mut Sampled(rng))
}

/// The same steps over an arbitrary channel. Fails unless it is maximal.
pub fn hbb_on_channel<R: Rng + ?Sized>(
    q: &InputQubit,
    c: &ChannelSpec,
    rng: &mut R,
) -> Result<SecretShareTrace> {
    run_hbb(q, c, &mut Sampled(rng))
}

/// Alice replaces her Bell measurement with a conclusive one.
pub fn css1<R: Rng + ?Sized>(
    q: &InputQubit,
    c: &ChannelSpec,
    method: AliceMethod,
    rng: &mut R,
) -> Result<SecretShareTrace> {
    run_css1(q, c, method, &mut Sampled(rng))
}

/// Bob replaces his x measurement with unambiguous discrimination and sends
/// two bits on success.
pub fn css2<R: Rng + ?Sized>(
    q: &InputQubit,
    c: &ChannelSpec,
    rng: &mut R,
) -> Result<SecretShareTrace> {
    run_css2(q, c, &mut Sampled(rng))
}

/// Full sharing protocol, then Charlie's local ancilla recovery.
pub fn css3<R: Rng + ?Sized>(
    q: &InputQubit,
    c: &ChannelSpec,
    rng: &mut R,
) -> Result<SecretShareTrace> {
    run_css3(q, c, &mut Sampled(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::explore;
    use crate::statevec::DensityMatrix;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    type Runner = fn(&InputQubit, &ChannelSpec, &mut dyn Brancher) -> Result<SecretShareTrace>;

    fn css1_mh(q: &InputQubit, c: &ChannelSpec, b: &mut dyn Brancher) -> Result<SecretShareTrace> {
        run_css1(q, c, AliceMethod::Mh, b)
    }

    fn css1_qact1(
        q: &InputQubit,
        c: &ChannelSpec,
        b: &mut dyn Brancher,
    ) -> Result<SecretShareTrace> {
        run_css1(q, c, AliceMethod::Qact1, b)
    }

    const CONCLUSIVE: [Runner; 4] = [css1_mh, css1_qact1, run_css2, run_css3];

    fn leaves(f: Runner, q: &InputQubit, c: &ChannelSpec) -> Vec<SecretShareTrace> {
        explore(|b| f(q, c, b)).unwrap()
    }

    fn p_success(t: &[SecretShareTrace]) -> f64 {
        t.iter()
            .filter(|x| x.trace.success)
            .map(|x| x.trace.path_probability)
            .sum()
    }

    #[test]
    fn tripartite_examples() {
        let g = tripartite_state(&ChannelSpec::maximal()).unwrap();
        assert!((g.amp(0).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((g.amp(7).re - FRAC_1_SQRT_2).abs() < 1e-15);
        let p = tripartite_state(&ChannelSpec::new(1.0, 0.0).unwrap()).unwrap();
        assert_eq!(p, StateVector::basis(&["A", "B", "C"], 0).unwrap());
        let s = tripartite_state(&ChannelSpec::new(0.8, 0.6).unwrap()).unwrap();
        for i in 1..7 {
            assert_eq!(s.amp(i), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn hbb_always_succeeds_with_expected_bits() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let q = InputQubit::random(&mut rng);
            let t = hbb_secret_share(&q, &mut rng).unwrap();
            assert!(t.trace.success);
            assert!((t.trace.fidelity - 1.0).abs() < TOL);
            assert_eq!(t.trace.bits["alice_to_bob"], 2);
            assert_eq!(t.trace.bits["alice_to_charlie"], 2);
            assert_eq!(t.trace.bits["bob_to_charlie"], 1);
            assert_eq!(t.claimant, Party::Charlie);
        }
    }

    #[test]
    fn hbb_stage_one_shares_the_encoded_secret() {
        let z = InputQubit::real(1.0, 0.0).unwrap();
        for t in leaves(run_hbb, &z, &ChannelSpec::maximal()) {
            let bc = t
                .trace
                .snapshot(stage::STAGE1)
                .unwrap()
                .reduced_density(&["B", "C"])
                .unwrap();
            let target = StateVector::basis(&["B", "C"], 0).unwrap();
            assert!((bc.fidelity_with(&target).unwrap() - 1.0).abs() < 1e-12);
        }
        let q = InputQubit::new(
            Complex64::new(0.3, 0.4),
            Complex64::new(0.0, 0.75f64.sqrt()),
        )
        .unwrap();
        for t in leaves(run_hbb, &q, &ChannelSpec::maximal()) {
            let bc = t
                .trace
                .snapshot(stage::STAGE1)
                .unwrap()
                .reduced_density(&["B", "C"])
                .unwrap();
            let target = StateVector::new(
                vec![
                    q.a(),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    q.b(),
                ],
                &["B", "C"],
            )
            .unwrap();
            assert!((bc.fidelity_with(&target).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hbb_x_outcomes_are_even() {
        // oracle: a|00> + b|11> = (|x+>(a,b) + |x->(a,-b))/√2 term by term,
        // so each x outcome carries weight (|a|² + |b|²)/2 = 1/2
        let q = InputQubit::reference();
        for t in leaves(run_hbb, &q, &ChannelSpec::maximal()) {
            let (label, p) = t.trace.measurements().nth(1).unwrap();
            assert!(label.starts_with('x'));
            assert!((p - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn charlie_marginal_has_no_phase() {
        let q = InputQubit::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap();
        for t in leaves(run_hbb, &q, &ChannelSpec::maximal()) {
            let rho = t
                .trace
                .snapshot(stage::STAGE1)
                .unwrap()
                .reduced_density(&["C"])
                .unwrap();
            assert!((rho.get(0, 0).re - 0.36).abs() < 1e-12);
            assert!((rho.get(1, 1).re - 0.64).abs() < 1e-12);
            assert!(rho.max_off_diagonal() < 1e-12);
            assert!(t.knowledge.iter().all(|k| !k.can_reconstruct));
        }
    }

    #[test]
    fn conclusive_variants_reach_two_beta_squared() {
        let q = InputQubit::reference();
        for f in CONCLUSIVE {
            for beta in [0.0, 0.2, 0.6, FRAC_1_SQRT_2] {
                let c = ChannelSpec::from_beta(beta).unwrap();
                let t = leaves(f, &q, &c);
                let total: f64 = t.iter().map(|x| x.trace.path_probability).sum();
                assert!((total - 1.0).abs() < 1e-12);
                assert!((p_success(&t) - 2.0 * beta * beta).abs() < 1e-12);
                for x in t.iter().filter(|x| x.trace.success) {
                    assert!((x.trace.fidelity - 1.0).abs() < TOL);
                }
            }
        }
    }

    #[test]
    fn css1_stage_one_matches_shared_secret() {
        let q = InputQubit::new(
            Complex64::new(0.3, -0.4),
            Complex64::new(0.75f64.sqrt(), 0.0),
        )
        .unwrap();
        let c = ChannelSpec::from_beta(0.4).unwrap();
        let target = StateVector::new(
            vec![
                q.a(),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                q.b(),
            ],
            &["B", "C"],
        )
        .unwrap();
        for f in [css1_mh as Runner, css1_qact1] {
            for t in leaves(f, &q, &c).iter().filter(|t| t.trace.success) {
                let bc = t
                    .trace
                    .snapshot(stage::STAGE1)
                    .unwrap()
                    .reduced_density(&["B", "C"])
                    .unwrap();
                assert!(bc.max_abs_diff(&target.density()).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn css2_bits_and_heralding() {
        let q = InputQubit::reference();
        let c = ChannelSpec::from_beta(0.6).unwrap();
        for t in leaves(run_css2, &q, &c) {
            let expect = if t.trace.success { 2 } else { 1 };
            assert_eq!(t.trace.bits["bob_to_charlie"], expect);
            assert_eq!(t.trace.bits["alice_to_charlie"], 2);
            // plus outcome: no rotation by Charlie after Bob's message
            if t.trace.path.last().map(String::as_str) == Some("plus") {
                let after_bob = t.trace.snapshot(stage::AFTER_BOB).unwrap();
                let rho = after_bob.reduced_density(&["C"]).unwrap();
                assert!((rho.fidelity_with(&q.state("C")).unwrap() - 1.0).abs() < 1e-12);
            }
        }
        let c0 = ChannelSpec::new(1.0, 0.0).unwrap();
        assert!(leaves(run_css2, &q, &c0).iter().all(|t| !t.trace.success));
    }

    #[test]
    fn bob_cannot_signal_to_charlie() {
        // average of Charlie's state over Bob's outcomes equals stage one, per
        // Alice branch
        let q = InputQubit::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap();
        let c = ChannelSpec::from_beta(0.3).unwrap();
        for f in [run_hbb as Runner, run_css2] {
            let t = leaves(f, &q, &c);
            for bell in ["phi+", "phi-", "psi+", "psi-"] {
                let group: Vec<_> = t.iter().filter(|x| x.trace.path[0] == bell).collect();
                let before = group[0]
                    .trace
                    .snapshot(stage::STAGE1)
                    .unwrap()
                    .reduced_density(&["C"])
                    .unwrap();
                let weight: f64 = group.iter().map(|x| x.trace.path_probability).sum();
                let rhos: Vec<(f64, DensityMatrix)> = group
                    .iter()
                    .map(|x| {
                        let s = x.trace.snapshot(stage::AFTER_BOB).unwrap();
                        (
                            x.trace.path_probability / weight,
                            s.reduced_density(&["C"]).unwrap(),
                        )
                    })
                    .collect();
                let avg = DensityMatrix::mixture(rhos.iter().map(|(p, r)| (*p, r))).unwrap();
                assert!(avg.max_abs_diff(&before).unwrap() < 1e-12);
            }
        }
    }
}
