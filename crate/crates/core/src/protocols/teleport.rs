//! Teleportation over `α|00> + β|11>`: the standard Bell scheme, the
//! two-step conclusive scheme, and the two ancilla-assisted variants.
//!
//! Qubit labels: `1` is the unknown input, `A`/`B` are Alice's and Bob's
//! halves of the channel, `2` is Alice's ancilla and `B2` Bob's ancilla.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::LazyLock;

use num_complex::Complex64;
use rand::Rng;

use super::branch::{Brancher, Sampled};
use super::trace::{stage, Party, ProtocolTrace, Run};
use super::ProtocolId;
use crate::channel::{ChannelSpec, InputQubit};
use crate::error::Result;
use crate::gates::{self, BellOutcome, Operator};
use crate::measurement::{discrimination_povm, PovmSet, ProjectiveMeasurement};
use crate::statevec::StateVector;

const POVM_PLUS: usize = 0;
const POVM_MINUS: usize = 1;

/// What Alice learned and what she tells the receivers.
#[derive(Clone, Debug)]
pub(crate) struct AliceOutcome {
    pub conclusive: bool,
    pub flip: bool,
    pub phase: bool,
    pub message: Vec<u8>,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn basis_vec(dim: usize, index: usize) -> Vec<Complex64> {
    let mut v = vec![c(0.0); dim];
    v[index] = c(1.0);
    v
}

/// Bell measurement on `(1, A)`; two bits `[flip, sign]`.
pub(crate) fn alice_bell(run: &mut Run) -> Result<AliceOutcome> {
    let k = run.measure(
        Party::Alice,
        &ProjectiveMeasurement::bell(),
        &["1", "A"],
        "bell",
    )?;
    let o = BellOutcome::from_index(k).expect("four Bell outcomes");
    Ok(AliceOutcome {
        conclusive: true,
        flip: o.flip(),
        phase: o.sign(),
        message: o.bits().to_vec(),
    })
}

/// `α|00> + β|11>` shared as `A` (Alice) and `B` (Bob).
pub fn channel_state(c: &ChannelSpec) -> Result<StateVector> {
    c.state(&["A", "B"])
}

/// Projection of Alice's pair onto span{|00>,|11>} or span{|01>,|10>}.
pub fn parity_measurement() -> ProjectiveMeasurement {
    static PARITY: LazyLock<ProjectiveMeasurement> = LazyLock::new(|| {
        let e = |i| basis_vec(4, i);
        let even = Operator::outer(&e(0), &e(0)).add(&Operator::outer(&e(3), &e(3)));
        let odd = Operator::outer(&e(1), &e(1)).add(&Operator::outer(&e(2), &e(2)));
        ProjectiveMeasurement::new(vec![even, odd], &["even", "odd"]).expect("parity is complete")
    });
    PARITY.clone()
}

/// Two-step conclusive measurement on `(1, A)`.
///
/// Within the even subspace (coordinates `|00>`, `|11>`) Alice's pair is
/// `(α, ±β)` correlated with Bob holding `(a, ±b)`; within the odd subspace
/// (coordinates `|10>`, `|01>`) it is `(α, ±β)` correlated with `(b, ±a)`.
/// Message: `[conclusive, flip, sign]`.
pub(crate) fn alice_two_step(run: &mut Run, ch: &ChannelSpec) -> Result<AliceOutcome> {
    let parity = run.measure(Party::Alice, &parity_measurement(), &["1", "A"], "parity")?;
    let flip = parity == 1;
    let basis = if flip {
        [basis_vec(4, 0b10), basis_vec(4, 0b01)]
    } else {
        [basis_vec(4, 0b00), basis_vec(4, 0b11)]
    };
    let povm = discrimination_povm(ch)?.embed(&basis, 2)?;
    let k = run.measure_povm(Party::Alice, &povm, &["1", "A"], "discriminate")?;
    Ok(conclusive_message(k, flip))
}

fn conclusive_message(povm_outcome: usize, flip: bool) -> AliceOutcome {
    let conclusive = povm_outcome == POVM_PLUS || povm_outcome == POVM_MINUS;
    let phase = povm_outcome == POVM_MINUS;
    AliceOutcome {
        conclusive,
        flip: conclusive && flip,
        phase,
        message: vec![conclusive as u8, (conclusive && flip) as u8, phase as u8],
    }
}

/// The eight-state basis of Alice's qubits `(1, 2, A)`.
pub fn qact1_basis() -> Vec<StateVector> {
    let r = FRAC_1_SQRT_2;
    let labels = ["1", "2", "A"];
    let pair = |i: usize, j: usize, s: f64| {
        let mut v = vec![c(0.0); 8];
        v[i] = c(r);
        v[j] = c(s * r);
        StateVector::new(v, &labels).expect("normalized")
    };
    let ket = |i| StateVector::basis(&labels, i).expect("in range");
    vec![
        ket(0b000),
        ket(0b111),
        ket(0b011),
        ket(0b100),
        pair(0b010, 0b101, 1.0),
        pair(0b010, 0b101, -1.0),
        pair(0b001, 0b110, 1.0),
        pair(0b001, 0b110, -1.0),
    ]
}

/// `P1 = |Φ1><Φ1| + |Φ2><Φ2|`, `P2 = |Φ3><Φ3| + |Φ4><Φ4|`, `P3..P6` rank one on
/// `Φ5..Φ8`.
pub fn qact1_measurement() -> ProjectiveMeasurement {
    static QACT1: LazyLock<ProjectiveMeasurement> = LazyLock::new(|| {
        let phi = qact1_basis();
        let p = |i: usize| Operator::projector(&phi[i]);
        let projectors = vec![p(0).add(&p(1)), p(2).add(&p(3)), p(4), p(5), p(6), p(7)];
        ProjectiveMeasurement::new(projectors, &["P1", "P2", "P3", "P4", "P5", "P6"])
            .expect("eight-state basis is complete")
    });
    QACT1.clone()
}

/// Ancilla-assisted measurement on `(1, 2, A)`.
///
/// Rank-one outcomes `P3..P6` leave Bob with `(a,b)`, `(a,-b)`, `(b,a)`,
/// `(b,-a)` and cost two bits `[flip, sign]`. The rank-two outcomes leave a
/// two-state discrimination problem with coefficients `(α', β')`: in `P1`
/// (coordinates `Φ1`, `Φ2`) paired with `(a, ±b)`, in `P2` (coordinates `Φ4`,
/// `Φ3`) paired with `(b, ±a)`. Those cost three bits `[conclusive, flip, sign]`.
pub(crate) fn alice_qact1(run: &mut Run, ch: &ChannelSpec) -> Result<AliceOutcome> {
    let ancilla = StateVector::qubit("2", c(ch.alpha()), c(ch.beta()))?;
    run.prepare(Party::Alice, ancilla, "alpha|0> + beta|1>")?;
    let targets = ["1", "2", "A"];
    let k = run.measure(Party::Alice, &qact1_measurement(), &targets, "qact1")?;
    if k >= 2 {
        let flip = k >= 4;
        let phase = k == 3 || k == 5;
        return Ok(AliceOutcome {
            conclusive: true,
            flip,
            phase,
            message: vec![flip as u8, phase as u8],
        });
    }
    let phi = qact1_basis();
    let flip = k == 1;
    let basis = if flip {
        [phi[3].amps().to_vec(), phi[2].amps().to_vec()]
    } else {
        [phi[0].amps().to_vec(), phi[1].amps().to_vec()]
    };
    let povm = discrimination_povm(&ch.derived().as_channel())?.embed(&basis, 2)?;
    let j = run.measure_povm(Party::Alice, &povm, &targets, "discriminate")?;
    Ok(conclusive_message(j, flip))
}

/// Receiver-side recovery of `∝ (aα, bβ)` (or `∝ (aβ, bα)` when `swapped`):
/// adjoin `|0>`, CNOT, then discriminate the control qubit. Returns whether
/// the discrimination was conclusive; on success `ancilla` holds the input.
pub(crate) fn local_recovery(
    run: &mut Run,
    party: Party,
    qubit: &str,
    ancilla: &str,
    ch: &ChannelSpec,
    swapped: bool,
) -> Result<bool> {
    run.prepare(party, StateVector::basis(&[ancilla], 0)?, "|0>")?;
    run.apply(party, &gates::cnot(), &[qubit, ancilla], "cnot")?;
    let mut povm: PovmSet = discrimination_povm(ch)?;
    if swapped {
        // (β, ±α) = σx (α, ±β) up to sign
        povm = povm.conjugate_by(&gates::sigma_x())?;
    }
    let k = run.measure_povm(party, &povm, &[qubit], "discriminate")?;
    if k == POVM_MINUS {
        run.correct(party, ancilla, false, true)?;
    }
    Ok(k == POVM_PLUS || k == POVM_MINUS)
}

fn initial_state(q: &InputQubit, ch: &ChannelSpec) -> Result<StateVector> {
    q.state("1").tensor(&ch.state(&["A", "B"])?)
}

const ALICE_TO_BOB: [(Party, Party); 1] = [(Party::Alice, Party::Bob)];

pub(crate) fn run_standard(
    q: &InputQubit,
    ch: &ChannelSpec,
    b: &mut dyn Brancher,
) -> Result<ProtocolTrace> {
    let mut run = Run::new(initial_state(q, ch)?, &ALICE_TO_BOB, b);
    run.snapshot(stage::INITIAL);
    let alice = alice_bell(&mut run)?;
    run.snapshot(stage::AFTER_ALICE);
    run.send(Party::Alice, Party::Bob, alice.message, "bell outcome");
    run.correct(Party::Bob, "B", alice.flip, alice.phase)?;
    run.finish(ProtocolId::Standard, ch, q, "B", ch.is_maximal())
}

pub(crate) fn run_mh(
    q: &InputQubit,
    ch: &ChannelSpec,
    b: &mut dyn Brancher,
) -> Result<ProtocolTrace> {
    let mut run = Run::new(initial_state(q, ch)?, &ALICE_TO_BOB, b);
    run.snapshot(stage::INITIAL);
    let alice = alice_two_step(&mut run, ch)?;
    run.snapshot(stage::AFTER_ALICE);
    run.send(
        Party::Alice,
        Party::Bob,
        alice.message,
        "conclusive, flip, sign",
    );
    if alice.conclusive {
        run.correct(Party::Bob, "B", alice.flip, alice.phase)?;
    }
    run.finish(ProtocolId::Mh, ch, q, "B", alice.conclusive)
}

pub(crate) fn run_qact1(
    q: &InputQubit,
    ch: &ChannelSpec,
    b: &mut dyn Brancher,
) -> Result<ProtocolTrace> {
    let mut run = Run::new(initial_state(q, ch)?, &ALICE_TO_BOB, b);
    run.snapshot(stage::INITIAL);
    let alice = alice_qact1(&mut run, ch)?;
    run.snapshot(stage::AFTER_ALICE);
    let meaning = if alice.message.len() == 2 {
        "flip, sign"
    } else {
        "conclusive, flip, sign"
    };
    run.send(Party::Alice, Party::Bob, alice.message, meaning);
    if alice.conclusive {
        run.correct(Party::Bob, "B", alice.flip, alice.phase)?;
    }
    run.finish(ProtocolId::Qact1, ch, q, "B", alice.conclusive)
}

pub(crate) fn run_qact2(
    q: &InputQubit,
    ch: &ChannelSpec,
    b: &mut dyn Brancher,
) -> Result<ProtocolTrace> {
    let channels = [(Party::Alice, Party::Bob), (Party::Bob, Party::Alice)];
    let mut run = Run::new(initial_state(q, ch)?, &channels, b);
    run.snapshot(stage::INITIAL);
    let alice = alice_bell(&mut run)?;
    run.snapshot(stage::AFTER_ALICE);
    run.send(Party::Alice, Party::Bob, alice.message, "bell outcome");
    run.correct(Party::Bob, "B", alice.flip, alice.phase)?;
    // Bob now holds ∝ (aα, bβ), or ∝ (aβ, bα) after a Ψ outcome
    let ok = local_recovery(&mut run, Party::Bob, "B", "B2", ch, alice.flip)?;
    run.finish(ProtocolId::Qact2, ch, q, "B2", ok)
}

/// Standard Bell-measurement teleportation. Succeeds only on a maximal
/// channel; otherwise the trace records the distorted state Bob ends with.
pub fn standard_teleport<R: Rng + ?Sized>(
    q: &InputQubit,
    c: &ChannelSpec,
    rng: &mut R,
) -> Result<ProtocolTrace> {
    run_standard(q, c, &mut Sampled(rng))
}

/// Conclusive teleportation: parity projection, then unambiguous
/// discrimination of Alice's pair. Three bits on every branch.
pub fn mh_teleport<R: Rng + ?Sized>(
    q: &InputQubit,
    c: &ChannelSpec,
    rng: &mut R,
) -> Result<ProtocolTrace> {
    run_mh(q, c, &mut Sampled(rng))
}

/// Conclusive teleportation with Alice's ancilla `(α, β)` and a joint
/// three-qubit measurement. Two bits on rank-one outcomes, three otherwise.
pub fn qact1_teleport<R: Rng + ?Sized>(
    q: &InputQubit,
    c: &ChannelSpec,
    rng: &mut R,
) -> Result<ProtocolTrace> {
    run_qact1(q, c, &mut Sampled(rng))
}

/// Standard teleportation followed by Bob's local ancilla + CNOT +
/// discrimination. Two bits total, all from Alice.
pub fn qact2_teleport<R: Rng + ?Sized>(
    q: &InputQubit,
    c: &ChannelSpec,
    rng: &mut R,
) -> Result<ProtocolTrace> {
    run_qact2(q, c, &mut Sampled(rng))
}
