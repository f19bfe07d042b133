//! Execution records and the bookkeeping context protocols run inside.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::branch::Brancher;
use super::ProtocolId;
use crate::channel::{ChannelSpec, InputQubit};
use crate::error::Result;
use crate::gates::Operator;
use crate::measurement::{enumerate_povm, enumerate_projective, PovmSet, ProjectiveMeasurement};
use crate::statevec::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
    Charlie,
}

impl Party {
    pub fn name(self) -> &'static str {
        match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
            Party::Charlie => "charlie",
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Key of the per-channel bit tally, e.g. `alice_to_bob`.
pub fn channel_key(from: Party, to: Party) -> String {
    format!("{from}_to_{to}")
}

/// One step of a protocol run.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    Prepare {
        party: Party,
        qubit: String,
        state: String,
    },
    Measure {
        party: Party,
        qubits: Vec<String>,
        measurement: String,
        outcome: String,
        probability: f64,
    },
    Send {
        from: Party,
        to: Party,
        bits: Vec<u8>,
        meaning: String,
    },
    Apply {
        party: Party,
        qubits: Vec<String>,
        gate: String,
    },
}

/// Named checkpoints where the global state is captured.
pub mod stage {
    /// Before any party acts.
    pub const INITIAL: &str = "initial";
    /// After all of Alice's measurements, before any classical message.
    pub const AFTER_ALICE: &str = "after_alice";
    /// Secret sharing: after Alice's broadcast and the stage-one corrections,
    /// before Bob measures.
    pub const STAGE1: &str = "stage1";
    /// Secret sharing: after Bob's measurement, before he messages Charlie.
    pub const AFTER_BOB: &str = "after_bob";
}

#[derive(Clone, Debug)]
pub struct Snapshot {
    pub stage: &'static str,
    pub state: StateVector,
}

/// Full record of one protocol execution.
#[derive(Clone, Debug, Serialize)]
pub struct ProtocolTrace {
    pub protocol: ProtocolId,
    pub channel: ChannelSpec,
    pub input: InputQubit,
    pub events: Vec<Event>,
    /// Bits sent per directed channel (`alice_to_bob`, ...).
    pub bits: BTreeMap<String, u32>,
    pub success: bool,
    /// Label of the qubit that ends up holding the teleported state.
    pub receiver: String,
    /// Receiver's final state (principal eigenvector of its reduced state).
    pub final_state: StateVector,
    /// `<φ|ρ_receiver|φ>` against the input.
    pub fidelity: f64,
    /// Outcome labels along this branch.
    pub path: Vec<String>,
    /// Probability of this branch.
    pub path_probability: f64,
    #[serde(skip)]
    pub snapshots: Vec<Snapshot>,
}

impl ProtocolTrace {
    pub fn snapshot(&self, stage: &str) -> Option<&StateVector> {
        self.snapshots
            .iter()
            .find(|s| s.stage == stage)
            .map(|s| &s.state)
    }

    pub fn total_bits(&self) -> u32 {
        self.bits.values().sum()
    }

    pub fn bits_on(&self, from: Party, to: Party) -> u32 {
        self.bits.get(&channel_key(from, to)).copied().unwrap_or(0)
    }

    /// Measurement events in order.
    pub fn measurements(&self) -> impl Iterator<Item = (&str, f64)> {
        self.events.iter().filter_map(|e| match e {
            Event::Measure {
                outcome,
                probability,
                ..
            } => Some((outcome.as_str(), *probability)),
            _ => None,
        })
    }
}

/// Mutable context threaded through a single protocol execution.
pub(crate) struct Run<'a> {
    pub state: StateVector,
    brancher: &'a mut dyn Brancher,
    events: Vec<Event>,
    bits: BTreeMap<String, u32>,
    snapshots: Vec<Snapshot>,
    path: Vec<String>,
    probability: f64,
}

impl<'a> Run<'a> {
    pub fn new(
        state: StateVector,
        channels: &[(Party, Party)],
        brancher: &'a mut dyn Brancher,
    ) -> Self {
        let bits = channels
            .iter()
            .map(|&(f, t)| (channel_key(f, t), 0))
            .collect();
        Self {
            state,
            brancher,
            events: Vec::new(),
            bits,
            snapshots: Vec::new(),
            path: Vec::new(),
            probability: 1.0,
        }
    }

    pub fn snapshot(&mut self, stage: &'static str) {
        self.snapshots.push(Snapshot {
            stage,
            state: self.state.clone(),
        });
    }

    pub fn prepare(&mut self, party: Party, ancilla: StateVector, desc: &str) -> Result<()> {
        self.events.push(Event::Prepare {
            party,
            qubit: ancilla.labels().join(","),
            state: desc.to_string(),
        });
        self.state = self.state.tensor(&ancilla)?;
        Ok(())
    }

    fn record_branch(
        &mut self,
        party: Party,
        targets: &[&str],
        name: &str,
        branches: Vec<crate::measurement::BranchResult>,
    ) -> usize {
        let i = self.brancher.choose(&branches);
        let chosen = branches
            .into_iter()
            .nth(i)
            .expect("brancher index in range");
        let post = chosen
            .post_state
            .expect("brancher selected a zero-probability branch");
        self.probability *= chosen.probability;
        self.path.push(chosen.label.clone());
        self.events.push(Event::Measure {
            party,
            qubits: targets.iter().map(|s| s.to_string()).collect(),
            measurement: name.to_string(),
            outcome: chosen.label,
            probability: chosen.probability,
        });
        self.state = post;
        i
    }

    pub fn measure(
        &mut self,
        party: Party,
        m: &ProjectiveMeasurement,
        targets: &[&str],
        name: &str,
    ) -> Result<usize> {
        let branches = enumerate_projective(&self.state, m, targets)?;
        Ok(self.record_branch(party, targets, name, branches))
    }

    pub fn measure_povm(
        &mut self,
        party: Party,
        p: &PovmSet,
        targets: &[&str],
        name: &str,
    ) -> Result<usize> {
        let branches = enumerate_povm(&self.state, p, targets)?;
        Ok(self.record_branch(party, targets, name, branches))
    }

    pub fn apply(
        &mut self,
        party: Party,
        op: &Operator,
        targets: &[&str],
        gate: &str,
    ) -> Result<()> {
        self.state = self.state.apply_operator(op, targets)?;
        self.events.push(Event::Apply {
            party,
            qubits: targets.iter().map(|s| s.to_string()).collect(),
            gate: gate.to_string(),
        });
        Ok(())
    }

    /// Applies `σz^phase σx^flip` if either is set.
    pub fn correct(&mut self, party: Party, target: &str, flip: bool, phase: bool) -> Result<()> {
        let gate = match (flip, phase) {
            (false, false) => return Ok(()),
            (true, false) => "x",
            (false, true) => "z",
            (true, true) => "zx",
        };
        self.apply(
            party,
            &crate::gates::pauli_correction(flip, phase),
            &[target],
            gate,
        )
    }

    pub fn send(&mut self, from: Party, to: Party, bits: Vec<u8>, meaning: &str) {
        *self.bits.entry(channel_key(from, to)).or_insert(0) += bits.len() as u32;
        self.events.push(Event::Send {
            from,
            to,
            bits,
            meaning: meaning.to_string(),
        });
    }

    pub fn finish(
        self,
        protocol: ProtocolId,
        channel: &ChannelSpec,
        input: &InputQubit,
        receiver: &str,
        success: bool,
    ) -> Result<ProtocolTrace> {
        let rho = self.state.reduced_density(&[receiver])?;
        let fidelity = rho.fidelity_with(&input.state(receiver))?;
        Ok(ProtocolTrace {
            protocol,
            channel: *channel,
            input: *input,
            events: self.events,
            bits: self.bits,
            success,
            receiver: receiver.to_string(),
            final_state: rho.principal_state(),
            fidelity,
            path: self.path,
            path_probability: self.probability,
            snapshots: self.snapshots,
        })
    }
}
