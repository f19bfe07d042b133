//! Executable teleportation protocols and the shared run machinery.

pub mod branch;
mod teleport;
pub mod trace;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use branch::{explore, Brancher, Sampled};
pub use teleport::{
    channel_state, mh_teleport, parity_measurement, qact1_basis, qact1_measurement, qact1_teleport,
    qact2_teleport, standard_teleport,
};
pub use trace::{channel_key, stage, Event, Party, ProtocolTrace, Snapshot};

pub(crate) use teleport::{alice_bell, alice_qact1, alice_two_step, local_recovery, AliceOutcome};

use crate::channel::{ChannelSpec, InputQubit};
use crate::error::{Error, Result};
use crate::secretshare::{self, AliceMethod, SecretShareTrace};

/// Every protocol the simulator knows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolId {
    Standard,
    Mh,
    Qact1,
    Qact2,
    Hbb,
    Css1Mh,
    Css1Qact1,
    Css2,
    Css3,
}

impl ProtocolId {
    pub const ALL: [ProtocolId; 9] = [
        ProtocolId::Standard,
        ProtocolId::Mh,
        ProtocolId::Qact1,
        ProtocolId::Qact2,
        ProtocolId::Hbb,
        ProtocolId::Css1Mh,
        ProtocolId::Css1Qact1,
        ProtocolId::Css2,
        ProtocolId::Css3,
    ];

    /// Protocols whose success probability is `2β²`.
    pub const CONCLUSIVE: [ProtocolId; 7] = [
        ProtocolId::Mh,
        ProtocolId::Qact1,
        ProtocolId::Qact2,
        ProtocolId::Css1Mh,
        ProtocolId::Css1Qact1,
        ProtocolId::Css2,
        ProtocolId::Css3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolId::Standard => "standard",
            ProtocolId::Mh => "mh",
            ProtocolId::Qact1 => "qact1",
            ProtocolId::Qact2 => "qact2",
            ProtocolId::Hbb => "hbb",
            ProtocolId::Css1Mh => "css1_mh",
            ProtocolId::Css1Qact1 => "css1_qact1",
            ProtocolId::Css2 => "css2",
            ProtocolId::Css3 => "css3",
        }
    }

    pub fn is_secret_sharing(self) -> bool {
        matches!(
            self,
            ProtocolId::Hbb
                | ProtocolId::Css1Mh
                | ProtocolId::Css1Qact1
                | ProtocolId::Css2
                | ProtocolId::Css3
        )
    }

    /// Qubits held by parties other than Alice at the start.
    pub fn remote_qubits(self) -> &'static [&'static str] {
        if self.is_secret_sharing() {
            &["B", "C"]
        } else {
            &["B"]
        }
    }

    /// One execution with branch choices delegated to `b`.
    pub fn execute(
        self,
        q: &InputQubit,
        c: &ChannelSpec,
        b: &mut dyn Brancher,
    ) -> Result<RunTrace> {
        Ok(match self {
            ProtocolId::Standard => RunTrace::Teleport(teleport::run_standard(q, c, b)?),
            ProtocolId::Mh => RunTrace::Teleport(teleport::run_mh(q, c, b)?),
            ProtocolId::Qact1 => RunTrace::Teleport(teleport::run_qact1(q, c, b)?),
            ProtocolId::Qact2 => RunTrace::Teleport(teleport::run_qact2(q, c, b)?),
            ProtocolId::Hbb => RunTrace::SecretShare(secretshare::run_hbb(q, c, b)?),
            ProtocolId::Css1Mh => {
                RunTrace::SecretShare(secretshare::run_css1(q, c, AliceMethod::Mh, b)?)
            }
            ProtocolId::Css1Qact1 => {
                RunTrace::SecretShare(secretshare::run_css1(q, c, AliceMethod::Qact1, b)?)
            }
            ProtocolId::Css2 => RunTrace::SecretShare(secretshare::run_css2(q, c, b)?),
            ProtocolId::Css3 => RunTrace::SecretShare(secretshare::run_css3(q, c, b)?),
        })
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProtocolId::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownProtocol(s.to_string()))
    }
}

/// Trace of either protocol family.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum RunTrace {
    Teleport(ProtocolTrace),
    SecretShare(SecretShareTrace),
}

impl RunTrace {
    pub fn base(&self) -> &ProtocolTrace {
        match self {
            RunTrace::Teleport(t) => t,
            RunTrace::SecretShare(s) => &s.trace,
        }
    }

    pub fn into_base(self) -> ProtocolTrace {
        match self {
            RunTrace::Teleport(t) => t,
            RunTrace::SecretShare(s) => s.trace,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip_through_names() {
        for p in ProtocolId::ALL {
            assert_eq!(p.name().parse::<ProtocolId>().unwrap(), p);
        }
        assert!(matches!(
            "bb84".parse::<ProtocolId>(),
            Err(Error::UnknownProtocol(_))
        ));
    }
}
