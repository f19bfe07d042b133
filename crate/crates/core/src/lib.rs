//! Exact simulation of conclusive teleportation and secret sharing over
//! pure, non-maximally entangled channels.

pub mod analysis;
pub mod channel;
pub mod error;
pub mod gates;
pub mod measurement;
pub mod protocols;
pub mod secretshare;
pub mod statevec;
pub mod verify;

pub use analysis::{OutcomeDistribution, SampleStats};
pub use channel::{ChannelSpec, DerivedSchmidt, InputQubit};
pub use error::{Error, Result};
pub use gates::{BellOutcome, Operator};
pub use measurement::{BranchResult, PovmSet, ProjectiveMeasurement};
pub use protocols::{ProtocolId, ProtocolTrace, RunTrace};
pub use secretshare::{AliceMethod, SecretShareTrace, TripartiteChannel};
pub use statevec::{ComplexAmp, DensityMatrix, StateVector};

/// Tolerance for invariant checks on computed quantities.
pub const TOL: f64 = 1e-10;

/// Tolerance when validating user-supplied or constructed inputs.
pub const CONSTRUCT_TOL: f64 = 1e-9;
