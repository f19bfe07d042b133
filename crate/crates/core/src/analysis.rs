//! Exact outcome distributions, Monte Carlo estimates and bit accounting.
//!
//! Monte Carlo streams: shot `i` of a run seeded with `s` draws from
//! `ChaCha8Rng::seed_from_u64(s)` with its stream set to `i`. Every shot is
//! therefore independent of how shots are scheduled across threads.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{ChannelSpec, InputQubit};
use crate::error::{Error, Result};
use crate::protocols::{explore, stage, ProtocolId, RunTrace, Sampled};
use crate::statevec::DensityMatrix;
use crate::TOL;

/// Separator used when a branch path is flattened into one key.
pub const PATH_SEP: &str = "/";

/// Seed of the random inputs used to check input independence.
pub const INDEPENDENCE_SEED: u64 = 0x5eed;

/// One leaf of a protocol's outcome tree.
#[derive(Clone, Debug, Serialize)]
pub struct Branch {
    pub path: Vec<String>,
    pub probability: f64,
    pub success: bool,
    pub fidelity: f64,
    pub bits: BTreeMap<String, u32>,
}

impl Branch {
    pub fn key(&self) -> String {
        self.path.join(PATH_SEP)
    }

    pub fn total_bits(&self) -> u32 {
        self.bits.values().sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OutcomeDistribution {
    pub protocol: ProtocolId,
    pub channel: ChannelSpec,
    pub input: InputQubit,
    pub branches: Vec<Branch>,
}

impl OutcomeDistribution {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }

    pub fn success_probability(&self) -> f64 {
        self.branches
            .iter()
            .filter(|b| b.success)
            .map(|b| b.probability)
            .sum()
    }

    /// Largest `|1 - F|` over success branches; 0 when there are none.
    pub fn worst_success_infidelity(&self) -> f64 {
        self.branches
            .iter()
            .filter(|b| b.success)
            .map(|b| (1.0 - b.fidelity).abs())
            .fold(0.0, f64::max)
    }

    /// Total probability of branches whose first outcome is `label`.
    pub fn mass_of_first(&self, label: &str) -> f64 {
        self.branches
            .iter()
            .filter(|b| b.path.first().map(String::as_str) == Some(label))
            .map(|b| b.probability)
            .sum()
    }

    pub fn probability_of(&self, key: &str) -> Option<f64> {
        self.branches
            .iter()
            .find(|b| b.key() == key)
            .map(|b| b.probability)
    }
}

/// Every leaf trace of `id`, in lexicographic outcome order.
pub fn enumerate_traces(id: ProtocolId, q: &InputQubit, c: &ChannelSpec) -> Result<Vec<RunTrace>> {
    explore(|b| id.execute(q, c, b))
}

pub fn distribution_from_traces(
    id: ProtocolId,
    q: &InputQubit,
    c: &ChannelSpec,
    traces: &[RunTrace],
) -> OutcomeDistribution {
    let branches = traces
        .iter()
        .map(|t| {
            let t = t.base();
            Branch {
                path: t.path.clone(),
                probability: t.path_probability,
                success: t.success,
                fidelity: t.fidelity,
                bits: t.bits.clone(),
            }
        })
        .collect();
    OutcomeDistribution {
        protocol: id,
        channel: *c,
        input: *q,
        branches,
    }
}

pub fn enumerate_protocol(
    id: ProtocolId,
    q: &InputQubit,
    c: &ChannelSpec,
) -> Result<OutcomeDistribution> {
    let traces = enumerate_traces(id, q, c)?;
    Ok(distribution_from_traces(id, q, c, &traces))
}

/// Five Haar-random inputs from a fixed seed.
pub fn independence_inputs() -> Vec<InputQubit> {
    let mut rng = ChaCha8Rng::seed_from_u64(INDEPENDENCE_SEED);
    (0..5).map(|_| InputQubit::random(&mut rng)).collect()
}

/// Exact success probability for the reference input, checked to be the
/// same (within [`TOL`]) for five random inputs.
pub fn success_probability(id: ProtocolId, c: &ChannelSpec) -> Result<f64> {
    let p = enumerate_protocol(id, &InputQubit::reference(), c)?.success_probability();
    let mut worst: f64 = 0.0;
    for q in independence_inputs() {
        let other = enumerate_protocol(id, &q, c)?.success_probability();
        worst = worst.max((other - p).abs());
    }
    if worst > TOL {
        return Err(Error::InputDependent(worst));
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleStats {
    pub protocol: ProtocolId,
    pub shots: u64,
    pub successes: u64,
    pub success_frequency: f64,
    /// Mean fidelity over all shots.
    pub mean_fidelity: f64,
    /// Mean fidelity over successful shots.
    pub mean_fidelity_given_success: Option<f64>,
    /// Counts per branch path.
    pub frequencies: BTreeMap<String, u64>,
    pub seed: u64,
}

/// Per-shot generator for shot `index` of a run seeded with `seed`.
pub fn shot_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn monte_carlo(
    id: ProtocolId,
    q: &InputQubit,
    c: &ChannelSpec,
    shots: u64,
    seed: u64,
) -> Result<SampleStats> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let outcomes: Vec<(String, bool, f64)> = (0..shots)
        .into_par_iter()
        .map(|i| {
            let mut rng = shot_rng(seed, i);
            let t = id.execute(q, c, &mut Sampled(&mut rng))?.into_base();
            Ok((t.path.join(PATH_SEP), t.success, t.fidelity))
        })
        .collect::<Result<_>>()?;

    let mut frequencies = BTreeMap::new();
    let (mut successes, mut fid_all, mut fid_ok) = (0u64, 0.0, 0.0);
    for (key, ok, f) in outcomes {
        *frequencies.entry(key).or_insert(0) += 1;
        fid_all += f;
        if ok {
            successes += 1;
            fid_ok += f;
        }
    }
    Ok(SampleStats {
        protocol: id,
        shots,
        successes,
        success_frequency: successes as f64 / shots as f64,
        mean_fidelity: fid_all / shots as f64,
        mean_fidelity_given_success: (successes > 0).then(|| fid_ok / successes as f64),
        frequencies,
        seed,
    })
}

/// Four binomial standard deviations, `4 √(p(1-p)/n)`.
pub fn binomial_bound(p: f64, shots: u64) -> f64 {
    4.0 * (p * (1.0 - p) / shots as f64).max(0.0).sqrt()
}

/// Whether `freq` lies within [`binomial_bound`] of `p`. A degenerate `p`
/// demands an exact match.
pub fn within_binomial_bound(freq: f64, p: f64, shots: u64) -> bool {
    (freq - p).abs() <= binomial_bound(p, shots) + 1e-12
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchBits {
    pub path: Vec<String>,
    pub probability: f64,
    pub success: bool,
    pub bits: BTreeMap<String, u32>,
    pub total: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct BitReport {
    pub protocol: ProtocolId,
    pub branches: Vec<BranchBits>,
    /// Expected bits per channel over all branches.
    pub expected: BTreeMap<String, f64>,
    pub expected_total: f64,
    /// Expected bits per channel conditioned on success.
    pub expected_given_success: Option<BTreeMap<String, f64>>,
    pub expected_total_given_success: Option<f64>,
}

impl BitReport {
    /// Distinct totals over branches satisfying `keep`.
    pub fn totals_where(&self, keep: impl Fn(&BranchBits) -> bool) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .branches
            .iter()
            .filter(|b| keep(b))
            .map(|b| b.total)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Distinct counts on one channel over all branches.
    pub fn channel_counts(&self, key: &str) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .branches
            .iter()
            .map(|b| b.bits.get(key).copied().unwrap_or(0))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn weighted_bits<'a>(it: impl Iterator<Item = &'a Branch>) -> (BTreeMap<String, f64>, f64) {
    let mut out: BTreeMap<String, f64> = BTreeMap::new();
    let mut weight = 0.0;
    for b in it {
        weight += b.probability;
        for (k, &n) in &b.bits {
            *out.entry(k.clone()).or_insert(0.0) += b.probability * n as f64;
        }
    }
    (out, weight)
}

pub fn bit_report(d: &OutcomeDistribution) -> BitReport {
    let branches = d
        .branches
        .iter()
        .map(|b| BranchBits {
            path: b.path.clone(),
            probability: b.probability,
            success: b.success,
            bits: b.bits.clone(),
            total: b.total_bits(),
        })
        .collect();
    let (expected, _) = weighted_bits(d.branches.iter());
    let expected_total = expected.values().sum();
    let (mut given, w) = weighted_bits(d.branches.iter().filter(|b| b.success));
    let expected_given_success = (w > 0.0).then(|| {
        given.values_mut().for_each(|v| *v /= w);
        given
    });
    let expected_total_given_success = expected_given_success.as_ref().map(|m| m.values().sum());
    BitReport {
        protocol: d.protocol,
        branches,
        expected,
        expected_total,
        expected_given_success,
        expected_total_given_success,
    }
}

/// Largest entrywise gap between the remote parties' reduced state before
/// Alice acts and its average over her outcomes before any message.
pub fn no_signaling_deviation(traces: &[RunTrace], remote: &[&str]) -> Result<f64> {
    let first = traces
        .first()
        .ok_or_else(|| Error::InvalidArgument("no branches".into()))?
        .base();
    let before = snapshot_density(first, stage::INITIAL, remote)?;
    let parts = traces
        .iter()
        .map(|t| {
            let t = t.base();
            Ok((
                t.path_probability,
                snapshot_density(t, stage::AFTER_ALICE, remote)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let avg = DensityMatrix::mixture(parts.iter().map(|(p, r)| (*p, r)))?;
    avg.max_abs_diff(&before)
}

/// Largest `|ρ_C[0][1]|` at stage one over all branches.
pub fn secrecy_deviation(traces: &[RunTrace]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for t in traces {
        let rho = snapshot_density(t.base(), stage::STAGE1, &["C"])?;
        worst = worst.max(rho.max_off_diagonal());
    }
    Ok(worst)
}

fn snapshot_density(
    t: &crate::protocols::ProtocolTrace,
    at: &str,
    keep: &[&str],
) -> Result<DensityMatrix> {
    t.snapshot(at)
        .ok_or_else(|| Error::InvalidArgument(format!("trace has no `{at}` snapshot")))?
        .reduced_density(keep)
}
