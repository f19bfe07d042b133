//! Branch selection for protocol runs.
//!
//! Protocols never draw random numbers directly. At every measurement they
//! hand the full list of branches to a [`Brancher`], which either samples one
//! (`Sampled`) or follows a scripted path (`Scripted`). Exhaustive enumeration
//! replays the protocol once per leaf of the outcome tree.

use rand::Rng;

use crate::error::Result;
use crate::measurement::{sample_branch, BranchResult};

pub trait Brancher {
    /// Index of the branch to follow. Must not select a null branch.
    fn choose(&mut self, branches: &[BranchResult]) -> usize;
}

/// Samples branches according to their probabilities.
pub struct Sampled<'a, R: ?Sized>(pub &'a mut R);

impl<R: Rng + ?Sized> Brancher for Sampled<'_, R> {
    fn choose(&mut self, branches: &[BranchResult]) -> usize {
        sample_branch(branches, self.0)
    }
}

/// Follows `prefix`, then always takes the first possible branch, recording
/// the alternatives seen at each depth.
#[derive(Debug, Default)]
struct Scripted {
    prefix: Vec<usize>,
    taken: Vec<usize>,
    options: Vec<Vec<usize>>,
}

impl Brancher for Scripted {
    fn choose(&mut self, branches: &[BranchResult]) -> usize {
        let possible: Vec<usize> = branches
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_null())
            .map(|(i, _)| i)
            .collect();
        let depth = self.taken.len();
        let pick = match self.prefix.get(depth) {
            Some(&i) => i,
            None => possible[0],
        };
        self.taken.push(pick);
        self.options.push(possible);
        pick
    }
}

/// Runs `protocol` once for every leaf of its outcome tree, depth first.
///
/// Zero-probability branches are pruned. Leaves come back in lexicographic
/// order of their outcome indices.
pub fn explore<T, F>(mut protocol: F) -> Result<Vec<T>>
where
    F: FnMut(&mut dyn Brancher) -> Result<T>,
{
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        let start = prefix.len();
        let mut script = Scripted {
            prefix,
            ..Default::default()
        };
        out.push(protocol(&mut script)?);
        // siblings of every branch chosen by default, deepest pushed last so the
        // stack yields them in lexicographic order
        for depth in start..script.taken.len() {
            let chosen = script.taken[depth];
            for &alt in script.options[depth].iter().rev() {
                if alt > chosen {
                    let mut p = script.taken[..depth].to_vec();
                    p.push(alt);
                    stack.push(p);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::StateVector;

    fn branches(probs: &[f64]) -> Vec<BranchResult> {
        probs
            .iter()
            .enumerate()
            .map(|(i, &p)| BranchResult {
                outcome: i,
                label: i.to_string(),
                probability: p,
                post_state: (p > 0.0).then(|| StateVector::basis(&["q"], 0).unwrap()),
            })
            .collect()
    }

    #[test]
    fn explore_visits_every_leaf_once() {
        // two-level tree: 3 outcomes (middle impossible), then 2 outcomes
        let leaves = explore(|b| {
            let first = b.choose(&branches(&[0.5, 0.0, 0.5]));
            let second = b.choose(&branches(&[0.25, 0.75]));
            Ok((first, second))
        })
        .unwrap();
        assert_eq!(leaves, vec![(0, 0), (0, 1), (2, 0), (2, 1)]);
    }

    #[test]
    fn explore_handles_variable_depth() {
        let leaves = explore(|b| {
            let first = b.choose(&branches(&[0.5, 0.5]));
            if first == 0 {
                return Ok(vec![first]);
            }
            let second = b.choose(&branches(&[0.1, 0.2, 0.7]));
            Ok(vec![first, second])
        })
        .unwrap();
        assert_eq!(leaves, vec![vec![0], vec![1, 0], vec![1, 1], vec![1, 2]]);
    }
}
