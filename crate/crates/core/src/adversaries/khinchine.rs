use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Adversary;
use crate::dims::{validate_witness, Dimension, DimsEngine, WitnessTree};
use crate::error::{Error, Result};
use crate::learners::Prediction;
use crate::model::ProblemInstance;

/// `sign(sum)` of a block of `±1` values; blocks have odd length, so no ties.
pub fn block_sign(block: &[i8]) -> i8 {
    let s: i64 = block.iter().map(|&b| b as i64).sum();
    if s > 0 {
        1
    } else {
        -1
    }
}

/// Oblivious agnostic adversary on a depth-`d` tree with two disjoint edges per node.
///
/// The stream has `d` blocks of `k` rounds. Block `i` stays at the node reached
/// by the majority signs of earlier blocks and reveals edge 0 for `-1`, edge 1
/// for `+1`. The comparator is the leaf hypothesis of the majority path.
pub struct KhinchineAdversary {
    tree: WitnessTree,
    k: usize,
    sigma: Vec<i8>,
    t: usize,
}

impl KhinchineAdversary {
    pub fn new(instance: &ProblemInstance, tree: WitnessTree, k: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rounds = k * tree.depth();
        let sigma = (0..rounds)
            .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
            .collect();
        Self::with_signs(instance, tree, k, sigma)
    }

    pub fn with_signs(
        instance: &ProblemInstance,
        tree: WitnessTree,
        k: usize,
        sigma: Vec<i8>,
    ) -> Result<Self> {
        if k.is_multiple_of(2) {
            return Err(Error::range(
                "k",
                format!("block length must be odd, got {k}"),
            ));
        }
        validate_witness(instance, &tree, &Dimension::PSetLittlestone(2))
            .map_err(|e| Error::Config(format!("invalid 2-Set Littlestone witness: {e}")))?;
        if sigma.len() != k * tree.depth() || sigma.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Config(format!(
                "expected {} signs in {{-1, +1}}",
                k * tree.depth()
            )));
        }
        Ok(KhinchineAdversary {
            tree,
            k,
            sigma,
            t: 0,
        })
    }

    /// Uses the maximal-depth 2-Set Littlestone witness of the whole class.
    pub fn for_instance(instance: Arc<ProblemInstance>, k: usize, seed: u64) -> Result<Self> {
        let mut engine = DimsEngine::new(Arc::clone(&instance));
        let full = engine.full();
        let tree = engine.psldim_witness(&full, 2)?;
        Self::new(&instance, tree, k, seed)
    }

    pub fn horizon(&self) -> usize {
        self.sigma.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.sigma
    }

    /// Majority sign of every block.
    pub fn block_signs(&self) -> Vec<i8> {
        self.sigma.chunks(self.k).map(block_sign).collect()
    }

    fn edge(sign: i8) -> usize {
        if sign > 0 {
            1
        } else {
            0
        }
    }

    fn node(&self, block: usize) -> &WitnessTree {
        let path: Vec<usize> = self.block_signs()[..block]
            .iter()
            .map(|&s| Self::edge(s))
            .collect();
        self.tree.descend(&path)
    }

    /// Leaf hypothesis of the majority path.
    pub fn comparator(&self) -> usize {
        match self.node(self.tree.depth()) {
            WitnessTree::Leaf { hypothesis } => *hypothesis,
            WitnessTree::Node { .. } => unreachable!("complete tree"),
        }
    }
}

impl Adversary for KhinchineAdversary {
    fn name(&self) -> &'static str {
        "khinchine"
    }

    fn next_instance(&mut self) -> Result<Option<usize>> {
        if self.t >= self.sigma.len() {
            return Ok(None);
        }
        Ok(match self.node(self.t / self.k) {
            WitnessTree::Node { instance, .. } => Some(*instance),
            WitnessTree::Leaf { .. } => None,
        })
    }

    fn reveal(&mut self, _prediction: &Prediction) -> Result<usize> {
        let set = match self.node(self.t / self.k) {
            WitnessTree::Node { edges, .. } => edges[Self::edge(self.sigma[self.t])].set,
            WitnessTree::Leaf { .. } => {
                return Err(Error::Config("khinchine stream exhausted".into()))
            }
        };
        self.t += 1;
        Ok(set)
    }

    fn keeps_realizable(&self) -> bool {
        false
    }

    fn designated_comparator(&self) -> Option<usize> {
        Some(self.comparator())
    }
}
