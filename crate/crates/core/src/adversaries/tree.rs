use std::sync::Arc;

use super::Adversary;
use crate::dims::{validate_witness, Dimension, DimsEngine, WitnessTree};
use crate::error::{Error, Result};
use crate::learners::Prediction;
use crate::model::ProblemInstance;

/// Walks a Set Littlestone tree, taking the edge of the learner's label.
///
/// Distribution predictions are read through their mode.
pub struct SlTreeAdversary {
    tree: WitnessTree,
    path: Vec<usize>,
}

impl SlTreeAdversary {
    pub fn new(instance: &ProblemInstance, tree: WitnessTree) -> Result<Self> {
        validate_witness(instance, &tree, &Dimension::SetLittlestone)
            .map_err(|e| Error::Config(format!("invalid Set Littlestone witness: {e}")))?;
        Ok(SlTreeAdversary {
            tree,
            path: Vec::new(),
        })
    }

    /// Uses the maximal-depth witness of the whole class.
    pub fn for_instance(instance: Arc<ProblemInstance>) -> Result<Self> {
        let mut engine = DimsEngine::new(Arc::clone(&instance));
        let full = engine.full();
        let tree = engine.sldim_witness(&full)?;
        Self::new(&instance, tree)
    }

    pub fn depth(&self) -> usize {
        self.tree.depth()
    }
}

impl Adversary for SlTreeAdversary {
    fn name(&self) -> &'static str {
        "tree"
    }

    fn next_instance(&mut self) -> Result<Option<usize>> {
        Ok(match self.tree.descend(&self.path) {
            WitnessTree::Node { instance, .. } => Some(*instance),
            WitnessTree::Leaf { .. } => None,
        })
    }

    fn reveal(&mut self, prediction: &Prediction) -> Result<usize> {
        let y = prediction.representative();
        match self.tree.descend(&self.path) {
            WitnessTree::Node { edges, .. } => {
                let set = edges[y].set;
                self.path.push(y);
                Ok(set)
            }
            WitnessTree::Leaf { .. } => {
                Err(Error::Config("tree adversary has no rounds left".into()))
            }
        }
    }

    fn keeps_realizable(&self) -> bool {
        true
    }

    fn designated_comparator(&self) -> Option<usize> {
        match self.tree.descend(&self.path) {
            WitnessTree::Leaf { hypothesis } => Some(*hypothesis),
            WitnessTree::Node { .. } => None,
        }
    }
}
