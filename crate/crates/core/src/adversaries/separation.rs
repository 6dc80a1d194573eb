use std::sync::Arc;

use super::Adversary;
use crate::bitset::BitSet;
use crate::dims::VersionSpace;
use crate::error::{Error, Result};
use crate::learners::Prediction;
use crate::model::ProblemInstance;

/// Reveals the complement of the learner's label while that keeps some
/// hypothesis consistent; afterwards reveals a complement that spares the
/// label. Distribution predictions are read through their mode.
pub struct SeparationAdversary {
    instance: Arc<ProblemInstance>,
    complement_of: Vec<usize>,
    v: VersionSpace,
}

impl SeparationAdversary {
    /// `instance` must carry the complements of all singletons.
    pub fn new(instance: Arc<ProblemInstance>) -> Result<Self> {
        let m = instance.label_count();
        let mut complement_of = Vec::with_capacity(m);
        for y in 0..m {
            let mut s = BitSet::full(m);
            s.remove(y);
            match instance.set_system().index_of(&s) {
                Some(i) => complement_of.push(i),
                None => {
                    return Err(Error::Config(format!(
                        "separation adversary needs the complement of label {y} as a feedback set"
                    )))
                }
            }
        }
        let v = VersionSpace::full(&instance);
        Ok(SeparationAdversary {
            instance,
            complement_of,
            v,
        })
    }

    pub fn version_space(&self) -> &VersionSpace {
        &self.v
    }
}

impl Adversary for SeparationAdversary {
    fn name(&self) -> &'static str {
        "separation"
    }

    fn next_instance(&mut self) -> Result<Option<usize>> {
        Ok(Some(0))
    }

    fn reveal(&mut self, prediction: &Prediction) -> Result<usize> {
        let y = prediction.representative();
        let m = self.instance.label_count();
        let forcing = self.complement_of[y];
        let w = self
            .v
            .restrict(&self.instance, 0, self.instance.set(forcing));
        let set = if !w.is_empty() {
            forcing
        } else {
            let z = (0..m).find(|&z| z != y).unwrap_or(y);
            self.complement_of[z]
        };
        self.v = self.v.restrict(&self.instance, 0, self.instance.set(set));
        Ok(set)
    }

    fn keeps_realizable(&self) -> bool {
        true
    }
}
