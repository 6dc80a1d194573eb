use num_traits::Zero;

use super::{Learner, Prediction};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::model::ProblemInstance;
use crate::Distribution;

/// Uniform over all labels, every round.
pub struct UniformLearner {
    label_count: usize,
    round: usize,
}

impl UniformLearner {
    pub fn new(label_count: usize) -> Self {
        UniformLearner {
            label_count,
            round: 0,
        }
    }
}

impl Learner for UniformLearner {
    fn name(&self) -> &'static str {
        "uniform"
    }

    fn predict(&mut self, _x: usize) -> Result<Prediction> {
        Ok(Prediction::Distribution(Measure::uniform(self.label_count)))
    }

    fn update(&mut self, _x: usize, _set: usize) -> Result<()> {
        self.round += 1;
        Ok(())
    }

    fn round(&self) -> usize {
        self.round
    }
}

/// Always the same label.
pub struct ConstantLearner {
    label: usize,
    round: usize,
}

impl ConstantLearner {
    pub fn new(instance: &ProblemInstance, label: usize) -> Result<Self> {
        if label >= instance.label_count() {
            return Err(Error::range("label", format!("label {label} out of range")));
        }
        Ok(ConstantLearner { label, round: 0 })
    }
}

impl Learner for ConstantLearner {
    fn name(&self) -> &'static str {
        "constant"
    }

    fn predict(&mut self, _x: usize) -> Result<Prediction> {
        Ok(Prediction::Label(self.label))
    }

    fn update(&mut self, _x: usize, _set: usize) -> Result<()> {
        self.round += 1;
        Ok(())
    }

    fn round(&self) -> usize {
        self.round
    }
}

/// Uniform on `{3, 4, 5}`, intersected with the previous round's set after the first round.
pub struct Example3Learner {
    core: BitSet,
    previous: Option<BitSet>,
    sets: Vec<BitSet>,
    instance_count: usize,
    round: usize,
}

impl Example3Learner {
    pub fn new(instance: &ProblemInstance) -> Result<Self> {
        let reference = crate::model::example3();
        if instance.label_count() != 6 || instance.sets() != reference.sets() {
            return Err(Error::Config(
                "example3 learner needs labels 0..6 with sets {0,3,4}, {1,4,5}, {2,3,5}".into(),
            ));
        }
        Ok(Example3Learner {
            core: BitSet::from_members(6, [3, 4, 5]),
            previous: None,
            sets: instance.sets().to_vec(),
            instance_count: instance.instance_count(),
            round: 0,
        })
    }

    pub fn support(&self) -> BitSet {
        match &self.previous {
            None => self.core.clone(),
            Some(s) => self.core.intersection(s),
        }
    }
}

impl Learner for Example3Learner {
    fn name(&self) -> &'static str {
        "example3"
    }

    fn predict(&mut self, _x: usize) -> Result<Prediction> {
        let support = self.support();
        let mu: Distribution = if support.is_empty() {
            Measure::uniform_on(&self.core)
        } else {
            Measure::uniform_on(&support)
        };
        debug_assert!(!mu.total().is_zero());
        Ok(Prediction::Distribution(mu))
    }

    fn update(&mut self, x: usize, set: usize) -> Result<()> {
        if x >= self.instance_count {
            return Err(Error::range(
                "instance",
                format!("instance index {x} out of range"),
            ));
        }
        let s = self
            .sets
            .get(set)
            .ok_or_else(|| Error::range("set", format!("set index {set} out of range")))?;
        self.previous = Some(s.clone());
        self.round += 1;
        Ok(())
    }

    fn round(&self) -> usize {
        self.round
    }
}
