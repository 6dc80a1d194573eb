use std::sync::Arc;

use num_traits::One;

use super::Adversary;
use crate::bitset::BitSet;
use crate::dims::{Branch, Dimension, DimsEngine, VersionSpace};
use crate::error::{Error, Result};
use crate::learners::Prediction;
use crate::model::ProblemInstance;
use crate::Rational;

/// Adaptive measure-shattering adversary at scale `gamma`.
///
/// Each round it fixes the smallest instance whose high-continuation sets the
/// learner cannot cover, then answers the learner's measure with a set of mass
/// at most `1 - gamma`, choosing the largest continuation (smallest index on
/// ties). The stream stops once the dimension of the version space is zero.
pub struct MsAdaptiveAdversary {
    engine: DimsEngine,
    kind: Dimension,
    threshold: Rational,
    v: VersionSpace,
    round: Option<(usize, Vec<Branch>)>,
}

impl MsAdaptiveAdversary {
    pub fn new(instance: Arc<ProblemInstance>, gamma: Rational) -> Result<Self> {
        let kind = Dimension::MeasureShattering(gamma.clone());
        kind.validate()?;
        let engine = DimsEngine::new(instance);
        let v = engine.full();
        Ok(MsAdaptiveAdversary {
            engine,
            kind,
            threshold: Rational::one() - gamma,
            v,
            round: None,
        })
    }

    pub fn version_space(&self) -> &VersionSpace {
        &self.v
    }
}

impl Adversary for MsAdaptiveAdversary {
    fn name(&self) -> &'static str {
        "ms"
    }

    fn next_instance(&mut self) -> Result<Option<usize>> {
        let level = self.engine.dim(&self.v, &self.kind);
        if level <= 0 {
            self.round = None;
            return Ok(None);
        }
        let n = self.engine.instance().set_count();
        for x in 0..self.engine.instance().instance_count() {
            let branches = self.engine.branches(&self.v, x, &self.kind);
            let collection = BitSet::from_members(
                n,
                branches
                    .iter()
                    .filter(|b| b.value >= level - 1)
                    .map(|b| b.set),
            );
            if self.engine.shatters(&self.kind, &collection) {
                self.round = Some((x, branches));
                return Ok(Some(x));
            }
        }
        Err(Error::Config(
            "no instance realizes the current dimension".into(),
        ))
    }

    fn reveal(&mut self, prediction: &Prediction) -> Result<usize> {
        let (_, branches) = self
            .round
            .take()
            .ok_or_else(|| Error::Config("reveal called before next_instance".into()))?;
        let mu = prediction.to_distribution(self.engine.instance().label_count());
        let mut pick: Option<&Branch> = None;
        for b in &branches {
            if mu.mass(self.engine.instance().set(b.set)) <= self.threshold
                && pick.is_none_or(|p| b.value > p.value)
            {
                pick = Some(b);
            }
        }
        let b = pick.ok_or_else(|| {
            Error::Config("the learner's measure covers every live set above 1 - gamma".into())
        })?;
        self.v = b.version.clone();
        Ok(b.set)
    }

    fn keeps_realizable(&self) -> bool {
        true
    }
}
