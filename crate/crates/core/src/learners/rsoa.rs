use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{check_indices, Inconsistency, Learner, Prediction, Tracker};
use crate::bitset::BitSet;
use crate::dims::{Dimension, DimsEngine, VersionSpace};
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::model::ProblemInstance;
use crate::{Distribution, Rational};

/// Randomized min-max learner at a fixed scale.
pub struct Rsoa {
    engine: DimsEngine,
    tracker: Tracker,
    epsilon: Rational,
    cache: HashMap<(VersionSpace, usize), Distribution>,
}

impl Rsoa {
    pub fn new(instance: Arc<ProblemInstance>, epsilon: Rational) -> Result<Self> {
        Self::with_policy(instance, epsilon, Inconsistency::Strict)
    }

    pub fn with_policy(
        instance: Arc<ProblemInstance>,
        epsilon: Rational,
        policy: Inconsistency,
    ) -> Result<Self> {
        check_scale(&epsilon)?;
        let engine = DimsEngine::new(instance);
        let tracker = Tracker::new(&engine, policy);
        Ok(Rsoa {
            engine,
            tracker,
            epsilon,
            cache: HashMap::new(),
        })
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn engine(&mut self) -> &mut DimsEngine {
        &mut self.engine
    }

    /// The measure for `x` under the current version space.
    pub fn measure(&mut self, x: usize) -> Result<Distribution> {
        check_indices(self.engine.instance(), x, None)?;
        self.tracker.ensure_consistent()?;
        let key = (self.tracker.v.clone(), x);
        if let Some(mu) = self.cache.get(&key) {
            return Ok(mu.clone());
        }
        let mu = rsoa_measure(&mut self.engine, &self.tracker.v, x, &self.epsilon);
        self.cache.insert(key, mu.clone());
        Ok(mu)
    }
}

pub(crate) fn check_scale(epsilon: &Rational) -> Result<()> {
    if *epsilon <= Rational::zero() || *epsilon > Rational::one() {
        return Err(Error::range(
            "epsilon",
            format!("scale must lie in (0, 1], got {epsilon}"),
        ));
    }
    Ok(())
}

/// The fixed-scale randomized prediction for a nonempty `v` at `x`.
///
/// Live sets `A` (those with `V(x, A)` nonempty) carry the continuation
/// `MS_eps(V(x, A))`. For `l = 0, 1, ...` let `A_l` be the live sets with
/// continuation at least `l`. The smallest `l` for which the covering game on
/// `A_l` has value above `1 - eps` is selected and that game's optimal measure
/// returned: every set the measure leaves at most `1 - eps` mass on then has
/// continuation below `l`. An empty `A_l` puts no constraint on the measure
/// and the optimum of `A_{l-1}` is kept. At `l = 0` this is the escape measure
/// used when the dimension is zero.
pub fn rsoa_measure(
    engine: &mut DimsEngine,
    v: &VersionSpace,
    x: usize,
    epsilon: &Rational,
) -> Distribution {
    let m = engine.instance().label_count();
    let kind = Dimension::MeasureShattering(epsilon.clone());
    let branches = engine.branches(v, x, &kind);
    if branches.is_empty() {
        let y = engine
            .instance()
            .output(v.first().expect("nonempty version space"), x);
        return Measure::point(m, y);
    }
    let threshold = Rational::one() - epsilon;
    let n = engine.instance().set_count();
    let mut previous: Option<BitSet> = None;
    for level in 0.. {
        let collection = BitSet::from_members(
            n,
            branches.iter().filter(|b| b.value >= level).map(|b| b.set),
        );
        if collection.is_empty() {
            let last = previous.expect("level zero holds every live set");
            return engine.game_solution(&last).strategy;
        }
        if engine.game_value(&collection) > threshold {
            return engine.game_solution(&collection).strategy;
        }
        previous = Some(collection);
    }
    unreachable!()
}

impl Learner for Rsoa {
    fn name(&self) -> &'static str {
        "rsoa"
    }

    fn predict(&mut self, x: usize) -> Result<Prediction> {
        Ok(Prediction::Distribution(self.measure(x)?))
    }

    fn update(&mut self, x: usize, set: usize) -> Result<()> {
        self.tracker.advance(&self.engine, x, set)
    }

    fn version_space(&self) -> Option<&VersionSpace> {
        Some(&self.tracker.v)
    }

    fn round(&self) -> usize {
        self.tracker.round
    }
}
