use std::sync::Arc;

use super::{check_indices, Inconsistency, Learner, Prediction, Tracker};
use crate::bitset::BitSet;
use crate::dims::{Dimension, DimsEngine, VersionSpace};
use crate::error::Result;
use crate::model::ProblemInstance;

/// Deterministic min-max learner over the Set Littlestone dimension.
pub struct Soa {
    engine: DimsEngine,
    tracker: Tracker,
}

impl Soa {
    pub fn new(instance: Arc<ProblemInstance>) -> Self {
        Self::with_policy(instance, Inconsistency::Strict)
    }

    pub fn with_policy(instance: Arc<ProblemInstance>, policy: Inconsistency) -> Self {
        let engine = DimsEngine::new(instance);
        let tracker = Tracker::new(&engine, policy);
        Soa { engine, tracker }
    }

    pub fn engine(&mut self) -> &mut DimsEngine {
        &mut self.engine
    }
}

/// The label the min-max rule predicts for `v` at `x`; `v` must be nonempty.
///
/// With `SL(V) > 0` the label minimizes the worst continuation over sets that
/// exclude it (an empty maximum counts as `-1`). Otherwise every live set has
/// a common label and the smallest one is returned.
pub fn soa_label(engine: &mut DimsEngine, v: &VersionSpace, x: usize) -> usize {
    let m = engine.instance().label_count();
    let n = engine.instance().set_count();
    if engine.sldim(v) > 0 {
        let continuation: Vec<Option<i64>> = (0..n)
            .map(|a| {
                let w = engine.restrict(v, x, a);
                (!w.is_empty()).then(|| engine.dim(&w, &Dimension::SetLittlestone))
            })
            .collect();
        let mut best = (i64::MAX, 0);
        for y in 0..m {
            let worst = (0..n)
                .filter(|&a| !engine.instance().set(a).contains(y))
                .filter_map(|a| continuation[a])
                .max()
                .unwrap_or(-1);
            if worst < best.0 {
                best = (worst, y);
            }
        }
        return best.1;
    }
    let live = engine.live_sets(v, x);
    let meet = BitSet::intersect_all(m, live.iter().map(|a| engine.instance().set(a)));
    meet.first().unwrap_or_else(|| {
        engine
            .instance()
            .output(v.first().expect("nonempty version space"), x)
    })
}

impl Learner for Soa {
    fn name(&self) -> &'static str {
        "soa"
    }

    fn predict(&mut self, x: usize) -> Result<Prediction> {
        check_indices(self.engine.instance(), x, None)?;
        self.tracker.ensure_consistent()?;
        Ok(Prediction::Label(soa_label(
            &mut self.engine,
            &self.tracker.v,
            x,
        )))
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
