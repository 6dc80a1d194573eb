use std::sync::Arc;

use num_traits::Signed;

use super::rsoa::rsoa_measure;
use super::{check_indices, Inconsistency, Learner, Prediction, Tracker};
use crate::bitset::BitSet;
use crate::dims::{DimsEngine, VersionSpace};
use crate::error::{Error, Result};
use crate::model::ProblemInstance;
use crate::scalar::dyadic;
use crate::{Distribution, Rational};

/// `gamma_i = 2^-i`.
pub fn scale(i: usize) -> Rational {
    dyadic(i as u32)
}

/// Measure selection over `measures[0..N]` (scales `gamma_1..gamma_N`), 1-based.
///
/// Returns the smallest `m` in `1..N` such that consecutive measures stay
/// within `2 gamma_{i-1}` on every valid complement for `2 <= i <= m` while
/// `mu_m` and `mu_{m+1}` differ by at least `2 gamma_m` on every valid
/// complement; `N` when there is none.
pub fn msp(measures: &[Distribution], valid_sets: &[BitSet]) -> usize {
    let n = measures.len();
    let gap = |i: usize, a: &BitSet| -> Rational {
        // |mu_i(A^c) - mu_{i-1}(A^c)| with 1-based i
        (measures[i - 1].miss_mass(a) - measures[i - 2].miss_mass(a)).abs()
    };
    let two = Rational::from_integer(2.into());
    for m in 1..n {
        if m >= 2
            && valid_sets
                .iter()
                .any(|a| gap(m, a) > two.clone() * scale(m - 1))
        {
            break;
        }
        if !valid_sets.is_empty()
            && valid_sets
                .iter()
                .all(|a| gap(m + 1, a) >= two.clone() * scale(m))
        {
            return m;
        }
    }
    n
}

/// Multi-scale learner with scales `2^-1, ..., 2^-N`.
pub struct Msol {
    engine: DimsEngine,
    tracker: Tracker,
    scales: usize,
    last_choice: Option<usize>,
}

impl Msol {
    pub fn new(instance: Arc<ProblemInstance>, scales: usize) -> Result<Self> {
        Self::with_policy(instance, scales, Inconsistency::Strict)
    }

    pub fn with_policy(
        instance: Arc<ProblemInstance>,
        scales: usize,
        policy: Inconsistency,
    ) -> Result<Self> {
        if scales == 0 || scales > 62 {
            return Err(Error::range(
                "N",
                format!("scale count must lie in 1..=62, got {scales}"),
            ));
        }
        let engine = DimsEngine::new(instance);
        let tracker = Tracker::new(&engine, policy);
        Ok(Msol {
            engine,
            tracker,
            scales,
            last_choice: None,
        })
    }

    pub fn scales(&self) -> usize {
        self.scales
    }

    /// Index chosen by measure selection on the last prediction; `None` when
    /// the finest scale had dimension zero.
    pub fn last_choice(&self) -> Option<usize> {
        self.last_choice
    }

    pub fn measure(&mut self, x: usize) -> Result<Distribution> {
        check_indices(self.engine.instance(), x, None)?;
        self.tracker.ensure_consistent()?;
        let v = self.tracker.v.clone();
        let finest = scale(self.scales);
        if self.engine.msdim(&v, &finest)? == 0 {
            self.last_choice = None;
            return Ok(rsoa_measure(&mut self.engine, &v, x, &finest));
        }
        let measures: Vec<Distribution> = (1..=self.scales)
            .map(|i| rsoa_measure(&mut self.engine, &v, x, &scale(i)))
            .collect();
        let live = self.engine.live_sets(&v, x);
        let valid: Vec<BitSet> = live
            .iter()
            .map(|a| self.engine.instance().set(a).clone())
            .collect();
        let m = msp(&measures, &valid);
        self.last_choice = Some(m);
        Ok(measures[m - 1].clone())
    }
}

impl Learner for Msol {
    fn name(&self) -> &'static str {
        "msol"
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
