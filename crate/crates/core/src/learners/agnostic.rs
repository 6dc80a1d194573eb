use std::collections::HashMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::rsoa::{check_scale, rsoa_measure};
use super::{check_indices, Learner, Prediction};
use crate::dims::{binomial, DimsEngine, VersionSpace};
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::model::ProblemInstance;
use crate::scalar::{from_f64, to_f64};
use crate::{Distribution, Rational};

const MAX_EXPERTS: u128 = 10_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AgnosticMode {
    /// Emit the weight mixture of the experts; weights move by expected losses.
    #[default]
    Exact,
    /// Emit one expert drawn by weight; weights move by sampled 0-1 losses.
    Sample,
}

/// `sum_{i <= d} C(T, i)`, saturating.
pub fn expert_count(horizon: usize, d: usize) -> u128 {
    (0..=d.min(horizon)).fold(0u128, |acc, i| acc.saturating_add(binomial(horizon, i)))
}

struct Expert {
    /// Rounds (0-based) on which this expert's copy of the fixed-scale learner updates.
    rounds: Vec<usize>,
    v: VersionSpace,
    log_weight: f64,
}

/// Exponential weights over copies of the fixed-scale randomized learner,
/// one copy per set of at most `MS_eps(H)` update rounds.
pub struct AgnosticLearner {
    engine: DimsEngine,
    epsilon: Rational,
    horizon: usize,
    dimension: usize,
    mode: AgnosticMode,
    eta: f64,
    experts: Vec<Expert>,
    rng: ChaCha8Rng,
    round: usize,
    current: Vec<Distribution>,
}

impl AgnosticLearner {
    pub fn new(
        instance: Arc<ProblemInstance>,
        epsilon: Rational,
        horizon: usize,
        mode: AgnosticMode,
        seed: u64,
    ) -> Result<Self> {
        check_scale(&epsilon)?;
        if horizon == 0 {
            return Err(Error::range("T", "horizon must be positive"));
        }
        let mut engine = DimsEngine::new(instance);
        let full = engine.full();
        let dimension = engine.msdim(&full, &epsilon)? as usize;
        let count = expert_count(horizon, dimension);
        if count > MAX_EXPERTS {
            return Err(Error::Guard(format!(
                "{count} experts for T = {horizon}, d = {dimension} exceeds 10^4"
            )));
        }
        let mut experts = Vec::with_capacity(count as usize);
        let mut subset = Vec::new();
        enumerate_subsets(horizon, dimension, 0, &mut subset, &mut |rounds| {
            experts.push(Expert {
                rounds: rounds.to_vec(),
                v: full.clone(),
                log_weight: 0.0,
            })
        });
        let eta = (2.0 * (experts.len() as f64).ln() / horizon as f64).sqrt();
        Ok(AgnosticLearner {
            engine,
            epsilon,
            horizon,
            dimension,
            mode,
            eta,
            experts,
            rng: ChaCha8Rng::seed_from_u64(seed),
            round: 0,
            current: Vec::new(),
        })
    }

    pub fn expert_len(&self) -> usize {
        self.experts.len()
    }

    /// `MS_eps(H)`, the largest update-set size.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn learning_rate(&self) -> f64 {
        self.eta
    }

    /// Exact normalized weights (from the floating-point exponentials).
    pub fn weights(&self) -> Vec<Rational> {
        let top = self
            .experts
            .iter()
            .map(|e| e.log_weight)
            .fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<Rational> = self
            .experts
            .iter()
            .map(|e| from_f64((e.log_weight - top).exp()))
            .collect();
        let total = raw
            .iter()
            .fold(Rational::from_integer(0.into()), |acc, w| acc + w);
        raw.into_iter().map(|w| w / &total).collect()
    }

    fn expert_measures(&mut self, x: usize) -> Result<Vec<Distribution>> {
        let mut shared: HashMap<VersionSpace, Distribution> = HashMap::new();
        let mut out = Vec::with_capacity(self.experts.len());
        for e in &self.experts {
            if let Some(mu) = shared.get(&e.v) {
                out.push(mu.clone());
                continue;
            }
            let mu = rsoa_measure(&mut self.engine, &e.v, x, &self.epsilon);
            shared.insert(e.v.clone(), mu.clone());
            out.push(mu);
        }
        Ok(out)
    }
}

fn enumerate_subsets(
    horizon: usize,
    max_len: usize,
    start: usize,
    prefix: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    emit(prefix);
    if prefix.len() == max_len {
        return;
    }
    for t in start..horizon {
        prefix.push(t);
        enumerate_subsets(horizon, max_len, t + 1, prefix, emit);
        prefix.pop();
    }
}

impl Learner for AgnosticLearner {
    fn name(&self) -> &'static str {
        "agnostic"
    }

    fn predict(&mut self, x: usize) -> Result<Prediction> {
        check_indices(self.engine.instance(), x, None)?;
        if self.round >= self.horizon {
            return Err(Error::Config(format!("horizon {} exhausted", self.horizon)));
        }
        self.current = self.expert_measures(x)?;
        let weights = self.weights();
        let mu = match self.mode {
            AgnosticMode::Exact => {
                let refs: Vec<&Distribution> = self.current.iter().collect();
                Measure::mixture(&weights, &refs)
            }
            AgnosticMode::Sample => {
                let choice = Measure::from_weights(weights).sample(&mut self.rng);
                self.current[choice].clone()
            }
        };
        Ok(Prediction::Distribution(mu))
    }

    fn update(&mut self, x: usize, set: usize) -> Result<()> {
        check_indices(self.engine.instance(), x, Some(set))?;
        if self.current.len() != self.experts.len() {
            self.current = self.expert_measures(x)?;
        }
        let revealed = self.engine.instance().set(set).clone();
        let t = self.round;
        for (e, mu) in self.experts.iter_mut().zip(&self.current) {
            let loss = match self.mode {
                AgnosticMode::Exact => to_f64(&mu.miss_mass(&revealed)),
                AgnosticMode::Sample => {
                    if revealed.contains(mu.sample(&mut self.rng)) {
                        0.0
                    } else {
                        1.0
                    }
                }
            };
            e.log_weight -= self.eta * loss;
            if e.rounds.binary_search(&t).is_ok() {
                let next = self.engine.restrict(&e.v, x, set);
                e.v = if !next.is_empty() {
                    next
                } else {
                    let fresh = self.engine.restrict(&self.engine.full(), x, set);
                    if fresh.is_empty() {
                        self.engine.full()
                    } else {
                        fresh
                    }
                };
            }
        }
        self.current.clear();
        self.round += 1;
        Ok(())
    }

    fn round(&self) -> usize {
        self.round
    }
}
