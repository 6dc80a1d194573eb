use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{run_game, Mode};
use crate::adversaries::AdversarySpec;
use crate::error::Result;
use crate::learners::{Inconsistency, LearnerSpec};
use crate::model::ProblemInstance;
use crate::scalar::to_f64;

/// One (learner, adversary) pairing to repeat.
#[derive(Clone, Debug)]
pub struct GameConfig {
    pub instance: Arc<ProblemInstance>,
    pub learner: LearnerSpec,
    pub adversary: AdversarySpec,
    pub rounds: usize,
    pub mode: Mode,
    pub policy: Inconsistency,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub mean_regret: f64,
    /// Sample standard deviation over `sqrt(trials)`; zero for one trial.
    pub standard_error: f64,
    pub mean_loss: f64,
    pub seed_base: u64,
}

/// Runs independent games with seeds `seed_base + i`, in parallel.
///
/// Each trial builds its own learner, adversary and generator, so the result
/// does not depend on scheduling.
pub fn monte_carlo(config: &GameConfig, trials: usize, seed_base: u64) -> Result<TrialSummary> {
    assert!(trials >= 1, "at least one trial");
    let outcomes: Vec<Result<(f64, f64)>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let seed = seed_base.wrapping_add(i as u64);
            let learner_spec = match &config.learner {
                LearnerSpec::Agnostic {
                    epsilon,
                    horizon,
                    mode,
                    ..
                } => LearnerSpec::Agnostic {
                    epsilon: epsilon.clone(),
                    horizon: *horizon,
                    mode: *mode,
                    seed,
                },
                other => other.clone(),
            };
            let mut learner = learner_spec.build(Arc::clone(&config.instance), config.policy)?;
            let mut adversary = config.adversary.build(Arc::clone(&config.instance), seed)?;
            let t = run_game(
                &config.instance,
                learner.as_mut(),
                adversary.as_mut(),
                config.rounds,
                config.mode,
                seed,
            )?;
            let loss = match config.mode {
                Mode::Exact => to_f64(&t.cumulative_expected()),
                Mode::Sample => t.sampled_mistakes().unwrap_or(0) as f64,
            };
            Ok((to_f64(&t.regret()), loss))
        })
        .collect();
    let mut regrets = Vec::with_capacity(trials);
    let mut losses = Vec::with_capacity(trials);
    for o in outcomes {
        let (r, l) = o?;
        regrets.push(r);
        losses.push(l);
    }
    let n = trials as f64;
    let mean = regrets.iter().sum::<f64>() / n;
    let se = if trials > 1 {
        let var = regrets.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(TrialSummary {
        trials,
        mean_regret: mean,
        standard_error: se,
        mean_loss: losses.iter().sum::<f64>() / n,
        seed_base,
    })
}
