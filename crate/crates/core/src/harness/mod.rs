//! Game loop, loss accounting and verification checks.

mod checks;
mod csv;
mod montecarlo;
mod random;
pub mod suites;

pub use self::csv::{read_csv, write_csv, CsvRow, CSV_HEADER};
pub use checks::{
    all_streams, eq1_check, minimax_oracle, minimax_oracle_within, potential_check,
    realizable_streams, Eq1Report, MinimaxLimits, PotentialReport, PotentialRound,
};
pub use montecarlo::{monte_carlo, GameConfig, TrialSummary};
pub use random::{random_instance, random_realizable_stream, RandomInstanceParams};

use std::sync::Arc;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adversaries::Adversary;
use crate::error::{Error, Result};
use crate::learners::{Learner, Prediction};
use crate::model::{validate_realizable, LabeledStream, ProblemInstance};
use crate::Rational;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Propagate the learner's distribution; losses are exact expectations.
    #[default]
    Exact,
    /// Draw the learner's label from its distribution with the seeded generator.
    Sample,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundRecord {
    /// 1-based.
    pub round: usize,
    pub instance: usize,
    pub prediction: Prediction,
    pub set: usize,
    /// Realized 0-1 loss; absent for distribution predictions in exact mode.
    pub sampled_loss: Option<u8>,
    pub expected_loss: Rational,
    pub cum_expected: Rational,
    /// Best hypothesis loss on the prefix ending here.
    pub comparator: usize,
    /// Cumulative loss minus comparator: expected in exact mode, realized in sample mode.
    pub regret: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameTranscript {
    pub mode: Mode,
    pub rounds: Vec<RoundRecord>,
}

impl GameTranscript {
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn stream(&self) -> LabeledStream {
        LabeledStream::new(self.rounds.iter().map(|r| (r.instance, r.set)).collect())
    }

    pub fn cumulative_expected(&self) -> Rational {
        self.rounds
            .last()
            .map_or_else(Rational::zero, |r| r.cum_expected.clone())
    }

    /// Sum of realized losses, when every round has one.
    pub fn sampled_mistakes(&self) -> Option<usize> {
        self.rounds
            .iter()
            .map(|r| r.sampled_loss.map(usize::from))
            .sum()
    }

    pub fn comparator_loss(&self) -> usize {
        self.rounds.last().map_or(0, |r| r.comparator)
    }

    pub fn expected_regret(&self) -> Rational {
        self.cumulative_expected() - Rational::from_integer(self.comparator_loss().into())
    }

    pub fn regret(&self) -> Rational {
        self.rounds
            .last()
            .map_or_else(Rational::zero, |r| r.regret.clone())
    }
}

/// Plays up to `rounds` rounds, or until the adversary stops.
pub fn run_game(
    instance: &Arc<ProblemInstance>,
    learner: &mut dyn Learner,
    adversary: &mut dyn Adversary,
    rounds: usize,
    mode: Mode,
    seed: u64,
) -> Result<GameTranscript> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut hyp_losses = vec![0usize; instance.hypothesis_count()];
    let mut stream = LabeledStream::default();
    let mut cum_expected = Rational::zero();
    let mut cum_sampled = 0usize;
    let mut records = Vec::with_capacity(rounds);
    for t in 1..=rounds {
        let Some(x) = adversary.next_instance()? else {
            break;
        };
        if x >= instance.instance_count() {
            return Err(Error::range(
                "instance",
                format!("adversary emitted instance {x}"),
            ));
        }
        let prediction = learner.predict(x)?;
        let set = adversary.reveal(&prediction)?;
        if set >= instance.set_count() {
            return Err(Error::range("set", format!("adversary emitted set {set}")));
        }
        let revealed = instance.set(set);
        let expected_loss = prediction.expected_loss(revealed);
        let sampled_loss = match (&prediction, mode) {
            (Prediction::Label(y), _) => Some(u8::from(!revealed.contains(*y))),
            (Prediction::Distribution(_), Mode::Exact) => None,
            (Prediction::Distribution(mu), Mode::Sample) => {
                Some(u8::from(!revealed.contains(mu.sample(&mut rng))))
            }
        };
        learner.update(x, set)?;
        stream.push(x, set);
        if adversary.keeps_realizable() && validate_realizable(instance, &stream).is_none() {
            return Err(Error::NotRealizable(format!(
                "{} adversary broke realizability at round {t}",
                adversary.name()
            )));
        }
        for (h, loss) in hyp_losses.iter_mut().enumerate() {
            if !revealed.contains(instance.output(h, x)) {
                *loss += 1;
            }
        }
        let comparator = hyp_losses.iter().copied().min().unwrap_or(0);
        cum_expected += &expected_loss;
        cum_sampled += sampled_loss.map_or(0, usize::from);
        let regret = match mode {
            Mode::Exact => cum_expected.clone(),
            Mode::Sample => Rational::from_integer(cum_sampled.into()),
        } - Rational::from_integer(comparator.into());
        records.push(RoundRecord {
            round: t,
            instance: x,
            prediction,
            set,
            sampled_loss,
            expected_loss,
            cum_expected: cum_expected.clone(),
            comparator,
            regret,
        });
    }
    Ok(GameTranscript {
        mode,
        rounds: records,
    })
}
