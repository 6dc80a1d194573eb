//! Stream sources: lower-bound constructions and utility streams.
//!
//! An adversary names the instance of each round before the learner
//! predicts, then sees the learner's prediction and reveals a feedback set.
//! Adaptive adversaries react to the emitted prediction, never to a sample
//! drawn from it.

mod khinchine;
mod ms;
mod oblivious;
mod separation;
mod tree;

pub use khinchine::{block_sign, KhinchineAdversary};
pub use ms::MsAdaptiveAdversary;
pub use oblivious::{IidAdversary, ScriptedAdversary};
pub use separation::SeparationAdversary;
pub use tree::SlTreeAdversary;

use std::sync::Arc;

use crate::error::Result;
use crate::learners::Prediction;
use crate::model::{LabeledStream, ProblemInstance};
use crate::Rational;

pub trait Adversary: Send {
    fn name(&self) -> &'static str;

    /// Instance of the next round, or `None` once the stream has ended.
    fn next_instance(&mut self) -> Result<Option<usize>>;

    /// Feedback set for the current round, given the learner's prediction.
    fn reveal(&mut self, prediction: &Prediction) -> Result<usize>;

    /// Whether every emitted prefix must stay realizable.
    fn keeps_realizable(&self) -> bool;

    /// Hypothesis the construction singles out as the comparator, if any.
    fn designated_comparator(&self) -> Option<usize> {
        None
    }
}

/// Adversary selection, as accepted by the harness and the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum AdversarySpec {
    Tree,
    Ms { gamma: Rational },
    Khinchine { k: usize },
    Separation,
    Scripted(LabeledStream),
    Iid,
}

impl AdversarySpec {
    /// Builds the adversary; `seed` drives the randomized kinds.
    pub fn build(&self, instance: Arc<ProblemInstance>, seed: u64) -> Result<Box<dyn Adversary>> {
        Ok(match self {
            AdversarySpec::Tree => Box::new(SlTreeAdversary::for_instance(instance)?),
            AdversarySpec::Ms { gamma } => {
                Box::new(MsAdaptiveAdversary::new(instance, gamma.clone())?)
            }
            AdversarySpec::Khinchine { k } => {
                Box::new(KhinchineAdversary::for_instance(instance, *k, seed)?)
            }
            AdversarySpec::Separation => Box::new(SeparationAdversary::new(instance)?),
            AdversarySpec::Scripted(stream) => {
                Box::new(ScriptedAdversary::new(&instance, stream.clone())?)
            }
            AdversarySpec::Iid => Box::new(IidAdversary::uniform(&instance, seed)),
        })
    }
}
