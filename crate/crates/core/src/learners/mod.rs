//! Online learners: observe an instance, predict a label or a distribution,
//! then observe the revealed feedback set.

mod agnostic;
mod baselines;
mod msol;
mod rsoa;
mod soa;

pub use agnostic::{expert_count, AgnosticLearner, AgnosticMode};
pub use baselines::{ConstantLearner, Example3Learner, UniformLearner};
pub use msol::{msp, scale, Msol};
pub use rsoa::{rsoa_measure, Rsoa};
pub use soa::{soa_label, Soa};

use std::sync::Arc;

use crate::bitset::BitSet;
use crate::dims::{DimsEngine, VersionSpace};
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::model::ProblemInstance;
use crate::{Distribution, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prediction {
    Label(usize),
    Distribution(Distribution),
}

impl Prediction {
    pub fn to_distribution(&self, label_count: usize) -> Distribution {
        match self {
            Prediction::Label(y) => Measure::point(label_count, *y),
            Prediction::Distribution(mu) => mu.clone(),
        }
    }

    /// `mu(S^c)`; for a label this is the 0-1 loss.
    pub fn expected_loss(&self, set: &BitSet) -> Rational {
        match self {
            Prediction::Label(y) => {
                if set.contains(*y) {
                    Rational::from_integer(0.into())
                } else {
                    Rational::from_integer(1.into())
                }
            }
            Prediction::Distribution(mu) => mu.miss_mass(set),
        }
    }

    /// The label itself, or the distribution's mode.
    pub fn representative(&self) -> usize {
        match self {
            Prediction::Label(y) => *y,
            Prediction::Distribution(mu) => mu.mode(),
        }
    }

    pub fn is_label(&self) -> bool {
        matches!(self, Prediction::Label(_))
    }
}

pub trait Learner: Send {
    fn name(&self) -> &'static str;

    fn predict(&mut self, x: usize) -> Result<Prediction>;

    fn update(&mut self, x: usize, set: usize) -> Result<()>;

    /// Current version space, for learners that keep one.
    fn version_space(&self) -> Option<&VersionSpace> {
        None
    }

    /// Rounds completed so far.
    fn round(&self) -> usize;
}

/// What a version-space learner does when feedback contradicts every hypothesis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Inconsistency {
    /// Report the stream as not realizable.
    #[default]
    Strict,
    /// Restart from the whole class, then apply the feedback if some hypothesis fits it.
    Restart,
}

/// Version space plus round counter shared by the SOA family.
#[derive(Clone, Debug)]
pub(crate) struct Tracker {
    pub v: VersionSpace,
    pub policy: Inconsistency,
    pub round: usize,
}

impl Tracker {
    pub fn new(engine: &DimsEngine, policy: Inconsistency) -> Self {
        Tracker {
            v: engine.full(),
            policy,
            round: 0,
        }
    }

    pub fn ensure_consistent(&self) -> Result<()> {
        if self.v.is_empty() {
            return Err(Error::NotRealizable(format!(
                "no hypothesis left before round {}",
                self.round + 1
            )));
        }
        Ok(())
    }

    pub fn advance(&mut self, engine: &DimsEngine, x: usize, set: usize) -> Result<()> {
        check_indices(engine.instance(), x, Some(set))?;
        let next = engine.restrict(&self.v, x, set);
        self.v = if !next.is_empty() {
            next
        } else {
            match self.policy {
                Inconsistency::Strict => {
                    return Err(Error::NotRealizable(format!(
                        "feedback set {set} at round {} removes every hypothesis",
                        self.round + 1
                    )))
                }
                Inconsistency::Restart => {
                    let fresh = engine.restrict(&engine.full(), x, set);
                    if fresh.is_empty() {
                        engine.full()
                    } else {
                        fresh
                    }
                }
            }
        };
        self.round += 1;
        Ok(())
    }
}

pub(crate) fn check_indices(
    instance: &ProblemInstance,
    x: usize,
    set: Option<usize>,
) -> Result<()> {
    if x >= instance.instance_count() {
        return Err(Error::range(
            "instance",
            format!("instance index {x} out of range"),
        ));
    }
    if let Some(s) = set {
        if s >= instance.set_count() {
            return Err(Error::range("set", format!("set index {s} out of range")));
        }
    }
    Ok(())
}

/// Learner selection, as accepted by the harness and the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum LearnerSpec {
    Soa,
    Rsoa {
        epsilon: Rational,
    },
    Msol {
        scales: usize,
    },
    Agnostic {
        epsilon: Rational,
        horizon: usize,
        mode: AgnosticMode,
        seed: u64,
    },
    Uniform,
    Constant(usize),
    Example3,
}

impl LearnerSpec {
    pub fn build(
        &self,
        instance: Arc<ProblemInstance>,
        policy: Inconsistency,
    ) -> Result<Box<dyn Learner>> {
        Ok(match self {
            LearnerSpec::Soa => Box::new(Soa::with_policy(instance, policy)),
            LearnerSpec::Rsoa { epsilon } => {
                Box::new(Rsoa::with_policy(instance, epsilon.clone(), policy)?)
            }
            LearnerSpec::Msol { scales } => Box::new(Msol::with_policy(instance, *scales, policy)?),
            LearnerSpec::Agnostic {
                epsilon,
                horizon,
                mode,
                seed,
            } => Box::new(AgnosticLearner::new(
                instance,
                epsilon.clone(),
                *horizon,
                *mode,
                *seed,
            )?),
            LearnerSpec::Uniform => Box::new(UniformLearner::new(instance.label_count())),
            LearnerSpec::Constant(y) => Box::new(ConstantLearner::new(&instance, *y)?),
            LearnerSpec::Example3 => Box::new(Example3Learner::new(&instance)?),
        })
    }

    /// Whether every prediction is a single label.
    pub fn is_deterministic(&self) -> bool {
        matches!(self, LearnerSpec::Soa | LearnerSpec::Constant(_))
    }
}
