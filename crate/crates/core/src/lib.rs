//! Exact laboratory for online multiclass learning with set-valued feedback.
//!
//! The crate works over finite label spaces. A learning problem is a
//! [`ProblemInstance`]: labels `0..m`, a family of feedback sets, a list of
//! instances and a finite table of hypotheses. On top of that sit
//!
//! * [`dims`]: Helly numbers and the Littlestone-style dimensions (Ldim,
//!   Set Littlestone, p-Set Littlestone, Measure Shattering), computed by
//!   memoized version-space recursion and exact matrix-game solving;
//! * [`learners`]: the deterministic and randomized optimal learners, the
//!   multi-scale learner, the agnostic expert learner and simple baselines;
//! * [`adversaries`]: lower-bound stream constructions and utility streams;
//! * [`harness`]: the game loop, exact and sampled loss accounting, and the
//!   verification suites.
//!
//! Numerical core routines ([`lp`], [`game`], [`measure`]) are generic over a
//! [`Scalar`]; everything that takes decisions at threshold boundaries uses the
//! exact [`Rational`] instantiation.

pub mod adversaries;
pub mod bitset;
pub mod dims;
pub mod error;
pub mod game;
pub mod harness;
pub mod learners;
pub mod lp;
pub mod measure;
pub mod model;
pub mod scalar;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use measure::Measure;
pub use model::{LabeledStream, ProblemInstance, SetSystem};
pub use scalar::Scalar;

/// Exact arbitrary-precision rational, the scalar used for every decision.
pub type Rational = num_rational::BigRational;

/// Probability distribution over labels with exact rational weights.
pub type Distribution = Measure<Rational>;

/// Floating-point distribution, used for display and sampling only.
pub type FloatDistribution = Measure<f64>;

/// Matrix-game solution over exact rationals.
pub type ExactGameSolution = game::GameSolution<Rational>;
