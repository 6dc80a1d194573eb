use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::dims::{DimsEngine, VersionSpace};
use crate::error::{Error, Result};
use crate::learners::{scale, Msol, Rsoa};
use crate::model::{validate_realizable, LabeledStream, ProblemInstance};
use crate::scalar::format_rational;
use crate::Rational;

fn require_realizable(instance: &ProblemInstance, stream: &LabeledStream) -> Result<()> {
    instance.check_stream(stream)?;
    if validate_realizable(instance, stream).is_none() {
        return Err(Error::NotRealizable(
            "no hypothesis fits the whole stream".into(),
        ));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Eq1Report {
    /// Rounds (1-based) whose measure left at least `epsilon` mass outside the revealed set.
    pub flagged: Vec<usize>,
    /// `MS_eps(H)`.
    pub bound: i64,
    /// Sum of `mu_t(S_t^c)`.
    pub expected_loss: String,
    /// `eps T + MS_eps(H)`.
    pub loss_bound: String,
    pub passed: bool,
    pub loss_within_bound: bool,
}

impl Eq1Report {
    pub fn count(&self) -> usize {
        self.flagged.len()
    }
}

/// Runs the fixed-scale learner exactly on a realizable stream and counts the
/// rounds with `mu_t(S_t^c) >= eps`; the count must not exceed `MS_eps(H)`.
pub fn eq1_check(
    instance: &Arc<ProblemInstance>,
    epsilon: &Rational,
    stream: &LabeledStream,
) -> Result<Eq1Report> {
    require_realizable(instance, stream)?;
    let mut learner = Rsoa::new(Arc::clone(instance), epsilon.clone())?;
    let full = learner.engine().full();
    let bound = learner.engine().msdim(&full, epsilon)?;
    let mut flagged = Vec::new();
    let mut total = Rational::zero();
    for (t, &(x, s)) in stream.rounds().iter().enumerate() {
        let mu = learner.measure(x)?;
        let loss = mu.miss_mass(instance.set(s));
        if loss >= *epsilon {
            flagged.push(t + 1);
        }
        total += loss;
        crate::learners::Learner::update(&mut learner, x, s)?;
    }
    let loss_bound = epsilon * Rational::from_integer(stream.len().into())
        + Rational::from_integer(bound.into());
    Ok(Eq1Report {
        passed: flagged.len() as i64 <= bound,
        loss_within_bound: total <= loss_bound,
        flagged,
        bound,
        expected_loss: format_rational(&total),
        loss_bound: format_rational(&loss_bound),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PotentialRound {
    pub round: usize,
    pub phi: String,
    pub phi_next: String,
    pub loss: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PotentialReport {
    pub scales: usize,
    pub rounds: Vec<PotentialRound>,
    pub cumulative_loss: String,
    /// `gamma_N T + 16 sum_i gamma_i MS_{gamma_i}(H)`.
    pub cumulative_bound: String,
    pub passed: bool,
}

/// Runs the multi-scale learner exactly on a realizable stream and checks
/// `Phi_t - Phi_{t+1} >= mu_t(S_t^c)` each round, where
/// `Phi_t = (T + 1 - t) gamma_N + 16 sum_i gamma_i MS_{gamma_i}(V_{t-1})`.
pub fn potential_check(
    instance: &Arc<ProblemInstance>,
    scales: usize,
    stream: &LabeledStream,
) -> Result<PotentialReport> {
    require_realizable(instance, stream)?;
    let mut learner = Msol::new(Arc::clone(instance), scales)?;
    let mut engine = DimsEngine::new(Arc::clone(instance));
    let gammas: Vec<Rational> = (1..=scales).map(scale).collect();
    let finest = gammas[scales - 1].clone();
    let horizon = stream.len();
    let sixteen = Rational::from_integer(16.into());

    let potential = |engine: &mut DimsEngine, v: &VersionSpace, t: usize| -> Result<Rational> {
        let mut phi = Rational::from_integer((horizon + 1 - t).into()) * &finest;
        for g in &gammas {
            phi += &sixteen * g * Rational::from_integer(engine.msdim(v, g)?.into());
        }
        Ok(phi)
    };

    let mut v = engine.full();
    let cumulative_bound = potential(&mut engine, &v, 1)?;
    let mut rounds = Vec::with_capacity(horizon);
    let mut total = Rational::zero();
    for (i, &(x, s)) in stream.rounds().iter().enumerate() {
        let t = i + 1;
        let phi = potential(&mut engine, &v, t)?;
        let mu = learner.measure(x)?;
        let loss = mu.miss_mass(instance.set(s));
        crate::learners::Learner::update(&mut learner, x, s)?;
        v = engine.restrict(&v, x, s);
        let phi_next = potential(&mut engine, &v, t + 1)?;
        let passed = phi.clone() - &phi_next >= loss;
        total += &loss;
        rounds.push(PotentialRound {
            round: t,
            phi: format_rational(&phi),
            phi_next: format_rational(&phi_next),
            loss: format_rational(&loss),
            passed,
        });
    }
    Ok(PotentialReport {
        scales,
        passed: rounds.iter().all(|r| r.passed) && total <= cumulative_bound,
        rounds,
        cumulative_loss: format_rational(&total),
        cumulative_bound: format_rational(&cumulative_bound),
    })
}

/// Worst-case mistakes of the best deterministic learner over `rounds` rounds
/// against a realizability-constrained adversary, by backward induction.
///
/// Each round the adversary names `x`, the learner answers `y`, and the
/// adversary reveals a set keeping some hypothesis consistent:
/// `value(V, r) = max_x min_y max_S [y not in S] + value(V(x, S), r - 1)`.
pub fn minimax_oracle(instance: &ProblemInstance, rounds: usize) -> Result<usize> {
    minimax_oracle_within(instance, rounds, &MinimaxLimits::TINY)
}

/// Size limits for the exhaustive oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinimaxLimits {
    pub labels: usize,
    pub sets: usize,
    pub instances: usize,
    pub hypotheses: usize,
    pub rounds: usize,
}

impl MinimaxLimits {
    pub const TINY: MinimaxLimits = MinimaxLimits {
        labels: 4,
        sets: 5,
        instances: 2,
        hypotheses: 5,
        rounds: 4,
    };
    pub const SMALL: MinimaxLimits = MinimaxLimits {
        labels: 6,
        sets: 8,
        instances: 3,
        hypotheses: 8,
        rounds: 5,
    };

    pub fn admits(&self, instance: &ProblemInstance, rounds: usize) -> bool {
        instance.label_count() <= self.labels
            && instance.set_count() <= self.sets
            && instance.instance_count() <= self.instances
            && instance.hypothesis_count() <= self.hypotheses
            && rounds <= self.rounds
    }
}

pub fn minimax_oracle_within(
    instance: &ProblemInstance,
    rounds: usize,
    limits: &MinimaxLimits,
) -> Result<usize> {
    if !limits.admits(instance, rounds) {
        return Err(Error::Guard(format!(
            "minimax oracle needs |Y| <= {}, |S| <= {}, |X| <= {}, |H| <= {}, T <= {}",
            limits.labels, limits.sets, limits.instances, limits.hypotheses, limits.rounds
        )));
    }
    let mut memo = HashMap::new();
    Ok(minimax_value(
        instance,
        &VersionSpace::full(instance),
        rounds,
        &mut memo,
    ))
}

fn minimax_value(
    inst: &ProblemInstance,
    v: &VersionSpace,
    rounds: usize,
    memo: &mut HashMap<(VersionSpace, usize), usize>,
) -> usize {
    if rounds == 0 {
        return 0;
    }
    if let Some(&val) = memo.get(&(v.clone(), rounds)) {
        return val;
    }
    let mut best = 0;
    for x in 0..inst.instance_count() {
        let options: Vec<(usize, VersionSpace)> = (0..inst.set_count())
            .map(|s| (s, v.restrict(inst, x, inst.set(s))))
            .filter(|(_, w)| !w.is_empty())
            .collect();
        if options.is_empty() {
            continue;
        }
        let mut continuation = Vec::with_capacity(options.len());
        for (s, w) in &options {
            continuation.push((*s, minimax_value(inst, w, rounds - 1, memo)));
        }
        let value = (0..inst.label_count())
            .map(|y| {
                continuation
                    .iter()
                    .map(|&(s, c)| c + usize::from(!inst.set(s).contains(y)))
                    .max()
                    .unwrap_or(0)
            })
            .min()
            .unwrap_or(0);
        best = best.max(value);
    }
    memo.insert((v.clone(), rounds), best);
    best
}

/// Every stream of length `rounds` over `(instance, set)` pairs.
pub fn all_streams(instance: &ProblemInstance, rounds: usize) -> Vec<LabeledStream> {
    let pairs: Vec<(usize, usize)> = (0..instance.instance_count())
        .flat_map(|x| (0..instance.set_count()).map(move |s| (x, s)))
        .collect();
    let mut out = vec![Vec::new()];
    for _ in 0..rounds {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<(usize, usize)>| {
                pairs.iter().map(move |&p| {
                    let mut next = prefix.clone();
                    next.push(p);
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(LabeledStream::new).collect()
}

/// Every realizable stream of length `rounds`.
pub fn realizable_streams(instance: &ProblemInstance, rounds: usize) -> Vec<LabeledStream> {
    fn extend(
        inst: &ProblemInstance,
        v: &VersionSpace,
        left: usize,
        prefix: &mut Vec<(usize, usize)>,
        out: &mut Vec<LabeledStream>,
    ) {
        if left == 0 {
            out.push(LabeledStream::new(prefix.clone()));
            return;
        }
        for x in 0..inst.instance_count() {
            for s in 0..inst.set_count() {
                let w = v.restrict(inst, x, inst.set(s));
                if w.is_empty() {
                    continue;
                }
                prefix.push((x, s));
                extend(inst, &w, left - 1, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(
        instance,
        &VersionSpace::full(instance),
        rounds,
        &mut Vec::new(),
        &mut out,
    );
    out
}
