//! Verification suites behind `sfl verify`.
//!
//! Each suite returns a report with one line per check; nothing panics on a
//! failed check.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    all_streams, eq1_check, minimax_oracle_within, monte_carlo, potential_check, random_instance,
    random_realizable_stream, realizable_streams, run_game, GameConfig, MinimaxLimits, Mode,
    RandomInstanceParams,
};
use crate::adversaries::{
    AdversarySpec, MsAdaptiveAdversary, ScriptedAdversary, SeparationAdversary, SlTreeAdversary,
};
use crate::dims::{
    check_relations, helly_number, validate_witness, Dimension, DimsEngine, VersionSpace,
};
use crate::error::{Error, Result};
use crate::learners::{
    AgnosticLearner, AgnosticMode, Example3Learner, Inconsistency, Learner, LearnerSpec, Rsoa, Soa,
    UniformLearner,
};
use crate::model::{
    example3, gen_cosingleton_instance, gen_hamming_instance, gen_interval_instance,
    gen_ranking_instance, gen_singleton_instance, HypothesisSpec, ProblemInstance,
};
use crate::scalar::{format_rational, rational, to_f64};
use crate::Rational;

pub const SUITES: [&str; 9] = [
    "structural",
    "helly",
    "bounds",
    "eq1",
    "potential",
    "minimax",
    "khinchine",
    "example3",
    "separation",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: Option<u64>,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    fn new(suite: &str, seed: Option<u64>) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            seed,
            checks: Vec::new(),
        }
    }

    fn check(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        expected: impl Into<String>,
        actual: impl Into<String>,
    ) {
        self.checks.push(CheckOutcome {
            name: name.into(),
            passed,
            expected: expected.into(),
            actual: actual.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let passed = self.checks.iter().filter(|c| c.passed).count();
        write!(
            f,
            "suite {}: {passed}/{} passed",
            self.suite,
            self.checks.len()
        )?;
        if let Some(seed) = self.seed {
            write!(f, " (seed {seed})")?;
        }
        writeln!(f)?;
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "  {tag} {}: expected {}, actual {}",
                c.name, c.expected, c.actual
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub instances: usize,
    pub streams: usize,
    pub trials: usize,
    pub limits: MinimaxLimits,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            instances: 100,
            streams: 1000,
            trials: 10_000,
            limits: MinimaxLimits::TINY,
        }
    }
}

/// Runs one suite by name, or every suite for `"all"`.
pub fn run_suite(name: &str, options: &SuiteOptions) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_one(s, options)).collect();
    }
    Ok(vec![run_one(name, options)?])
}

fn run_one(name: &str, o: &SuiteOptions) -> Result<SuiteReport> {
    match name {
        "structural" => structural(o.instances, o.seed),
        "helly" => Ok(helly()),
        "bounds" => bounds(),
        "eq1" => eq1(),
        "potential" => potential(o.streams, o.seed),
        "minimax" => minimax(&o.limits, o.seed),
        "khinchine" => khinchine(o.trials, o.seed),
        "example3" => example3_suite(),
        "separation" => separation(),
        other => Err(Error::Config(format!(
            "unknown suite {other:?}; expected one of {} or all",
            SUITES.join(", ")
        ))),
    }
}

fn constants(n: usize) -> HypothesisSpec {
    HypothesisSpec::Table((0..n).map(|y| vec![y]).collect())
}

/// Sandwich and collapse on random instances; singleton reduction.
pub fn structural(n: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("structural", Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = RandomInstanceParams::default();
    for i in 0..n {
        let inst = random_instance(&params, &mut rng);
        let mut engine = DimsEngine::from_instance(&inst);
        for p in [2usize, 3] {
            let r = check_relations(&mut engine, p, &rational(1, p as i64))?;
            report.check(
                format!("random {i} p={p}: SL_p <= MS_1/p <= SL"),
                r.sandwich,
                "ordered",
                format!("{} <= {} <= {}", r.psl, r.ms, r.sl),
            );
            if let Some(collapse) = r.collapse {
                report.check(
                    format!("random {i} Helly={p}: all equal"),
                    collapse,
                    "equal",
                    format!("{}, {}, {}", r.psl, r.ms, r.sl),
                );
            }
        }
    }
    let params = RandomInstanceParams {
        labels: (2, 4),
        ..RandomInstanceParams::default()
    };
    for i in 0..20 {
        let inst = random_singleton_instance(&params, &mut rng);
        let mut engine = DimsEngine::from_instance(&inst);
        let v = engine.full();
        let (l, s, m) = (
            engine.ldim(&v),
            engine.sldim(&v),
            engine.msdim(&v, &Rational::zero())?,
        );
        report.check(
            format!("singleton {i}: SL = MS_0 = Ldim"),
            l == s && l == m,
            format!("{l}"),
            format!("SL {s}, MS_0 {m}"),
        );
    }
    Ok(report)
}

/// Random instance over the singleton system of a random label count.
pub fn random_singleton_instance<R: rand::Rng>(
    params: &RandomInstanceParams,
    rng: &mut R,
) -> ProblemInstance {
    let base = random_instance(params, rng);
    gen_singleton_instance(
        base.label_count(),
        &HypothesisSpec::Table(base.hypotheses().rows().to_vec()),
    )
    .expect("labels of a valid instance")
}

pub fn helly() -> SuiteReport {
    let mut report = SuiteReport::new("helly", None);
    let mut exact = |name: String, inst: Result<ProblemInstance>, want: usize| {
        let got = inst.map(|i| helly_number(i.sets()).value);
        let actual = got
            .as_ref()
            .map_or_else(|e| e.to_string(), |v| v.to_string());
        report.check(name, got.ok() == Some(want), want.to_string(), actual);
    };
    exact("example3".into(), Ok(example3()), 3);
    for k in [3, 4] {
        exact(
            format!("ranking K={k}"),
            gen_ranking_instance(k, &HypothesisSpec::default()),
            2,
        );
    }
    for g in 2..=8 {
        exact(
            format!("interval G={g}"),
            gen_interval_instance(g, &HypothesisSpec::default()),
            2,
        );
    }
    exact("cosingleton M=10".into(), gen_cosingleton_instance(10), 10);
    for (k, hi) in [(3usize, 5usize), (4, 6)] {
        let h =
            gen_hamming_instance(k, 1, &HypothesisSpec::default()).map(|i| helly_number(i.sets()));
        let actual = h
            .as_ref()
            .map_or_else(|e| e.to_string(), |h| h.value.to_string());
        report.check(
            format!("hamming K={k} q=1"),
            h.is_ok_and(|h| (4..=hi).contains(&h.value)),
            format!("in [4, {hi}]"),
            actual,
        );
    }
    report
}

/// Disjoint-set witnesses and Helly collapse on the ranking, interval and Hamming systems.
pub fn bounds() -> Result<SuiteReport> {
    let mut report = SuiteReport::new("bounds", None);
    let systems: Vec<(String, ProblemInstance)> = vec![
        (
            "hamming K=3 q=1".into(),
            gen_hamming_instance(3, 1, &constants(2))?,
        ),
        (
            "ranking K=3".into(),
            gen_ranking_instance(3, &constants(2))?,
        ),
        (
            "interval G=4".into(),
            gen_interval_instance(4, &constants(2))?,
        ),
    ];
    for (name, inst) in systems {
        let mut engine = DimsEngine::from_instance(&inst);
        let v = engine.full();
        let tree = engine.psldim_witness(&v, 2)?;
        let valid = validate_witness(&inst, &tree, &Dimension::PSetLittlestone(2));
        report.check(
            format!("{name}, two constants: SL_2 >= 1 with valid witness"),
            valid.as_ref().is_ok_and(|d| *d >= 1),
            ">= 1",
            valid.map_or_else(|e| e, |d| d.to_string()),
        );
        let helly = helly_number(inst.sets());
        if !helly.vacuous && helly.value >= 2 {
            let p = helly.value;
            let r = check_relations(&mut engine, p, &rational(1, p as i64))?;
            report.check(
                format!("{name}: SL_p = MS_1/p = SL at p = Helly = {p}"),
                r.passed(),
                "equal",
                format!("{}, {}, {}", r.psl, r.ms, r.sl),
            );
        }
    }
    Ok(report)
}

pub fn eq1() -> Result<SuiteReport> {
    let mut report = SuiteReport::new("eq1", None);
    let e3 = Arc::new(example3());
    let eps = rational(1, 3);
    let mut worst = 0;
    let mut all_ok = true;
    let mut count = 0;
    for t in 0..=5 {
        for s in realizable_streams(&e3, t) {
            let r = eq1_check(&e3, &eps, &s)?;
            worst = worst.max(r.count());
            all_ok &= r.passed && r.loss_within_bound;
            count += 1;
        }
    }
    report.check(
        format!("example3, eps=1/3, all {count} realizable streams T<=5"),
        all_ok && worst <= 1,
        "count <= 1 and loss <= eps T + 1",
        format!("max count {worst}"),
    );
    let sb = Arc::new(gen_singleton_instance(2, &HypothesisSpec::default())?);
    let eps = rational(1, 4);
    let mut worst = 0;
    let mut all_ok = true;
    for t in 0..=5 {
        for s in realizable_streams(&sb, t) {
            let r = eq1_check(&sb, &eps, &s)?;
            worst = worst.max(r.count());
            all_ok &= r.passed && r.loss_within_bound;
        }
    }
    report.check(
        "singleton binary, eps=1/4, realizable streams T<=5",
        all_ok && worst <= 1,
        "count <= Ldim = 1",
        format!("max count {worst}"),
    );
    Ok(report)
}

pub fn potential(streams: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("potential", Some(seed));
    let e3 = Arc::new(example3());
    for n in 1..=3 {
        let mut ok = true;
        let mut rounds = 0;
        for t in 0..=3 {
            for s in realizable_streams(&e3, t) {
                let r = potential_check(&e3, n, &s)?;
                ok &= r.passed;
                rounds += r.rounds.len();
            }
        }
        report.check(
            format!("example3, N={n}, realizable streams T<=3"),
            ok,
            "Phi_t - Phi_t+1 >= loss",
            format!("{rounds} rounds checked"),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = RandomInstanceParams::default();
    for i in 0..5 {
        let inst = Arc::new(random_instance(&params, &mut rng));
        let mut ok = true;
        let mut checked = 0;
        for j in 0..streams {
            let Some(s) = random_realizable_stream(&inst, 6, &mut rng) else {
                break;
            };
            let n = 1 + j % 3;
            ok &= potential_check(&inst, n, &s)?.passed;
            checked += 1;
        }
        report.check(
            format!("random instance {i}, {checked} random realizable streams"),
            ok && checked > 0,
            "every round passes",
            if ok {
                "all passed".into()
            } else {
                "violation".to_string()
            },
        );
    }
    Ok(report)
}

pub fn minimax(limits: &MinimaxLimits, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("minimax", Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = RandomInstanceParams {
        labels: (2, limits.labels.clamp(2, 4)),
        sets: (2, limits.sets.clamp(2, 5)),
        instances: (1, limits.instances.clamp(1, 2)),
        hypotheses: (2, limits.hypotheses.clamp(2, 5)),
        require_disjoint_pair: false,
    };
    let mut cases: Vec<(String, ProblemInstance)> = (0..20)
        .map(|i| (format!("random {i}"), random_instance(&params, &mut rng)))
        .collect();
    cases.push((
        "singleton binary".into(),
        gen_singleton_instance(2, &HypothesisSpec::default())?,
    ));
    cases.push(("cosingleton M=3".into(), gen_cosingleton_instance(3)?));
    cases.push(("example3".into(), example3()));
    for (name, inst) in cases {
        let sl = DimsEngine::from_instance(&inst).sldim(&VersionSpace::full(&inst));
        for t in 1..=3usize.min(limits.rounds) {
            if !limits.admits(&inst, t) {
                continue;
            }
            let v = minimax_oracle_within(&inst, t, limits)?;
            let want = (t as i64).min(sl);
            report.check(
                format!("{name}, T={t}"),
                v as i64 == want,
                format!("min(T, SL) = {want}"),
                v.to_string(),
            );
        }
    }
    Ok(report)
}

pub fn khinchine(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("khinchine", Some(seed));
    let inst = Arc::new(gen_singleton_instance(2, &HypothesisSpec::default())?);
    let k = 25;
    let threshold = (k as f64 / 8.0).sqrt();
    for spec in [
        LearnerSpec::Soa,
        LearnerSpec::Rsoa {
            epsilon: rational(1, 4),
        },
        LearnerSpec::Uniform,
    ] {
        let config = GameConfig {
            instance: Arc::clone(&inst),
            learner: spec.clone(),
            adversary: AdversarySpec::Khinchine { k },
            rounds: k,
            mode: Mode::Exact,
            policy: Inconsistency::Restart,
        };
        let s = monte_carlo(&config, trials, seed)?;
        let lower = threshold - 3.0 * s.standard_error;
        report.check(
            format!(
                "{} vs block adversary, k=T=25, {trials} trials",
                learner_name(&spec)
            ),
            s.mean_regret >= lower,
            format!(">= sqrt(T/8) - 3 SE = {lower:.4}"),
            format!("{:.4} (SE {:.4})", s.mean_regret, s.standard_error),
        );
    }
    Ok(report)
}

fn learner_name(spec: &LearnerSpec) -> &'static str {
    match spec {
        LearnerSpec::Soa => "soa",
        LearnerSpec::Rsoa { .. } => "rsoa",
        LearnerSpec::Msol { .. } => "msol",
        LearnerSpec::Agnostic { .. } => "agnostic",
        LearnerSpec::Uniform => "uniform",
        LearnerSpec::Constant(_) => "constant",
        LearnerSpec::Example3 => "example3",
    }
}

pub fn example3_suite() -> Result<SuiteReport> {
    let mut report = SuiteReport::new("example3", None);
    let inst = Arc::new(example3());
    let mut engine = DimsEngine::new(Arc::clone(&inst));
    let v = engine.full();
    let third = rational(1, 3);
    let values = (
        engine.sldim(&v),
        engine.psldim(&v, 2)?,
        engine.psldim(&v, 3)?,
        engine.msdim(&v, &third)?,
        helly_number(inst.sets()).value,
    );
    report.check(
        "dimensions",
        values == (1, 0, 1, 1, 3),
        "SL 1, SL_2 0, SL_3 1, MS_1/3 1, Helly 3",
        format!(
            "SL {}, SL_2 {}, SL_3 {}, MS_1/3 {}, Helly {}",
            values.0, values.1, values.2, values.3, values.4
        ),
    );

    let mut worst = Rational::from_integer((-1000).into());
    for s in all_streams(&inst, 5) {
        let mut learner = Example3Learner::new(&inst)?;
        let mut adv = ScriptedAdversary::new(&inst, s)?;
        let t = run_game(&inst, &mut learner, &mut adv, 5, Mode::Exact, 0)?;
        if t.regret() > worst {
            worst = t.regret();
        }
    }
    report.check(
        "example3 learner, worst regret over all 3^5 streams",
        worst <= third,
        "<= 1/3",
        format_rational(&worst),
    );

    let mut learner = Rsoa::new(Arc::clone(&inst), third.clone())?;
    let mut adv = MsAdaptiveAdversary::new(Arc::clone(&inst), third.clone())?;
    let t = run_game(&inst, &mut learner, &mut adv, 10, Mode::Exact, 0)?;
    let loss = t.cumulative_expected();
    report.check(
        "rsoa eps=1/3 vs adaptive adversary gamma=1/3",
        loss >= third
            && loss
                <= third.clone() * Rational::from_integer(t.len().into())
                    + Rational::from_integer(1.into()),
        ">= gamma MS_gamma = 1/3 and <= eps T + MS",
        format_rational(&loss),
    );

    let mut soa = Soa::new(Arc::clone(&inst));
    let mut tree = SlTreeAdversary::for_instance(Arc::clone(&inst))?;
    let t = run_game(&inst, &mut soa, &mut tree, 10, Mode::Exact, 0)?;
    report.check(
        "soa vs tree adversary",
        t.sampled_mistakes() == Some(1),
        "1 mistake",
        format!("{:?}", t.sampled_mistakes()),
    );

    let horizon = 6;
    let d = 1.0;
    let bound = d
        + to_f64(&third) * horizon as f64
        + (2.0 * d * horizon as f64 * (horizon as f64).ln()).sqrt();
    let mut worst = f64::NEG_INFINITY;
    for s in all_streams(&inst, horizon) {
        let mut learner = AgnosticLearner::new(
            Arc::clone(&inst),
            third.clone(),
            horizon,
            AgnosticMode::Exact,
            0,
        )?;
        let mut adv = ScriptedAdversary::new(&inst, s)?;
        let t = run_game(&inst, &mut learner, &mut adv, horizon, Mode::Exact, 0)?;
        worst = worst.max(to_f64(&t.regret()));
    }
    report.check(
        "agnostic learner eps=1/3, T=6, worst over all 3^6 streams",
        worst <= bound,
        format!("<= {bound:.4}"),
        format!("{worst:.4}"),
    );
    Ok(report)
}

pub fn separation() -> Result<SuiteReport> {
    let mut report = SuiteReport::new("separation", None);
    let play = |m: usize, t: usize, uniform: bool| -> Result<(Option<usize>, Rational)> {
        let inst = Arc::new(gen_cosingleton_instance(m)?);
        let mut adv = SeparationAdversary::new(Arc::clone(&inst))?;
        let mut learner: Box<dyn Learner> = if uniform {
            Box::new(UniformLearner::new(m))
        } else {
            Box::new(Soa::new(Arc::clone(&inst)))
        };
        let tr = run_game(&inst, learner.as_mut(), &mut adv, t, Mode::Exact, 0)?;
        Ok((tr.sampled_mistakes(), tr.cumulative_expected()))
    };
    let (mistakes, _) = play(100, 20, false)?;
    report.check(
        "soa, M=100, T=20",
        mistakes == Some(20),
        "20 mistakes",
        format!("{mistakes:?}"),
    );
    let (_, loss) = play(100, 20, true)?;
    report.check(
        "uniform, M=100, T=20",
        loss == rational(1, 5),
        "expected loss 1/5",
        format_rational(&loss),
    );
    let (mistakes, _) = play(8, 5, false)?;
    report.check(
        "soa, M=8, T=5",
        mistakes == Some(5),
        "5 mistakes",
        format!("{mistakes:?}"),
    );
    let (mistakes, _) = play(2, 5, false)?;
    report.check(
        "soa, M=2, T=5",
        mistakes.is_some_and(|m| m <= 1),
        "at most 1 mistake",
        format!("{mistakes:?}"),
    );
    Ok(report)
}
