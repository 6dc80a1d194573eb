//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed; the
//! process exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sfl::adversaries::{AdversarySpec, MsAdaptiveAdversary, ScriptedAdversary, SlTreeAdversary};
use sfl::dims::{check_relations, helly_number, validate_witness, Dimension, DimsEngine};
use sfl::harness::suites::random_singleton_instance;
use sfl::harness::{
    all_streams, eq1_check, minimax_oracle_within, monte_carlo, potential_check, random_instance,
    random_realizable_stream, realizable_streams, run_game, GameConfig, MinimaxLimits, Mode,
    RandomInstanceParams,
};
use sfl::learners::{
    AgnosticLearner, AgnosticMode, Example3Learner, Inconsistency, LearnerSpec, Rsoa, Soa,
    UniformLearner,
};
use sfl::model::{
    example3, gen_cosingleton_instance, gen_hamming_instance, gen_interval_instance,
    gen_ranking_instance, gen_singleton_instance, HypothesisSpec,
};
use sfl::scalar::{format_rational, rational, to_f64};
use sfl::{ProblemInstance, Rational, Result};

const SEED: u64 = 20261017;

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        passed,
        detail: detail.into(),
    })
}

fn within(elapsed: Duration, limit: Duration, o: Outcome) -> Outcome {
    let ok = elapsed <= limit;
    Outcome {
        passed: o.passed && ok,
        detail: format!(
            "{}; {:.1}s (limit {}s)",
            o.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        ),
    }
}

fn sandwich_instances() -> Vec<ProblemInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let params = RandomInstanceParams::default();
    (0..100)
        .map(|_| random_instance(&params, &mut rng))
        .collect()
}

fn c1_sandwich() -> Result<Outcome> {
    let start = Instant::now();
    let mut ok = 0;
    let mut total = 0;
    for inst in sandwich_instances() {
        let mut engine = DimsEngine::from_instance(&inst);
        for p in [2, 3] {
            total += 1;
            if check_relations(&mut engine, p, &rational(1, p as i64))?.sandwich {
                ok += 1;
            }
        }
    }
    let o = outcome(
        ok == total,
        format!("{ok}/{total} cases ordered, seed {SEED}"),
    )?;
    Ok(within(start.elapsed(), Duration::from_secs(120), o))
}

fn c2_collapse() -> Result<Outcome> {
    let mut ok = 0;
    let mut total = 0;
    for inst in sandwich_instances() {
        let h = helly_number(inst.sets());
        if h.vacuous || h.value > 3 {
            continue;
        }
        let p = h.value;
        let mut engine = DimsEngine::from_instance(&inst);
        let r = check_relations(&mut engine, p, &rational(1, p as i64))?;
        total += 1;
        if r.psl == r.ms && r.ms == r.sl {
            ok += 1;
        }
    }
    outcome(
        ok == total && total > 0,
        format!("{ok}/{total} instances with Helly <= 3 collapse"),
    )
}

fn c3_helly() -> Result<Outcome> {
    let hyp = HypothesisSpec::default();
    let mut failures = Vec::new();
    let mut exact = |name: String, inst: ProblemInstance, lo: usize, hi: usize| {
        let h = helly_number(inst.sets());
        if h.vacuous || h.value < lo || h.value > hi {
            failures.push(format!("{name}={}", h.value));
        }
    };
    for k in [3, 4] {
        exact(
            format!("ranking K={k}"),
            gen_ranking_instance(k, &hyp)?,
            2,
            2,
        );
    }
    for g in 2..=8 {
        exact(
            format!("interval G={g}"),
            gen_interval_instance(g, &hyp)?,
            2,
            2,
        );
    }
    let h3 = helly_number(gen_hamming_instance(3, 1, &hyp)?.sets()).value;
    let h4 = helly_number(gen_hamming_instance(4, 1, &hyp)?.sets()).value;
    exact(
        "hamming K=3".into(),
        gen_hamming_instance(3, 1, &hyp)?,
        4,
        5,
    );
    exact(
        "hamming K=4".into(),
        gen_hamming_instance(4, 1, &hyp)?,
        4,
        6,
    );
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("ranking 2, interval 2, hamming K=3 {h3}, K=4 {h4}")
        } else {
            failures.join(", ")
        },
    )
}

fn soa_mistakes(
    inst: &Arc<ProblemInstance>,
    adversary: &mut dyn sfl::adversaries::Adversary,
    rounds: usize,
) -> Result<usize> {
    let mut soa = Soa::new(Arc::clone(inst));
    let t = run_game(inst, &mut soa, adversary, rounds, Mode::Exact, 0)?;
    Ok(t.sampled_mistakes().expect("deterministic predictions"))
}

fn c4_deterministic() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut details = Vec::new();
    let mut passed = true;
    for (name, inst, want) in [
        ("example3", example3(), 1),
        ("cosingleton M=3", gen_cosingleton_instance(3)?, 2),
    ] {
        let inst = Arc::new(inst);
        let sl = DimsEngine::new(Arc::clone(&inst)).sldim(&sfl::dims::VersionSpace::full(&inst));
        let mut tree = SlTreeAdversary::for_instance(Arc::clone(&inst))?;
        let forced = soa_mistakes(&inst, &mut tree, 20)?;
        let mut worst = 0;
        for _ in 0..1000 {
            let stream = random_realizable_stream(&inst, 10, &mut rng).expect("realizable");
            let mut adv = ScriptedAdversary::new(&inst, stream)?;
            worst = worst.max(soa_mistakes(&inst, &mut adv, 10)?);
        }
        passed &= sl == want && forced as i64 == want && worst as i64 <= sl;
        details.push(format!(
            "{name}: SL {sl}, tree {forced}, random max {worst}"
        ));
    }
    outcome(passed, details.join("; "))
}

fn c5_minimax() -> Result<Outcome> {
    let start = Instant::now();
    let limits = MinimaxLimits::TINY;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let params = RandomInstanceParams {
        labels: (2, 4),
        sets: (2, 5),
        instances: (1, 2),
        hypotheses: (2, 5),
        require_disjoint_pair: false,
    };
    let mut cases: Vec<ProblemInstance> = vec![
        gen_singleton_instance(2, &HypothesisSpec::default())?,
        gen_singleton_instance(3, &HypothesisSpec::default())?,
        gen_cosingleton_instance(3)?,
        gen_cosingleton_instance(4)?,
    ];
    for i in 0..40 {
        let p = RandomInstanceParams {
            require_disjoint_pair: i % 2 == 0,
            ..params
        };
        cases.push(random_instance(&p, &mut rng));
    }
    cases.retain(|c| limits.admits(c, 3));
    let mut ok = 0;
    let mut total = 0;
    let mut positive = 0;
    for inst in &cases {
        let sl = DimsEngine::from_instance(inst).sldim(&sfl::dims::VersionSpace::full(inst));
        positive += usize::from(sl > 0);
        for t in 1..=3usize {
            total += 1;
            if minimax_oracle_within(inst, t, &limits)? as i64 == (t as i64).min(sl) {
                ok += 1;
            }
        }
    }
    let o = outcome(
        ok == total && cases.len() >= 20,
        format!(
            "{ok}/{total} on {} instances ({positive} with SL > 0)",
            cases.len()
        ),
    )?;
    Ok(within(start.elapsed(), Duration::from_secs(300), o))
}

fn c6_eq1() -> Result<Outcome> {
    let e3 = Arc::new(example3());
    let third = rational(1, 3);
    let mut worst = 0;
    let mut streams = 0;
    for t in 0..=5 {
        for s in realizable_streams(&e3, t) {
            worst = worst.max(eq1_check(&e3, &third, &s)?.count());
            streams += 1;
        }
    }
    let sb = Arc::new(gen_singleton_instance(2, &HypothesisSpec::default())?);
    let ldim = DimsEngine::new(Arc::clone(&sb)).ldim(&sfl::dims::VersionSpace::full(&sb));
    let mut worst_sb = 0;
    for t in 0..=5 {
        for s in realizable_streams(&sb, t) {
            worst_sb = worst_sb.max(eq1_check(&sb, &rational(1, 4), &s)?.count());
        }
    }
    outcome(
        worst <= 1 && ldim == 1 && worst_sb <= 1,
        format!("example3 max count {worst} over {streams} streams; singleton binary max count {worst_sb}, Ldim {ldim}"),
    )
}

fn c7_fixed_scale_loss() -> Result<Outcome> {
    let e3 = Arc::new(example3());
    let third = rational(1, 3);
    let mut ok = true;
    let mut streams = 0;
    for t in 0..=5 {
        for s in realizable_streams(&e3, t) {
            ok &= eq1_check(&e3, &third, &s)?.loss_within_bound;
            streams += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut instances = vec![
        example3(),
        gen_cosingleton_instance(3)?,
        gen_cosingleton_instance(5)?,
    ];
    let params = RandomInstanceParams {
        require_disjoint_pair: true,
        ..RandomInstanceParams::default()
    };
    instances.extend((0..10).map(|_| random_instance(&params, &mut rng)));
    let mut adaptive = 0;
    for inst in instances {
        let inst = Arc::new(inst);
        for eps in [rational(1, 3), rational(1, 4), rational(1, 2)] {
            let mut learner = Rsoa::new(Arc::clone(&inst), eps.clone())?;
            let mut adv = MsAdaptiveAdversary::new(Arc::clone(&inst), eps.clone())?;
            let t = run_game(&inst, &mut learner, &mut adv, 12, Mode::Exact, 0)?;
            let ms = DimsEngine::new(Arc::clone(&inst))
                .msdim(&sfl::dims::VersionSpace::full(&inst), &eps)?;
            let bound = eps.clone() * Rational::from_integer(t.len().into())
                + Rational::from_integer(ms.into());
            ok &= t.cumulative_expected() <= bound;
            adaptive += 1;
        }
    }
    outcome(
        ok,
        format!("{streams} enumerated streams and {adaptive} adaptive games within eps T + MS_eps"),
    )
}

fn c8_potential() -> Result<Outcome> {
    let e3 = Arc::new(example3());
    let mut ok = true;
    let mut rounds = 0;
    for n in 1..=3 {
        for t in 0..=3 {
            for s in realizable_streams(&e3, t) {
                let r = potential_check(&e3, n, &s)?;
                ok &= r.passed;
                rounds += r.rounds.len();
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let params = RandomInstanceParams::default();
    let mut random_streams = 0;
    for _ in 0..5 {
        let inst = Arc::new(random_instance(&params, &mut rng));
        for j in 0..1000 {
            let s = random_realizable_stream(&inst, 6, &mut rng).expect("realizable");
            let r = potential_check(&inst, 1 + j % 3, &s)?;
            ok &= r.passed;
            rounds += r.rounds.len();
            random_streams += 1;
        }
    }
    outcome(
        ok,
        format!("{rounds} rounds checked, {random_streams} random streams"),
    )
}

fn c9_randomized_lower() -> Result<Outcome> {
    let inst = Arc::new(example3());
    let gamma = rational(1, 3);
    let mut learner = Rsoa::new(Arc::clone(&inst), gamma.clone())?;
    let mut adv = MsAdaptiveAdversary::new(Arc::clone(&inst), gamma.clone())?;
    let t = run_game(&inst, &mut learner, &mut adv, 10, Mode::Exact, 0)?;
    let loss = t.cumulative_expected();
    outcome(
        loss >= gamma,
        format!(
            "expected loss {} over {} rounds, target >= 1/3",
            format_rational(&loss),
            t.len()
        ),
    )
}

fn c10_agnostic() -> Result<Outcome> {
    let start = Instant::now();
    let inst = Arc::new(example3());
    let eps = rational(1, 3);
    let horizon = 6;
    let ms = DimsEngine::new(Arc::clone(&inst))
        .msdim(&sfl::dims::VersionSpace::full(&inst), &eps)? as f64;
    let t = horizon as f64;
    let bound = ms + to_f64(&eps) * t + (2.0 * ms * t * t.ln()).sqrt();
    let mut worst = Rational::from_integer((-100).into());
    let mut count = 0;
    for s in all_streams(&inst, horizon) {
        let mut learner = AgnosticLearner::new(
            Arc::clone(&inst),
            eps.clone(),
            horizon,
            AgnosticMode::Exact,
            0,
        )?;
        let mut adv = ScriptedAdversary::new(&inst, s)?;
        let tr = run_game(&inst, &mut learner, &mut adv, horizon, Mode::Exact, 0)?;
        if tr.regret() > worst {
            worst = tr.regret();
        }
        count += 1;
    }
    let o = outcome(
        count == 729 && to_f64(&worst) <= bound,
        format!(
            "max regret {:.4} over {count} sequences, bound {bound:.4}",
            to_f64(&worst)
        ),
    )?;
    Ok(within(start.elapsed(), Duration::from_secs(600), o))
}

fn c11_khinchine() -> Result<Outcome> {
    let start = Instant::now();
    let inst = Arc::new(gen_singleton_instance(2, &HypothesisSpec::default())?);
    let sl2 =
        DimsEngine::new(Arc::clone(&inst)).psldim(&sfl::dims::VersionSpace::full(&inst), 2)?;
    let target = (25.0f64 / 8.0).sqrt();
    let mut passed = sl2 == 1;
    let mut details = vec![format!("SL_2 {sl2}, seed {SEED}")];
    for (name, learner) in [
        ("soa", LearnerSpec::Soa),
        (
            "rsoa",
            LearnerSpec::Rsoa {
                epsilon: rational(1, 4),
            },
        ),
        ("uniform", LearnerSpec::Uniform),
    ] {
        let config = GameConfig {
            instance: Arc::clone(&inst),
            learner,
            adversary: AdversarySpec::Khinchine { k: 25 },
            rounds: 25,
            mode: Mode::Exact,
            policy: Inconsistency::Restart,
        };
        let s = monte_carlo(&config, 10_000, SEED)?;
        passed &= s.mean_regret >= target - 3.0 * s.standard_error;
        details.push(format!(
            "{name} {:.3} (SE {:.3})",
            s.mean_regret, s.standard_error
        ));
    }
    let o = outcome(
        passed,
        format!("{}; target {target:.3} - 3 SE", details.join(", ")),
    )?;
    Ok(within(start.elapsed(), Duration::from_secs(120), o))
}

fn c12_example3() -> Result<Outcome> {
    let inst = Arc::new(example3());
    let mut worst = Rational::from_integer((-100).into());
    let mut count = 0;
    for s in all_streams(&inst, 5) {
        let mut learner = Example3Learner::new(&inst)?;
        let mut adv = ScriptedAdversary::new(&inst, s)?;
        let t = run_game(&inst, &mut learner, &mut adv, 5, Mode::Exact, 0)?;
        if t.regret() > worst {
            worst = t.regret();
        }
        count += 1;
    }
    outcome(
        count == 243 && worst <= rational(1, 3),
        format!(
            "max regret {} over {count} streams",
            format_rational(&worst)
        ),
    )
}

fn c13_separation() -> Result<Outcome> {
    let inst = Arc::new(gen_cosingleton_instance(100)?);
    let mut adv = AdversarySpec::Separation.build(Arc::clone(&inst), 0)?;
    let mistakes = soa_mistakes(&inst, adv.as_mut(), 20)?;
    let mut adv = AdversarySpec::Separation.build(Arc::clone(&inst), 0)?;
    let mut uniform = UniformLearner::new(100);
    let t = run_game(&inst, &mut uniform, adv.as_mut(), 20, Mode::Exact, 0)?;
    let loss = t.cumulative_expected();
    outcome(
        mistakes == 20 && loss == rational(1, 5),
        format!(
            "soa {mistakes} mistakes, uniform expected loss {}",
            format_rational(&loss)
        ),
    )
}

fn c14_singleton() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let params = RandomInstanceParams::default();
    let mut ok = 0;
    for _ in 0..20 {
        let inst = random_singleton_instance(&params, &mut rng);
        let mut engine = DimsEngine::from_instance(&inst);
        let v = engine.full();
        let l = engine.ldim(&v);
        if engine.sldim(&v) == l && engine.msdim(&v, &Rational::zero())? == l {
            ok += 1;
        }
    }
    outcome(ok == 20, format!("{ok}/20 instances with SL = MS_0 = Ldim"))
}

fn c15_hamming() -> Result<Outcome> {
    let labels = 8;
    let mut ok = 0;
    let mut total = 0;
    for a in 0..labels {
        for b in a + 1..labels {
            let inst = gen_hamming_instance(3, 1, &HypothesisSpec::Table(vec![vec![a], vec![b]]))?;
            let mut engine = DimsEngine::from_instance(&inst);
            let v = engine.full();
            let tree = engine.psldim_witness(&v, 2)?;
            let valid = validate_witness(&inst, &tree, &Dimension::PSetLittlestone(2));
            total += 1;
            if engine.psldim(&v, 2)? >= 1 && valid.is_ok_and(|d| d >= 1) {
                ok += 1;
            }
        }
    }
    outcome(
        ok == total,
        format!("{ok}/{total} constant pairs with a validated depth >= 1 witness"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 15] = [
        ("structural sandwich", c1_sandwich),
        ("Helly collapse", c2_collapse),
        ("Helly values", c3_helly),
        ("deterministic optimality", c4_deterministic),
        ("minimax oracle", c5_minimax),
        ("high-mass miss count", c6_eq1),
        ("fixed-scale loss bound", c7_fixed_scale_loss),
        ("multi-scale potential", c8_potential),
        ("randomized lower bound", c9_randomized_lower),
        ("agnostic upper bound", c10_agnostic),
        ("block-sign lower bound", c11_khinchine),
        ("example3 tightness", c12_example3),
        ("separation demo", c13_separation),
        ("singleton reduction", c14_singleton),
        ("Hamming disjoint balls", c15_hamming),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (passed, detail) = match run() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!passed);
        println!(
            "criterion {:>2} {:<26} {}  {detail}",
            i + 1,
            name,
            if passed { "PASS" } else { "FAIL" }
        );
    }
    println!("acceptance: {}/15 passed", 15 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
