use std::sync::Arc;

use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sfl::adversaries::{AdversarySpec, IidAdversary, ScriptedAdversary};
use sfl::harness::suites::{run_suite, SuiteOptions};
use sfl::harness::{
    all_streams, eq1_check, minimax_oracle, minimax_oracle_within, monte_carlo, random_instance,
    random_realizable_stream, read_csv, realizable_streams, run_game, write_csv, GameConfig,
    MinimaxLimits, Mode, RandomInstanceParams, CSV_HEADER,
};
use sfl::learners::{Inconsistency, LearnerSpec, Rsoa, Soa, UniformLearner};
use sfl::model::{example3, gen_cosingleton_instance, gen_singleton_instance, HypothesisSpec};
use sfl::scalar::rational;
use sfl::{Error, LabeledStream, Rational};

fn csv_text(t: &sfl::harness::GameTranscript) -> String {
    let mut buf = Vec::new();
    write_csv(t, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn csv_shapes() {
    let inst = Arc::new(example3());
    let mut u = UniformLearner::new(6);
    let mut adv = ScriptedAdversary::new(&inst, LabeledStream::new(vec![(0, 1)])).unwrap();
    let empty = run_game(&inst, &mut u, &mut adv, 0, Mode::Exact, 0).unwrap();
    assert_eq!(csv_text(&empty), CSV_HEADER.join(",") + "\n");
    let one = run_game(&inst, &mut u, &mut adv, 1, Mode::Exact, 0).unwrap();
    assert_eq!(csv_text(&one).lines().count(), 2);
    assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
}

#[test]
fn csv_round_trip_reaccumulates() {
    let inst = Arc::new(gen_cosingleton_instance(4).unwrap());
    let mut l =
        Rsoa::with_policy(Arc::clone(&inst), rational(1, 4), Inconsistency::Restart).unwrap();
    let mut adv = IidAdversary::uniform(&inst, 3);
    let t = run_game(&inst, &mut l, &mut adv, 12, Mode::Sample, 9).unwrap();
    let rows = read_csv(csv_text(&t).as_bytes()).unwrap();
    assert_eq!(rows.len(), 12);
    let mut cum = Rational::zero();
    for (row, rec) in rows.iter().zip(&t.rounds) {
        cum += &row.expected_loss;
        assert_eq!(row.cum_expected, cum);
        assert_eq!(row.cum_expected, rec.cum_expected);
        assert_eq!(row.regret, rec.regret);
        assert!(row.sampled_loss.is_some());
    }
}

#[test]
fn games_are_reproducible() {
    let inst = Arc::new(gen_cosingleton_instance(5).unwrap());
    let play = |seed| {
        let mut u = UniformLearner::new(5);
        let mut adv = IidAdversary::uniform(&inst, seed);
        csv_text(&run_game(&inst, &mut u, &mut adv, 15, Mode::Sample, seed).unwrap())
    };
    assert_eq!(play(4), play(4));
    assert_ne!(play(4), play(5));
}

#[test]
fn exact_mode_regret_is_expected_loss_minus_comparator() {
    let inst = Arc::new(example3());
    let stream = LabeledStream::new(vec![(0, 0), (0, 1), (0, 0), (0, 2)]);
    let mut u = UniformLearner::new(6);
    let mut adv = ScriptedAdversary::new(&inst, stream.clone()).unwrap();
    let t = run_game(&inst, &mut u, &mut adv, 4, Mode::Exact, 0).unwrap();
    assert_eq!(t.cumulative_expected(), rational(2, 1));
    assert_eq!(t.comparator_loss(), inst.comparator_loss(&stream));
    assert_eq!(t.regret(), rational(0, 1));
}

#[test]
fn monte_carlo_is_seed_determined() {
    let inst = Arc::new(gen_singleton_instance(2, &HypothesisSpec::default()).unwrap());
    let config = GameConfig {
        instance: inst,
        learner: LearnerSpec::Uniform,
        adversary: AdversarySpec::Khinchine { k: 5 },
        rounds: 5,
        mode: Mode::Exact,
        policy: Inconsistency::Restart,
    };
    let a = monte_carlo(&config, 200, 11).unwrap();
    let b = monte_carlo(&config, 200, 11).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.trials, 200);
    assert!(a.standard_error > 0.0);
    let one = monte_carlo(&config, 1, 11).unwrap();
    assert_eq!(one.standard_error, 0.0);
}

#[test]
fn minimax_examples() {
    let sb = gen_singleton_instance(2, &HypothesisSpec::default()).unwrap();
    assert_eq!(minimax_oracle(&sb, 3).unwrap(), 1);
    let cs = gen_cosingleton_instance(3).unwrap();
    let values: Vec<usize> = (1..=3).map(|t| minimax_oracle(&cs, t).unwrap()).collect();
    assert_eq!(values, vec![1, 2, 2]);
    let e3 = example3();
    assert!(matches!(minimax_oracle(&e3, 2), Err(Error::Guard(_))));
    assert_eq!(
        minimax_oracle_within(&e3, 2, &MinimaxLimits::SMALL).unwrap(),
        1
    );
    assert!(minimax_oracle(&sb, 5).is_err());
}

#[test]
fn stream_enumeration() {
    let e3 = example3();
    assert_eq!(all_streams(&e3, 3).len(), 27);
    for t in 0..=4 {
        assert_eq!(realizable_streams(&e3, t).len(), if t == 0 { 1 } else { 3 });
    }
    let inst = Arc::new(e3);
    let bad = LabeledStream::new(vec![(0, 0), (0, 1)]);
    assert!(matches!(
        eq1_check(&inst, &rational(1, 3), &bad),
        Err(Error::NotRealizable(_))
    ));
}

#[test]
fn realizable_adversary_rejects_contradiction() {
    let inst = Arc::new(example3());
    let mut soa = Soa::new(Arc::clone(&inst));
    let mut adv = ScriptedAdversary::new(&inst, LabeledStream::new(vec![(0, 0), (0, 1)])).unwrap();
    assert!(run_game(&inst, &mut soa, &mut adv, 2, Mode::Exact, 0).is_err());
}

#[test]
fn suites_report() {
    let reports = run_suite("helly", &SuiteOptions::default()).unwrap();
    assert_eq!(reports.len(), 1);
    assert!(reports[0].passed());
    let text = reports[0].to_string();
    assert!(text.starts_with("suite helly:"));
    assert!(text.contains("PASS example3"));
    assert!(serde_json::to_string(&reports)
        .unwrap()
        .contains("\"suite\":\"helly\""));
    assert!(matches!(
        run_suite("nope", &SuiteOptions::default()),
        Err(Error::Config(_))
    ));
    let small = SuiteOptions {
        instances: 5,
        ..SuiteOptions::default()
    };
    for name in ["structural", "bounds", "eq1", "separation"] {
        assert!(run_suite(name, &small).unwrap()[0].passed(), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_instances_respect_parameters(seed in any::<u64>()) {
        let p = RandomInstanceParams::default();
        let inst = random_instance(&p, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!((p.labels.0..=p.labels.1).contains(&inst.label_count()));
        prop_assert!(inst.set_count() >= 2 && inst.set_count() <= p.sets.1);
        prop_assert!(inst.instance_count() <= p.instances.1);
        prop_assert!(inst.hypothesis_count() >= 2 && inst.hypothesis_count() <= p.hypotheses.1);
    }

    #[test]
    fn realizable_streams_are_realizable(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&RandomInstanceParams::default(), &mut rng);
        let s = random_realizable_stream(&inst, 7, &mut rng).unwrap();
        prop_assert_eq!(inst.comparator_loss(&s), 0);
    }

    #[test]
    fn sampled_and_expected_accounting(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = Arc::new(random_instance(&RandomInstanceParams::default(), &mut rng));
        let mut u = UniformLearner::new(inst.label_count());
        let mut adv = IidAdversary::uniform(&inst, seed);
        let t = run_game(&inst, &mut u, &mut adv, 10, Mode::Sample, seed).unwrap();
        let mut cum = Rational::zero();
        for r in &t.rounds {
            cum += &r.expected_loss;
            prop_assert_eq!(&r.cum_expected, &cum);
            prop_assert!(r.sampled_loss.is_some());
        }
        let mistakes = t.sampled_mistakes().unwrap();
        prop_assert_eq!(t.regret(), Rational::from_integer(mistakes.into()) - Rational::from_integer(t.comparator_loss().into()));
    }
}
