use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sfl::harness::{random_instance, RandomInstanceParams};
use sfl::model::{
    example3, gen_cosingleton_instance, gen_hamming_instance, gen_interval_instance,
    gen_ranking_instance, gen_singleton_instance, hamming_distance, load_instance, load_stream,
    ranking_label_index, ranking_labels, ranking_loss, ranking_set, validate_realizable,
    HypothesisSpec,
};
use sfl::{Error, LabeledStream, ProblemInstance};

fn bits(k: usize, mask: u32) -> Vec<bool> {
    (0..k).map(|i| mask >> i & 1 == 1).collect()
}

#[test]
fn example3_document() {
    let inst = example3();
    assert_eq!(inst.label_count(), 6);
    assert_eq!(inst.set_count(), 3);
    assert_eq!(inst.hypothesis_count(), 3);
    let again = load_instance(&inst.to_json()).unwrap();
    assert_eq!(again.sets(), inst.sets());
    assert_eq!(again.hypotheses().rows(), inst.hypotheses().rows());
}

#[test]
fn documents_reject_bad_input() {
    let bad = [
        r#"{"labels": 3, "sets": [[0, 3]], "instances": ["a"], "hypotheses": [[0]]}"#,
        r#"{"labels": 3, "sets": [[]], "instances": ["a"], "hypotheses": [[0]]}"#,
        r#"{"labels": 3, "sets": [], "instances": ["a"], "hypotheses": [[0]]}"#,
        r#"{"labels": 0, "sets": [[0]], "instances": ["a"], "hypotheses": [[0]]}"#,
        r#"{"labels": 3, "sets": [[0]], "instances": ["a"], "hypotheses": [[4]]}"#,
        r#"{"labels": 3, "sets": [[0]], "instances": ["a"], "hypotheses": [[0, 1]]}"#,
        r#"{"labels": 3, "sets": [[0]], "instances": ["a"], "hypotheses": []}"#,
        r#"{"labels": 3, "sets": [[0]], "instances": ["a"], "hypotheses": [[0]], "extra": 1}"#,
        "not json",
    ];
    for text in bad {
        assert!(load_instance(text).is_err(), "{text}");
    }
}

#[test]
fn streams_are_index_checked() {
    let inst = example3();
    let s = load_stream("[[0, 1], [0, 2]]", &inst).unwrap();
    assert_eq!(s.rounds(), &[(0, 1), (0, 2)]);
    assert!(load_stream("[[1, 0]]", &inst).is_err());
    assert!(load_stream("[[0, 3]]", &inst).is_err());
    assert!(load_stream("[[0]]", &inst).is_err());
    assert_eq!(load_stream(&s.to_json(), &inst).unwrap(), s);
}

#[test]
fn realizability_and_comparator() {
    let inst = example3();
    let s = LabeledStream::new(vec![(0, 0), (0, 0)]);
    assert_eq!(validate_realizable(&inst, &s), Some(0));
    assert_eq!(inst.comparator_loss(&s), 0);
    let mixed = LabeledStream::new(vec![(0, 0), (0, 1), (0, 2)]);
    assert_eq!(validate_realizable(&inst, &mixed), None);
    assert_eq!(inst.comparator_loss(&mixed), 2);
    assert_eq!(inst.hypothesis_loss(1, &mixed), 2);
}

#[test]
fn generator_ranges() {
    let c = HypothesisSpec::default();
    assert!(matches!(
        gen_ranking_instance(1, &c),
        Err(Error::OutOfRange { .. })
    ));
    assert!(gen_ranking_instance(6, &c).is_err());
    assert!(gen_interval_instance(1, &c).is_err());
    assert!(gen_interval_instance(257, &c).is_err());
    assert!(gen_hamming_instance(3, 0, &c).is_err());
    assert!(gen_hamming_instance(3, 3, &c).is_err());
    assert!(gen_hamming_instance(7, 1, &c).is_err());
    assert!(gen_cosingleton_instance(1).is_err());
    assert!(gen_singleton_instance(0, &c).is_err());
}

#[test]
fn generator_shapes() {
    let c = HypothesisSpec::default();
    assert_eq!(gen_ranking_instance(3, &c).unwrap().label_count(), 6);
    // Relevance vectors of all-relevant and none-relevant give the same full set.
    assert_eq!(gen_ranking_instance(3, &c).unwrap().set_count(), 7);
    assert_eq!(gen_interval_instance(4, &c).unwrap().set_count(), 10);
    let h = gen_hamming_instance(3, 1, &c).unwrap();
    assert_eq!((h.label_count(), h.set_count()), (8, 8));
    assert!(h.sets().iter().all(|s| s.count() == 4));
    let cs = gen_cosingleton_instance(5).unwrap();
    assert!(cs.sets().iter().all(|s| s.count() == 4));
    let multi = gen_singleton_instance(3, &HypothesisSpec::Constants { instances: 2 }).unwrap();
    assert_eq!(multi.instance_count(), 2);
}

#[test]
fn ranking_labels_are_permutations() {
    for k in 2..=4 {
        let labels = ranking_labels(k);
        assert_eq!(labels.len(), (1..=k).product::<usize>());
        for (j, pi) in labels.iter().enumerate() {
            let mut sorted = pi.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (1..=k).collect::<Vec<_>>());
            assert_eq!(ranking_label_index(pi), Some(j));
        }
    }
    assert_eq!(ranking_labels(3)[0], vec![1, 2, 3]);
}

proptest! {
    #[test]
    fn document_round_trip(seed in any::<u64>()) {
        let inst = random_instance(&RandomInstanceParams::default(), &mut ChaCha8Rng::seed_from_u64(seed));
        let again: ProblemInstance = load_instance(&inst.to_json()).unwrap();
        prop_assert_eq!(again.sets(), inst.sets());
        prop_assert_eq!(again.hypotheses().rows(), inst.hypotheses().rows());
        prop_assert_eq!(again.instance_names(), inst.instance_names());
    }

    #[test]
    fn ranking_set_is_zero_loss_set(k in 2usize..=4, mask in any::<u32>()) {
        let labels = ranking_labels(k);
        let r = bits(k, mask);
        let set = ranking_set(&labels, &r);
        for (j, pi) in labels.iter().enumerate() {
            prop_assert_eq!(set.contains(j), ranking_loss(pi, &r) == 0);
        }
        prop_assert!(!set.is_empty());
    }

    #[test]
    fn hamming_balls_are_symmetric(k in 2usize..=5, q in 1usize..=4, a in any::<u8>(), b in any::<u8>()) {
        prop_assume!(q < k);
        let inst = gen_hamming_instance(k, q, &HypothesisSpec::default()).unwrap();
        let m = 1usize << k;
        let (a, b) = (a as usize % m, b as usize % m);
        prop_assert_eq!(hamming_distance(a, b), hamming_distance(b, a));
        // Ball around a contains b iff ball around b contains a; all balls have one size.
        let ball = |c: usize| inst.sets().iter().find(|s| s.contains(c) && s.iter().all(|z| hamming_distance(c, z) <= q)).cloned().unwrap();
        prop_assert_eq!(ball(a).contains(b), ball(b).contains(a));
        prop_assert_eq!(ball(a).count(), ball(b).count());
    }
}
