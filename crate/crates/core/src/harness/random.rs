use rand::seq::SliceRandom;
use rand::Rng;

use crate::bitset::BitSet;
use crate::model::{LabeledStream, ProblemInstance};

/// Inclusive size ranges for random instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomInstanceParams {
    pub labels: (usize, usize),
    pub sets: (usize, usize),
    pub instances: (usize, usize),
    pub hypotheses: (usize, usize),
    /// Reject instances without two disjoint feedback sets.
    pub require_disjoint_pair: bool,
}

impl Default for RandomInstanceParams {
    fn default() -> Self {
        RandomInstanceParams {
            labels: (2, 5),
            sets: (2, 6),
            instances: (1, 3),
            hypotheses: (2, 8),
            require_disjoint_pair: false,
        }
    }
}

/// Random instance with at least two distinct sets and two distinct hypotheses.
pub fn random_instance<R: Rng + ?Sized>(
    params: &RandomInstanceParams,
    rng: &mut R,
) -> ProblemInstance {
    loop {
        let m = rng.gen_range(params.labels.0..=params.labels.1);
        let n_sets = rng.gen_range(params.sets.0..=params.sets.1);
        let k = rng.gen_range(params.instances.0..=params.instances.1);
        let n_hyp = rng.gen_range(params.hypotheses.0..=params.hypotheses.1);
        let sets: Vec<BitSet> = (0..n_sets)
            .map(|_| loop {
                let s = BitSet::from_members(m, (0..m).filter(|_| rng.gen_bool(0.5)));
                if !s.is_empty() {
                    break s;
                }
            })
            .collect();
        let rows: Vec<Vec<usize>> = (0..n_hyp)
            .map(|_| (0..k).map(|_| rng.gen_range(0..m)).collect())
            .collect();
        let names = (0..k).map(|j| format!("x{j}")).collect();
        let Ok(inst) = ProblemInstance::new(m, sets, names, rows) else {
            continue;
        };
        if inst.set_count() < 2 || inst.hypothesis_count() < 2 {
            continue;
        }
        if params.require_disjoint_pair {
            let s = inst.sets();
            let disjoint = (0..s.len()).any(|i| (i + 1..s.len()).any(|j| !s[i].intersects(&s[j])));
            if !disjoint {
                continue;
            }
        }
        return inst;
    }
}

/// Stream of length `rounds` consistent with a random hypothesis; `None` if
/// no hypothesis lies in any feedback set.
pub fn random_realizable_stream<R: Rng + ?Sized>(
    instance: &ProblemInstance,
    rounds: usize,
    rng: &mut R,
) -> Option<LabeledStream> {
    let mut order: Vec<usize> = (0..instance.hypothesis_count()).collect();
    order.shuffle(rng);
    for h in order {
        let pairs: Vec<(usize, usize)> = (0..instance.instance_count())
            .flat_map(|x| (0..instance.set_count()).map(move |s| (x, s)))
            .filter(|&(x, s)| instance.set(s).contains(instance.output(h, x)))
            .collect();
        if pairs.is_empty() {
            continue;
        }
        let rounds = (0..rounds).map(|_| *pairs.choose(rng).unwrap()).collect();
        return Some(LabeledStream::new(rounds));
    }
    None
}
