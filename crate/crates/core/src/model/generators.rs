//! Application set systems: rankings, intervals, Hamming balls, (co)singletons.

use super::ProblemInstance;
use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Hypotheses for a generated instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HypothesisSpec {
    /// Every constant hypothesis over `instances` instances.
    Constants { instances: usize },
    /// Explicit table, one row per hypothesis.
    Table(Vec<Vec<usize>>),
}

impl Default for HypothesisSpec {
    fn default() -> Self {
        HypothesisSpec::Constants { instances: 1 }
    }
}

impl HypothesisSpec {
    fn build(&self, label_count: usize) -> Vec<Vec<usize>> {
        match self {
            HypothesisSpec::Constants { instances } => {
                (0..label_count).map(|y| vec![y; *instances]).collect()
            }
            HypothesisSpec::Table(rows) => rows.clone(),
        }
    }
}

fn assemble(
    label_count: usize,
    sets: Vec<BitSet>,
    hypotheses: &HypothesisSpec,
) -> Result<ProblemInstance> {
    let rows = hypotheses.build(label_count);
    let k = rows.first().map_or(1, Vec::len).max(1);
    let names = (0..k).map(|j| format!("x{j}")).collect();
    ProblemInstance::new(label_count, sets, names, rows)
}

/// All permutations of `K` items as rank vectors (`pi[i]` is the rank of item `i`,
/// ranks `1..=K`), in lexicographic order. Label `j` is the `j`-th vector.
pub fn ranking_labels(k: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for r in 0..used.len() {
            if !used[r] {
                used[r] = true;
                prefix.push(r + 1);
                extend(prefix, used, out);
                prefix.pop();
                used[r] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
    out
}

pub fn ranking_label_index(rank_vector: &[usize]) -> Option<usize> {
    ranking_labels(rank_vector.len())
        .iter()
        .position(|pi| pi == rank_vector)
}

/// `1` iff some less relevant item is ranked strictly above a more relevant one.
pub fn ranking_loss(pi: &[usize], r: &[bool]) -> u8 {
    assert_eq!(
        pi.len(),
        r.len(),
        "rank vector and relevance lengths differ"
    );
    for i in 0..pi.len() {
        for j in 0..pi.len() {
            if !r[i] && r[j] && pi[i] < pi[j] {
                return 1;
            }
        }
    }
    0
}

/// Zero-loss permutations for relevance `r`: relevant items fill the top `|r|` ranks.
pub fn ranking_set(labels: &[Vec<usize>], r: &[bool]) -> BitSet {
    let top = r.iter().filter(|&&b| b).count();
    BitSet::from_members(
        labels.len(),
        labels
            .iter()
            .enumerate()
            .filter(|(_, pi)| pi.iter().zip(r).all(|(&rank, &rel)| !rel || rank <= top))
            .map(|(j, _)| j),
    )
}

pub fn gen_ranking_instance(k: usize, hypotheses: &HypothesisSpec) -> Result<ProblemInstance> {
    if !(2..=5).contains(&k) {
        return Err(Error::range(
            "K",
            format!("ranking needs 2 <= K <= 5, got {k}"),
        ));
    }
    let labels = ranking_labels(k);
    let sets = (0u32..1 << k)
        .map(|bits| {
            let r: Vec<bool> = (0..k).map(|i| bits >> i & 1 == 1).collect();
            ranking_set(&labels, &r)
        })
        .collect();
    assemble(labels.len(), sets, hypotheses)
}

/// Contiguous grid intervals `[a, b]`, `a <= b`.
pub fn gen_interval_instance(grid: usize, hypotheses: &HypothesisSpec) -> Result<ProblemInstance> {
    if !(2..=256).contains(&grid) {
        return Err(Error::range(
            "G",
            format!("interval grid needs 2 <= G <= 256, got {grid}"),
        ));
    }
    let mut sets = Vec::new();
    for a in 0..grid {
        for b in a..grid {
            sets.push(BitSet::from_members(grid, a..=b));
        }
    }
    assemble(grid, sets, hypotheses)
}

pub fn hamming_distance(a: usize, b: usize) -> usize {
    (a ^ b).count_ones() as usize
}

/// Balls of radius `q` in `{0,1}^K`; label `y` is the bitstring with bit `i` = item `i`.
pub fn gen_hamming_instance(
    k: usize,
    q: usize,
    hypotheses: &HypothesisSpec,
) -> Result<ProblemInstance> {
    if !(2..=6).contains(&k) {
        return Err(Error::range(
            "K",
            format!("Hamming needs 2 <= K <= 6, got {k}"),
        ));
    }
    if q == 0 || q >= k {
        return Err(Error::range(
            "q",
            format!("Hamming needs 1 <= q <= K-1, got {q}"),
        ));
    }
    let m = 1usize << k;
    let sets = (0..m)
        .map(|y| BitSet::from_members(m, (0..m).filter(|&z| hamming_distance(y, z) <= q)))
        .collect();
    assemble(m, sets, hypotheses)
}

/// Complements of singletons over `0..M`, with every constant hypothesis.
pub fn gen_cosingleton_instance(m: usize) -> Result<ProblemInstance> {
    if m < 2 {
        return Err(Error::range(
            "M",
            format!("cosingleton needs M >= 2, got {m}"),
        ));
    }
    let sets = (0..m)
        .map(|y| {
            let mut s = BitSet::full(m);
            s.remove(y);
            s
        })
        .collect();
    assemble(m, sets, &HypothesisSpec::default())
}

pub fn gen_singleton_instance(m: usize, hypotheses: &HypothesisSpec) -> Result<ProblemInstance> {
    if m == 0 {
        return Err(Error::range("m", "singleton system needs m >= 1"));
    }
    let sets = (0..m).map(|y| BitSet::from_members(m, [y])).collect();
    assemble(m, sets, hypotheses)
}

/// Six labels, sets `{0,3,4}, {1,4,5}, {2,3,5}`, one instance, constants `0, 1, 2`.
pub fn example3() -> ProblemInstance {
    ProblemInstance::from_lists(
        6,
        &[vec![0, 3, 4], vec![1, 4, 5], vec![2, 3, 5]],
        vec![vec![0], vec![1], vec![2]],
    )
    .expect("fixed instance is valid")
}
