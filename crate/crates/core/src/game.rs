//! Covering games: the learner picks a measure over labels, the adversary
//! picks a set from a collection, the payoff is the measure's mass on the set.

use crate::bitset::BitSet;
use crate::lp::{LinearProgram, Relation};
use crate::measure::Measure;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct GameSolution<T> {
    /// `max_mu min_A mu(A)`.
    pub value: T,
    /// An optimal learner measure, the lexicographically largest one.
    pub strategy: Measure<T>,
    /// An optimal adversary mixture over the collection (dual certificate).
    pub adversary: Vec<T>,
}

/// Value of the covering game.
///
/// Labels with identical membership patterns are merged and dominated patterns
/// dropped before the linear program is built. Panics on an empty collection.
pub fn game_value<T: Scalar>(label_count: usize, collection: &[BitSet]) -> T {
    assert!(!collection.is_empty(), "game over an empty collection");
    if !BitSet::intersect_all(label_count, collection).is_empty() {
        return T::one();
    }
    let n = collection.len();
    let mut patterns: Vec<BitSet> = Vec::new();
    for y in 0..label_count {
        let p = BitSet::from_members(n, (0..n).filter(|&i| collection[i].contains(y)));
        if !p.is_empty() {
            patterns.push(p);
        }
    }
    patterns.sort();
    patterns.dedup();
    let maximal: Vec<&BitSet> = patterns
        .iter()
        .filter(|p| !patterns.iter().any(|q| q != *p && p.is_subset(q)))
        .collect();

    // variables: one weight per pattern, then the value v
    let k = maximal.len();
    let mut objective = vec![T::zero(); k + 1];
    objective[k] = T::one();
    let mut lp = LinearProgram::maximize(objective);
    for i in 0..n {
        let mut row: Vec<T> = maximal
            .iter()
            .map(|p| if p.contains(i) { T::one() } else { T::zero() })
            .collect();
        row.push(-T::one());
        lp.constrain(row, Relation::Ge, T::zero());
    }
    let mut simplex = vec![T::one(); k];
    simplex.push(T::zero());
    lp.constrain(simplex, Relation::Eq, T::one());
    let (_, value) = lp
        .solve()
        .optimal()
        .expect("covering game LP is feasible and bounded");
    value
}

/// Full solution: value, lexicographically largest optimal measure, and an
/// optimal adversary mixture.
pub fn solve_game<T: Scalar>(label_count: usize, collection: &[BitSet]) -> GameSolution<T> {
    let value = game_value::<T>(label_count, collection);
    let strategy = lex_largest_strategy(label_count, collection, &value);
    let adversary = adversary_mixture(label_count, collection);
    GameSolution {
        value,
        strategy,
        adversary,
    }
}

fn lex_largest_strategy<T: Scalar>(
    label_count: usize,
    collection: &[BitSet],
    value: &T,
) -> Measure<T> {
    let mut fixed: Vec<T> = Vec::with_capacity(label_count);
    let mut placed = T::zero();
    for y in 0..label_count {
        let left = T::one() - placed.clone();
        if left.is_negligible() {
            fixed.push(T::zero());
            continue;
        }
        if y + 1 == label_count {
            fixed.push(left);
            break;
        }
        // variables: weights of labels y..m
        let free = label_count - y;
        let mut objective = vec![T::zero(); free];
        objective[0] = T::one();
        let mut lp = LinearProgram::maximize(objective);
        for set in collection {
            let already = set
                .iter()
                .filter(|&z| z < y)
                .fold(T::zero(), |acc, z| acc + fixed[z].clone());
            let row = (y..label_count)
                .map(|z| if set.contains(z) { T::one() } else { T::zero() })
                .collect();
            lp.constrain(row, Relation::Ge, value.clone() - already);
        }
        lp.constrain(vec![T::one(); free], Relation::Eq, left);
        let (x, best) = lp
            .solve()
            .optimal()
            .expect("an optimal measure extends every fixed prefix");
        let best = if best < T::zero() { T::zero() } else { best };
        debug_assert!(x[0] == best || T::tolerance() > T::zero());
        placed = placed + best.clone();
        fixed.push(best);
    }
    Measure::from_weights(fixed)
}

fn adversary_mixture<T: Scalar>(label_count: usize, collection: &[BitSet]) -> Vec<T> {
    // minimize w subject to sum_{A ∋ y} q_A <= w for every label, q in the simplex
    let n = collection.len();
    let mut objective = vec![T::zero(); n + 1];
    objective[n] = -T::one();
    let mut lp = LinearProgram::maximize(objective);
    for y in 0..label_count {
        let mut row: Vec<T> = collection
            .iter()
            .map(|a| if a.contains(y) { T::one() } else { T::zero() })
            .collect();
        row.push(-T::one());
        lp.constrain(row, Relation::Le, T::zero());
    }
    let mut simplex = vec![T::one(); n];
    simplex.push(T::zero());
    lp.constrain(simplex, Relation::Eq, T::one());
    let (mut x, _) = lp
        .solve()
        .optimal()
        .expect("adversary LP is feasible and bounded");
    x.truncate(n);
    x
}

/// Largest coverage `sum_{A ∋ y} q_A` over labels: the value the mixture `q` certifies from above.
pub fn certified_upper_bound<T: Scalar>(label_count: usize, collection: &[BitSet], q: &[T]) -> T {
    (0..label_count)
        .map(|y| {
            collection
                .iter()
                .zip(q)
                .filter(|(a, _)| a.contains(y))
                .fold(T::zero(), |acc, (_, w)| acc + w.clone())
        })
        .fold(T::zero(), |acc, c| if c > acc { c } else { acc })
}

/// `min_A mu(A)` over the collection.
pub fn guaranteed_mass<T: Scalar>(mu: &Measure<T>, collection: &[BitSet]) -> T {
    let mut best: Option<T> = None;
    for a in collection {
        let m = mu.mass(a);
        if best.as_ref().is_none_or(|b| m < *b) {
            best = Some(m);
        }
    }
    best.unwrap_or_else(T::one)
}
