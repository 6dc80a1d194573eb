use serde::Serialize;

use crate::bitset::BitSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HellyNumber {
    pub value: usize,
    /// No subfamily has empty intersection; every `p` satisfies the definition.
    pub vacuous: bool,
}

/// Largest inclusion-minimal subfamily with empty intersection.
///
/// Families are grown in index order while their intersection stays nonempty.
/// A minimal family of size `k` needs `k` distinct private witnesses, so a
/// partial family `F` with running intersection `I` extends to at most
/// `|F| + |I|` sets; that bound prunes the search.
pub fn helly_number(sets: &[BitSet]) -> HellyNumber {
    let Some(first) = sets.first() else {
        return HellyNumber {
            value: 0,
            vacuous: true,
        };
    };
    let width = first.width();
    if !BitSet::intersect_all(width, sets).is_empty() {
        return HellyNumber {
            value: 0,
            vacuous: true,
        };
    }
    let all: Vec<usize> = (0..sets.len()).collect();
    if is_minimal(sets, &all) {
        return HellyNumber {
            value: sets.len(),
            vacuous: false,
        };
    }
    let mut best = 0;
    let mut chosen = Vec::new();
    grow(sets, 0, &BitSet::full(width), &mut chosen, &mut best);
    HellyNumber {
        value: best,
        vacuous: false,
    }
}

fn grow(sets: &[BitSet], start: usize, acc: &BitSet, chosen: &mut Vec<usize>, best: &mut usize) {
    if chosen.len() + acc.count() <= *best {
        return;
    }
    for i in start..sets.len() {
        let next = acc.intersection(&sets[i]);
        if next == *acc && !chosen.is_empty() {
            // sets[i] is redundant given the chosen ones; no minimal family contains both
            continue;
        }
        chosen.push(i);
        if next.is_empty() {
            if chosen.len() > *best && is_minimal(sets, chosen) {
                *best = chosen.len();
            }
        } else {
            grow(sets, i + 1, &next, chosen, best);
        }
        chosen.pop();
    }
}

/// Empty intersection, and removing any single member makes it nonempty.
fn is_minimal(sets: &[BitSet], family: &[usize]) -> bool {
    let width = sets[family[0]].width();
    (0..family.len()).all(|skip| {
        let rest = family
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != skip)
            .map(|(_, &i)| &sets[i]);
        !BitSet::intersect_all(width, rest).is_empty()
    }) && BitSet::intersect_all(width, family.iter().map(|&i| &sets[i])).is_empty()
}
