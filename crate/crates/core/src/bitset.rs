//! Fixed-width membership masks, used both for label sets and version spaces.

use std::cmp::Ordering;
use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn empty(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut set = BitSet::empty(len);
        for i in 0..len {
            set.insert(i);
        }
        set
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(len: usize, members: I) -> Self {
        let mut set = BitSet::empty(len);
        for i in members {
            set.insert(i);
        }
        set
    }

    /// Width of the mask (not the number of members).
    pub fn width(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} outside width {}", self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + bit)
                }
            })
        })
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn complement(&self) -> BitSet {
        let mut out = BitSet::full(self.len);
        for (a, b) in out.words.iter_mut().zip(&self.words) {
            *a &= !b;
        }
        out
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Intersection of a family; the full mask of width `len` for an empty family.
    pub fn intersect_all<'a, I: IntoIterator<Item = &'a BitSet>>(len: usize, sets: I) -> BitSet {
        let mut acc = BitSet::full(len);
        for s in sets {
            acc.intersect_with(s);
        }
        acc
    }
}

/// Lexicographic order on the sorted member lists.
impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter()).then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_membership() {
        let mut s = BitSet::empty(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.to_vec(), vec![0, 64, 129]);
        assert_eq!(s.count(), 3);
        s.remove(64);
        assert!(!s.contains(64));
        assert_eq!(s.complement().count(), 128);
    }

    #[test]
    fn member_order() {
        let a = BitSet::from_members(6, [0, 3, 4]);
        let b = BitSet::from_members(6, [1, 4, 5]);
        let c = BitSet::from_members(6, [0, 3]);
        assert!(c < a && a < b);
    }

    proptest! {
        #[test]
        fn set_algebra(xs in proptest::collection::vec(0usize..100, 0..30),
                       ys in proptest::collection::vec(0usize..100, 0..30)) {
            let a = BitSet::from_members(100, xs.iter().copied());
            let b = BitSet::from_members(100, ys.iter().copied());
            let i = a.intersection(&b);
            for k in 0..100 {
                prop_assert_eq!(i.contains(k), a.contains(k) && b.contains(k));
                prop_assert_eq!(a.complement().contains(k), !a.contains(k));
            }
            prop_assert_eq!(a.intersects(&b), !i.is_empty());
            prop_assert!(i.is_subset(&a) && i.is_subset(&b));
        }
    }
}
