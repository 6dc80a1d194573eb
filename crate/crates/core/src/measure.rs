//! Finite measures over the label space.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Measure<T> {
    weights: Vec<T>,
}

impl<T: Scalar> Measure<T> {
    pub fn from_weights(weights: Vec<T>) -> Self {
        Measure { weights }
    }

    pub fn point(label_count: usize, label: usize) -> Self {
        let mut weights = vec![T::zero(); label_count];
        weights[label] = T::one();
        Measure { weights }
    }

    /// Uniform over the members of `support`.
    ///
    /// Panics if `support` is empty.
    pub fn uniform_on(support: &BitSet) -> Self {
        let n = support.count();
        assert!(n > 0, "uniform measure on an empty set");
        let w = T::one() / T::from_usize(n).unwrap();
        let weights = (0..support.width())
            .map(|y| {
                if support.contains(y) {
                    w.clone()
                } else {
                    T::zero()
                }
            })
            .collect();
        Measure { weights }
    }

    pub fn uniform(label_count: usize) -> Self {
        Self::uniform_on(&BitSet::full(label_count))
    }

    pub fn label_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn weight(&self, label: usize) -> &T {
        &self.weights[label]
    }

    pub fn mass(&self, set: &BitSet) -> T {
        set.iter()
            .fold(T::zero(), |acc, y| acc + self.weights[y].clone())
    }

    /// Mass outside `set`, i.e. the expected 0-1 loss of predicting from this measure.
    pub fn miss_mass(&self, set: &BitSet) -> T {
        T::one() - self.mass(set)
    }

    pub fn total(&self) -> T {
        self.weights
            .iter()
            .fold(T::zero(), |acc, w| acc + w.clone())
    }

    /// Nonnegative and summing to one (within the scalar's tolerance).
    pub fn is_distribution(&self) -> bool {
        self.weights
            .iter()
            .all(|w| *w >= T::zero() || w.is_negligible())
            && (self.total() - T::one()).is_negligible()
    }

    pub fn support(&self) -> BitSet {
        BitSet::from_members(
            self.weights.len(),
            self.weights
                .iter()
                .enumerate()
                .filter(|(_, w)| w.is_positive_strict())
                .map(|(y, _)| y),
        )
    }

    /// Single label carrying all the mass, if any.
    pub fn as_point(&self) -> Option<usize> {
        let support = self.support();
        (support.count() == 1).then(|| support.first().unwrap())
    }

    /// Smallest label of maximal weight.
    pub fn mode(&self) -> usize {
        let mut best = 0;
        for (y, w) in self.weights.iter().enumerate() {
            if *w > self.weights[best] {
                best = y;
            }
        }
        best
    }

    pub fn to_f64(&self) -> Measure<f64> {
        Measure {
            weights: self
                .weights
                .iter()
                .map(|w| w.to_f64().unwrap_or(f64::NAN))
                .collect(),
        }
    }

    /// Draws a label, using floating-point weights.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let weights: Vec<f64> = self
            .weights
            .iter()
            .map(|w| w.to_f64().unwrap_or(0.0).max(0.0))
            .collect();
        let total: f64 = weights.iter().sum();
        let mut u = rng.gen::<f64>() * total;
        let mut last = 0;
        for (y, w) in weights.iter().enumerate() {
            if *w <= 0.0 {
                continue;
            }
            last = y;
            if u < *w {
                return y;
            }
            u -= w;
        }
        last
    }

    /// Convex combination `sum_i coeffs[i] * measures[i]`.
    pub fn mixture(coeffs: &[T], measures: &[&Measure<T>]) -> Self {
        assert_eq!(coeffs.len(), measures.len());
        let m = measures.first().map_or(0, |mu| mu.label_count());
        let mut weights = vec![T::zero(); m];
        for (c, mu) in coeffs.iter().zip(measures) {
            for (w, v) in weights.iter_mut().zip(&mu.weights) {
                *w = w.clone() + c.clone() * v.clone();
            }
        }
        Measure { weights }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use crate::Rational;

    #[test]
    fn uniform_masses() {
        let mu: Measure<Rational> = Measure::uniform(6);
        assert!(mu.is_distribution());
        assert_eq!(mu.weight(4), &rational(1, 6));
        let s = BitSet::from_members(6, [0, 3, 4]);
        assert_eq!(mu.mass(&s), rational(1, 2));
        assert_eq!(mu.miss_mass(&s), rational(1, 2));
    }

    #[test]
    fn point_and_mode() {
        let mu: Measure<Rational> = Measure::point(4, 2);
        assert_eq!(mu.as_point(), Some(2));
        assert_eq!(mu.mode(), 2);
        let u: Measure<Rational> = Measure::uniform(3);
        assert_eq!(u.as_point(), None);
        assert_eq!(u.mode(), 0);
    }

    #[test]
    fn mixtures_stay_normalized() {
        let a: Measure<Rational> = Measure::point(3, 0);
        let b: Measure<Rational> = Measure::uniform(3);
        let mix = Measure::mixture(&[rational(1, 4), rational(3, 4)], &[&a, &b]);
        assert!(mix.is_distribution());
        assert_eq!(mix.weight(0), &rational(1, 2));
    }
}
