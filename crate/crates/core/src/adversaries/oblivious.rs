use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Adversary;
use crate::error::{Error, Result};
use crate::learners::Prediction;
use crate::model::{LabeledStream, ProblemInstance};

/// Replays a fixed stream.
pub struct ScriptedAdversary {
    stream: LabeledStream,
    t: usize,
}

impl ScriptedAdversary {
    pub fn new(instance: &ProblemInstance, stream: LabeledStream) -> Result<Self> {
        instance.check_stream(&stream)?;
        Ok(ScriptedAdversary { stream, t: 0 })
    }
}

impl Adversary for ScriptedAdversary {
    fn name(&self) -> &'static str {
        "scripted"
    }

    fn next_instance(&mut self) -> Result<Option<usize>> {
        Ok(self.stream.rounds().get(self.t).map(|&(x, _)| x))
    }

    fn reveal(&mut self, _prediction: &Prediction) -> Result<usize> {
        let &(_, s) = self
            .stream
            .rounds()
            .get(self.t)
            .ok_or_else(|| Error::Config("scripted stream exhausted".into()))?;
        self.t += 1;
        Ok(s)
    }

    fn keeps_realizable(&self) -> bool {
        false
    }
}

/// Independent rounds drawn from a fixed weighting of `(instance, set)` pairs.
pub struct IidAdversary {
    pairs: Vec<(usize, usize)>,
    weights: Vec<f64>,
    rng: ChaCha8Rng,
    pending: Option<(usize, usize)>,
}

impl IidAdversary {
    pub fn new(
        instance: &ProblemInstance,
        pairs: Vec<((usize, usize), f64)>,
        seed: u64,
    ) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Config(
                "i.i.d. adversary needs at least one pair".into(),
            ));
        }
        for &((x, s), w) in &pairs {
            if x >= instance.instance_count() || s >= instance.set_count() {
                return Err(Error::range("pair", format!("({x}, {s}) out of range")));
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::range(
                    "weight",
                    format!("weight {w} is not a finite nonnegative number"),
                ));
            }
        }
        let (pairs, weights): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        if weights.iter().sum::<f64>() <= 0.0 {
            return Err(Error::range("weight", "weights sum to zero"));
        }
        Ok(IidAdversary {
            pairs,
            weights,
            rng: ChaCha8Rng::seed_from_u64(seed),
            pending: None,
        })
    }

    /// Uniform over every `(instance, set)` pair.
    pub fn uniform(instance: &ProblemInstance, seed: u64) -> Self {
        let pairs = (0..instance.instance_count())
            .flat_map(|x| (0..instance.set_count()).map(move |s| ((x, s), 1.0)))
            .collect();
        Self::new(instance, pairs, seed).expect("uniform pairs are valid")
    }

    fn draw(&mut self) -> (usize, usize) {
        let total: f64 = self.weights.iter().sum();
        let mut u = self.rng.gen::<f64>() * total;
        for (p, w) in self.pairs.iter().zip(&self.weights) {
            if *w > 0.0 && u < *w {
                return *p;
            }
            u -= w;
        }
        let last = self.weights.iter().rposition(|w| *w > 0.0).unwrap();
        self.pairs[last]
    }
}

impl Adversary for IidAdversary {
    fn name(&self) -> &'static str {
        "iid"
    }

    fn next_instance(&mut self) -> Result<Option<usize>> {
        let p = self.draw();
        self.pending = Some(p);
        Ok(Some(p.0))
    }

    fn reveal(&mut self, _prediction: &Prediction) -> Result<usize> {
        self.pending
            .take()
            .map(|(_, s)| s)
            .ok_or_else(|| Error::Config("reveal called before next_instance".into()))
    }

    fn keeps_realizable(&self) -> bool {
        false
    }
}
