//! Dimensions of a hypothesis class under set-valued feedback.
//!
//! Every dimension is computed by the same memoized recursion over version
//! spaces. For a version space `V` and an instance `x`, each feedback set `A`
//! with `V(x, A)` nonempty is a branch with continuation value
//! `dim(V(x, A))`. The dimension is at least `d` when, for some `x`, the
//! branches whose continuation reaches `d - 1` form a collection the learner
//! cannot escape:
//!
//! * Set Littlestone and measure shattering at scale 0: the collection has
//!   empty intersection;
//! * measure shattering at scale `gamma > 0`: the covering game value of the
//!   collection is at most `1 - gamma`;
//! * p-Set Littlestone: at most `p` members of the collection have empty
//!   intersection.
//!
//! The empty version space has dimension `-1`.

mod helly;
mod witness;

pub use helly::{helly_number, HellyNumber};
pub use witness::{validate_witness, WitnessTree};

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::game::{self, GameSolution};
use crate::model::ProblemInstance;
use crate::Rational;

/// Hypotheses of a fixed instance that are still consistent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VersionSpace {
    mask: BitSet,
}

impl VersionSpace {
    pub fn full(instance: &ProblemInstance) -> Self {
        VersionSpace {
            mask: BitSet::full(instance.hypothesis_count()),
        }
    }

    pub fn from_mask(mask: BitSet) -> Self {
        VersionSpace { mask }
    }

    pub fn from_members(instance: &ProblemInstance, members: &[usize]) -> Self {
        VersionSpace {
            mask: BitSet::from_members(instance.hypothesis_count(), members.iter().copied()),
        }
    }

    pub fn mask(&self) -> &BitSet {
        &self.mask
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn len(&self) -> usize {
        self.mask.count()
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter()
    }

    pub fn first(&self) -> Option<usize> {
        self.mask.first()
    }

    pub fn contains(&self, hypothesis: usize) -> bool {
        self.mask.contains(hypothesis)
    }

    /// `V(x, A) = {h in V : h(x) in A}`.
    pub fn restrict(&self, instance: &ProblemInstance, x: usize, set: &BitSet) -> VersionSpace {
        let mut mask = self.mask.clone();
        for h in self.mask.iter() {
            if !set.contains(instance.output(h, x)) {
                mask.remove(h);
            }
        }
        VersionSpace { mask }
    }

    /// `{h in V : h(x) = y}`.
    pub fn restrict_label(&self, instance: &ProblemInstance, x: usize, y: usize) -> VersionSpace {
        let mut mask = self.mask.clone();
        for h in self.mask.iter() {
            if instance.output(h, x) != y {
                mask.remove(h);
            }
        }
        VersionSpace { mask }
    }

    /// Labels `{h(x) : h in V}`.
    pub fn outputs(&self, instance: &ProblemInstance, x: usize) -> BitSet {
        BitSet::from_members(
            instance.label_count(),
            self.mask.iter().map(|h| instance.output(h, x)),
        )
    }
}

/// Which dimension to compute.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Dimension {
    Littlestone,
    SetLittlestone,
    PSetLittlestone(usize),
    MeasureShattering(Rational),
}

impl Dimension {
    fn normalized(&self) -> Dimension {
        match self {
            Dimension::MeasureShattering(g) if g.is_zero() => Dimension::SetLittlestone,
            other => other.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Dimension::PSetLittlestone(p) if *p < 2 => Err(Error::range(
                "p",
                format!("p-Set Littlestone needs p >= 2, got {p}"),
            )),
            Dimension::MeasureShattering(g) if *g < Rational::zero() || *g > Rational::one() => {
                Err(Error::range(
                    "gamma",
                    format!("scale must lie in [0, 1], got {g}"),
                ))
            }
            _ => Ok(()),
        }
    }
}

/// A feedback set that keeps `V(x, A)` nonempty, with its continuation.
#[derive(Clone, Debug)]
pub struct Branch {
    pub set: usize,
    pub version: VersionSpace,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum SpaceKey {
    Mask(BitSet),
    Canonical(Vec<Vec<usize>>),
}

/// Memoizing dimension engine for one instance.
///
/// Not shared across threads; build one engine per worker.
pub struct DimsEngine {
    instance: Arc<ProblemInstance>,
    symmetric: bool,
    memo: HashMap<(Dimension, SpaceKey), i64>,
    values: HashMap<BitSet, Rational>,
    solutions: HashMap<BitSet, GameSolution<Rational>>,
}

impl DimsEngine {
    pub fn new(instance: Arc<ProblemInstance>) -> Self {
        let symmetric = label_symmetric(&instance);
        DimsEngine {
            instance,
            symmetric,
            memo: HashMap::new(),
            values: HashMap::new(),
            solutions: HashMap::new(),
        }
    }

    pub fn from_instance(instance: &ProblemInstance) -> Self {
        Self::new(Arc::new(instance.clone()))
    }

    pub fn instance(&self) -> &ProblemInstance {
        &self.instance
    }

    pub fn shared_instance(&self) -> Arc<ProblemInstance> {
        Arc::clone(&self.instance)
    }

    pub fn full(&self) -> VersionSpace {
        VersionSpace::full(&self.instance)
    }

    pub fn restrict(&self, v: &VersionSpace, x: usize, set: usize) -> VersionSpace {
        v.restrict(&self.instance, x, self.instance.set(set))
    }

    pub fn ldim(&mut self, v: &VersionSpace) -> i64 {
        self.dim(v, &Dimension::Littlestone)
    }

    pub fn sldim(&mut self, v: &VersionSpace) -> i64 {
        self.dim(v, &Dimension::SetLittlestone)
    }

    pub fn psldim(&mut self, v: &VersionSpace, p: usize) -> Result<i64> {
        let kind = Dimension::PSetLittlestone(p);
        kind.validate()?;
        let n = self.instance.set_count();
        if binomial(n, p.min(n)) > 1_000_000 {
            return Err(Error::Guard(format!(
                "C({n}, {p}) exceeds 10^6 candidate families"
            )));
        }
        Ok(self.dim(v, &kind))
    }

    pub fn msdim(&mut self, v: &VersionSpace, gamma: &Rational) -> Result<i64> {
        let kind = Dimension::MeasureShattering(gamma.clone());
        kind.validate()?;
        Ok(self.dim(v, &kind))
    }

    /// Dimension of `v`; `kind` must already be valid.
    pub fn dim(&mut self, v: &VersionSpace, kind: &Dimension) -> i64 {
        if v.is_empty() {
            return -1;
        }
        let kind = kind.normalized();
        let key = (kind.clone(), self.space_key(v));
        if let Some(&d) = self.memo.get(&key) {
            return d;
        }
        let d = match kind {
            Dimension::Littlestone => self.ldim_uncached(v),
            _ => self.shattering_dim(v, &kind),
        };
        self.memo.insert(key, d);
        d
    }

    fn ldim_uncached(&mut self, v: &VersionSpace) -> i64 {
        let mut best = 0;
        for x in 0..self.instance.instance_count() {
            let labels = v.outputs(&self.instance, x);
            if labels.count() < 2 {
                continue;
            }
            let mut values: Vec<i64> = labels
                .iter()
                .map(|y| {
                    let w = v.restrict_label(&self.instance, x, y);
                    self.dim(&w, &Dimension::Littlestone)
                })
                .collect();
            values.sort_unstable_by(|a, b| b.cmp(a));
            best = best.max(values[1] + 1);
        }
        best
    }

    fn shattering_dim(&mut self, v: &VersionSpace, kind: &Dimension) -> i64 {
        let mut best = 0;
        for x in 0..self.instance.instance_count() {
            // None marks a self-loop: V(x, A) = V, whose value is the one being computed.
            let mut conts: Vec<(usize, Option<i64>)> = Vec::new();
            for a in 0..self.instance.set_count() {
                let w = self.restrict(v, x, a);
                if w.is_empty() {
                    continue;
                }
                if w == *v {
                    conts.push((a, None));
                } else {
                    let c = self.dim(&w, kind);
                    conts.push((a, Some(c)));
                }
            }
            loop {
                let d = best + 1;
                if !conts
                    .iter()
                    .any(|(_, c)| matches!(c, Some(c) if *c >= d - 1))
                {
                    break;
                }
                let collection = BitSet::from_members(
                    self.instance.set_count(),
                    conts
                        .iter()
                        .filter(|(_, c)| c.is_none_or(|c| c >= d - 1))
                        .map(|(a, _)| *a),
                );
                if self.shatters(kind, &collection) {
                    best = d;
                } else {
                    break;
                }
            }
        }
        best
    }

    /// Whether the learner cannot escape `collection` (a mask over set indices).
    pub fn shatters(&mut self, kind: &Dimension, collection: &BitSet) -> bool {
        if collection.is_empty() {
            return false;
        }
        match kind.normalized() {
            Dimension::Littlestone | Dimension::SetLittlestone => {
                self.collection_intersection(collection).is_empty()
            }
            Dimension::MeasureShattering(gamma) => {
                self.game_value(collection) <= Rational::one() - gamma
            }
            Dimension::PSetLittlestone(p) => self.empty_subfamily(collection, p).is_some(),
        }
    }

    fn collection_intersection(&self, collection: &BitSet) -> BitSet {
        BitSet::intersect_all(
            self.instance.label_count(),
            collection.iter().map(|a| self.instance.set(a)),
        )
    }

    /// Smallest-index (lexicographic) family of at most `p` members of the
    /// collection with empty intersection.
    pub fn empty_subfamily(&self, collection: &BitSet, p: usize) -> Option<Vec<usize>> {
        fn search(
            inst: &ProblemInstance,
            members: &[usize],
            start: usize,
            acc: &BitSet,
            chosen: &mut Vec<usize>,
            p: usize,
        ) -> bool {
            if chosen.len() == p {
                return false;
            }
            for i in start..members.len() {
                let next = acc.intersection(inst.set(members[i]));
                chosen.push(members[i]);
                if next.is_empty() || search(inst, members, i + 1, &next, chosen, p) {
                    return true;
                }
                chosen.pop();
            }
            false
        }
        let members = collection.to_vec();
        let mut chosen = Vec::new();
        let full = BitSet::full(self.instance.label_count());
        search(&self.instance, &members, 0, &full, &mut chosen, p).then_some(chosen)
    }

    /// Exact covering-game value of a collection of set indices (cached).
    pub fn game_value(&mut self, collection: &BitSet) -> Rational {
        if let Some(v) = self.values.get(collection) {
            return v.clone();
        }
        let sets = self.collection_sets(collection);
        let v: Rational = game::game_value(self.instance.label_count(), &sets);
        self.values.insert(collection.clone(), v.clone());
        v
    }

    /// Full game solution of a nonempty collection of set indices (cached).
    pub fn game_solution(&mut self, collection: &BitSet) -> GameSolution<Rational> {
        if let Some(s) = self.solutions.get(collection) {
            return s.clone();
        }
        let sets = self.collection_sets(collection);
        let sol: GameSolution<Rational> = game::solve_game(self.instance.label_count(), &sets);
        self.values.insert(collection.clone(), sol.value.clone());
        self.solutions.insert(collection.clone(), sol.clone());
        sol
    }

    fn collection_sets(&self, collection: &BitSet) -> Vec<BitSet> {
        collection
            .iter()
            .map(|a| self.instance.set(a).clone())
            .collect()
    }

    /// All branches at `x` with their continuation values.
    pub fn branches(&mut self, v: &VersionSpace, x: usize, kind: &Dimension) -> Vec<Branch> {
        let mut out = Vec::new();
        for a in 0..self.instance.set_count() {
            let w = self.restrict(v, x, a);
            if w.is_empty() {
                continue;
            }
            let value = self.dim(&w, kind);
            out.push(Branch {
                set: a,
                version: w,
                value,
            });
        }
        out
    }

    /// Feedback sets consistent with some hypothesis of `v` at `x` (the sets `A` with `V(x, A)` nonempty).
    pub fn live_sets(&self, v: &VersionSpace, x: usize) -> BitSet {
        let outputs = v.outputs(&self.instance, x);
        BitSet::from_members(
            self.instance.set_count(),
            (0..self.instance.set_count()).filter(|&a| self.instance.set(a).intersects(&outputs)),
        )
    }

    fn space_key(&self, v: &VersionSpace) -> SpaceKey {
        if !self.symmetric {
            return SpaceKey::Mask(v.mask().clone());
        }
        let inst = &self.instance;
        let mut rows: Vec<&Vec<usize>> =
            v.members().map(|h| &inst.hypotheses().rows()[h]).collect();
        rows.sort();
        let mut relabel: HashMap<usize, usize> = HashMap::new();
        let mut canon: Vec<Vec<usize>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|y| {
                        let next = relabel.len();
                        *relabel.entry(*y).or_insert(next)
                    })
                    .collect()
            })
            .collect();
        canon.sort();
        SpaceKey::Canonical(canon)
    }
}

/// Whether the set system is invariant under every label permutation, i.e.
/// each occurring set size contributes all subsets of that size.
fn label_symmetric(instance: &ProblemInstance) -> bool {
    let m = instance.label_count();
    let mut counts = vec![0u128; m + 1];
    for s in instance.sets() {
        counts[s.count()] += 1;
    }
    counts
        .iter()
        .enumerate()
        .all(|(k, &c)| c == 0 || c == binomial(m, k))
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
        if acc == u128::MAX {
            break;
        }
    }
    acc
}

/// Outcome of comparing the three dimensions of a class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub p: usize,
    pub gamma: String,
    pub psl: i64,
    pub ms: i64,
    pub sl: i64,
    pub helly: usize,
    pub sandwich: bool,
    /// Present when `p` equals the Helly number: whether all three coincide.
    pub collapse: Option<bool>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.sandwich && self.collapse.unwrap_or(true)
    }
}

/// Checks `SL_p <= MS_gamma <= SL`, and equality when `p` is the Helly number.
pub fn check_relations(
    engine: &mut DimsEngine,
    p: usize,
    gamma: &Rational,
) -> Result<RelationReport> {
    if p < 2 {
        return Err(Error::range("p", "relations need p >= 2"));
    }
    if *gamma < Rational::zero() || gamma * Rational::from_integer(p.into()) > Rational::one() {
        return Err(Error::range("gamma", "relations need 0 <= gamma <= 1/p"));
    }
    let v = engine.full();
    let psl = engine.psldim(&v, p)?;
    let ms = engine.msdim(&v, gamma)?;
    let sl = engine.sldim(&v);
    let helly = helly_number(engine.instance().sets());
    let collapse = (!helly.vacuous && helly.value == p).then_some(psl == ms && ms == sl);
    Ok(RelationReport {
        p,
        gamma: crate::scalar::format_rational(gamma),
        psl,
        ms,
        sl,
        helly: helly.value,
        sandwich: psl <= ms && ms <= sl,
        collapse,
    })
}
