//! Finite learning problems: labels, feedback sets, instances and hypotheses.

mod document;
mod generators;

pub use document::{load_instance, load_stream, InstanceDocument};
pub use generators::{
    example3, gen_cosingleton_instance, gen_hamming_instance, gen_interval_instance,
    gen_ranking_instance, gen_singleton_instance, hamming_distance, ranking_label_index,
    ranking_labels, ranking_loss, ranking_set, HypothesisSpec,
};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Labels `0..size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LabelSpace {
    size: usize,
}

impl LabelSpace {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::parse("labels", "label space must be nonempty"));
        }
        Ok(LabelSpace { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

/// Deduplicated, canonically ordered family of nonempty label sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetSystem {
    label_count: usize,
    sets: Vec<BitSet>,
}

impl SetSystem {
    pub fn new(label_count: usize, sets: Vec<BitSet>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::parse("sets", "set system must be nonempty"));
        }
        for (i, s) in sets.iter().enumerate() {
            if s.width() != label_count {
                return Err(Error::parse(
                    format!("sets[{i}]"),
                    format!(
                        "mask width {} differs from label count {label_count}",
                        s.width()
                    ),
                ));
            }
            if s.is_empty() {
                return Err(Error::parse(format!("sets[{i}]"), "empty feedback set"));
            }
        }
        let mut sets = sets;
        sets.sort();
        sets.dedup();
        Ok(SetSystem { label_count, sets })
    }

    pub fn label_count(&self) -> usize {
        self.label_count
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[BitSet] {
        &self.sets
    }

    pub fn get(&self, index: usize) -> &BitSet {
        &self.sets[index]
    }

    pub fn index_of(&self, set: &BitSet) -> Option<usize> {
        self.sets.binary_search(set).ok()
    }
}

/// Rows are hypotheses, columns are instances; entries are labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HypothesisClass {
    rows: Vec<Vec<usize>>,
}

impl HypothesisClass {
    /// Validates shape and label range and removes duplicate rows, keeping first occurrences.
    pub fn new(rows: Vec<Vec<usize>>, instance_count: usize, label_count: usize) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::parse(
                "hypotheses",
                "hypothesis class must be nonempty",
            ));
        }
        let mut kept: Vec<Vec<usize>> = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != instance_count {
                return Err(Error::parse(
                    format!("hypotheses[{i}]"),
                    format!("expected {instance_count} entries, found {}", row.len()),
                ));
            }
            if let Some(&y) = row.iter().find(|&&y| y >= label_count) {
                return Err(Error::parse(
                    format!("hypotheses[{i}]"),
                    format!("label {y} out of range 0..{label_count}"),
                ));
            }
            if !kept.contains(&row) {
                kept.push(row);
            }
        }
        Ok(HypothesisClass { rows: kept })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn output(&self, hypothesis: usize, instance: usize) -> usize {
        self.rows[hypothesis][instance]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProblemInstance {
    label_space: LabelSpace,
    set_system: SetSystem,
    instance_names: Vec<String>,
    hypotheses: HypothesisClass,
}

impl ProblemInstance {
    pub fn new(
        label_count: usize,
        sets: Vec<BitSet>,
        instance_names: Vec<String>,
        hypotheses: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let label_space = LabelSpace::new(label_count)?;
        if instance_names.is_empty() {
            return Err(Error::parse("instances", "instance space must be nonempty"));
        }
        let set_system = SetSystem::new(label_count, sets)?;
        let hypotheses = HypothesisClass::new(hypotheses, instance_names.len(), label_count)?;
        Ok(ProblemInstance {
            label_space,
            set_system,
            instance_names,
            hypotheses,
        })
    }

    /// Builds an instance from set member lists, with instances named `x0, x1, ...`.
    pub fn from_lists(
        label_count: usize,
        sets: &[Vec<usize>],
        hypotheses: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let k = hypotheses.first().map_or(1, |r| r.len());
        let names = (0..k).map(|j| format!("x{j}")).collect();
        let masks = sets_from_lists(label_count, sets)?;
        Self::new(label_count, masks, names, hypotheses)
    }

    pub fn label_space(&self) -> LabelSpace {
        self.label_space
    }

    pub fn label_count(&self) -> usize {
        self.label_space.size()
    }

    pub fn set_system(&self) -> &SetSystem {
        &self.set_system
    }

    pub fn sets(&self) -> &[BitSet] {
        self.set_system.sets()
    }

    pub fn set(&self, index: usize) -> &BitSet {
        self.set_system.get(index)
    }

    pub fn set_count(&self) -> usize {
        self.set_system.len()
    }

    pub fn instance_names(&self) -> &[String] {
        &self.instance_names
    }

    pub fn instance_count(&self) -> usize {
        self.instance_names.len()
    }

    pub fn hypotheses(&self) -> &HypothesisClass {
        &self.hypotheses
    }

    pub fn hypothesis_count(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn output(&self, hypothesis: usize, instance: usize) -> usize {
        self.hypotheses.output(hypothesis, instance)
    }

    /// Number of rounds of `stream` on which `hypothesis` misses the revealed set.
    pub fn hypothesis_loss(&self, hypothesis: usize, stream: &LabeledStream) -> usize {
        stream
            .rounds()
            .iter()
            .filter(|&&(x, s)| !self.set(s).contains(self.output(hypothesis, x)))
            .count()
    }

    /// `min_h` cumulative loss over the class.
    pub fn comparator_loss(&self, stream: &LabeledStream) -> usize {
        (0..self.hypothesis_count())
            .map(|h| self.hypothesis_loss(h, stream))
            .min()
            .unwrap_or(0)
    }

    pub fn check_stream(&self, stream: &LabeledStream) -> Result<()> {
        for (t, &(x, s)) in stream.rounds().iter().enumerate() {
            if x >= self.instance_count() {
                return Err(Error::parse(
                    format!("stream[{t}]"),
                    format!("instance index {x} out of range"),
                ));
            }
            if s >= self.set_count() {
                return Err(Error::parse(
                    format!("stream[{t}]"),
                    format!("set index {s} out of range"),
                ));
            }
        }
        Ok(())
    }

    pub fn to_document(&self) -> InstanceDocument {
        InstanceDocument {
            labels: self.label_count(),
            sets: self.sets().iter().map(BitSet::to_vec).collect(),
            instances: self.instance_names.clone(),
            hypotheses: self.hypotheses.rows().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("instance documents serialize")
    }
}

pub(crate) fn sets_from_lists(label_count: usize, sets: &[Vec<usize>]) -> Result<Vec<BitSet>> {
    sets.iter()
        .enumerate()
        .map(|(i, members)| {
            if let Some(&y) = members.iter().find(|&&y| y >= label_count) {
                return Err(Error::parse(
                    format!("sets[{i}]"),
                    format!("label {y} out of range 0..{label_count}"),
                ));
            }
            Ok(BitSet::from_members(label_count, members.iter().copied()))
        })
        .collect()
}

/// Rounds `(instance_index, set_index)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LabeledStream {
    rounds: Vec<(usize, usize)>,
}

impl LabeledStream {
    pub fn new(rounds: Vec<(usize, usize)>) -> Self {
        LabeledStream { rounds }
    }

    pub fn rounds(&self) -> &[(usize, usize)] {
        &self.rounds
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn push(&mut self, instance: usize, set: usize) {
        self.rounds.push((instance, set));
    }

    pub fn to_json(&self) -> String {
        let pairs: Vec<[usize; 2]> = self.rounds.iter().map(|&(x, s)| [x, s]).collect();
        serde_json::to_string(&pairs).expect("streams serialize")
    }
}

/// Smallest hypothesis consistent with every round, if any.
pub fn validate_realizable(instance: &ProblemInstance, stream: &LabeledStream) -> Option<usize> {
    (0..instance.hypothesis_count()).find(|&h| {
        stream
            .rounds()
            .iter()
            .all(|&(x, s)| instance.set(s).contains(instance.output(h, x)))
    })
}
