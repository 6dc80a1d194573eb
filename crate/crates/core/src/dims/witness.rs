use serde::Serialize;

use super::{Dimension, DimsEngine, VersionSpace};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::model::ProblemInstance;

/// Materialized shattered tree.
///
/// In a Set Littlestone tree edge `y` of a node carries a set excluding `y`;
/// in a p-Set Littlestone tree a node has `p` edges whose sets have empty
/// intersection. Leaves name a hypothesis consistent with their path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessTree {
    Leaf {
        hypothesis: usize,
    },
    Node {
        instance: usize,
        edges: Vec<WitnessEdge>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessEdge {
    pub set: usize,
    pub child: WitnessTree,
}

impl WitnessTree {
    pub fn depth(&self) -> usize {
        match self {
            WitnessTree::Leaf { .. } => 0,
            WitnessTree::Node { edges, .. } => {
                1 + edges.iter().map(|e| e.child.depth()).min().unwrap_or(0)
            }
        }
    }

    /// Follows edge indices from the root; stops early at a leaf.
    pub fn descend(&self, path: &[usize]) -> &WitnessTree {
        let mut node = self;
        for &i in path {
            match node {
                WitnessTree::Leaf { .. } => break,
                WitnessTree::Node { edges, .. } => node = &edges[i].child,
            }
        }
        node
    }
}

const MAX_WITNESS_NODES: u128 = 1_000_000;

impl DimsEngine {
    /// Set Littlestone tree of maximal depth, smallest indices on ties.
    pub fn sldim_witness(&mut self, v: &VersionSpace) -> Result<WitnessTree> {
        let depth = self.sldim(v);
        if depth < 0 {
            return Err(Error::Config(
                "no witness for an empty version space".into(),
            ));
        }
        let m = self.instance().label_count() as u128;
        guard(m, depth as u32)?;
        Ok(self.build_sl(v, depth))
    }

    /// p-Set Littlestone tree of maximal depth, smallest indices on ties.
    pub fn psldim_witness(&mut self, v: &VersionSpace, p: usize) -> Result<WitnessTree> {
        let depth = self.psldim(v, p)?;
        if depth < 0 {
            return Err(Error::Config(
                "no witness for an empty version space".into(),
            ));
        }
        guard(p as u128, depth as u32)?;
        Ok(self.build_psl(v, p, depth))
    }

    fn build_sl(&mut self, v: &VersionSpace, depth: i64) -> WitnessTree {
        if depth == 0 {
            return WitnessTree::Leaf {
                hypothesis: v.first().expect("nonempty version space"),
            };
        }
        let kind = Dimension::SetLittlestone;
        let (m, k, n) = {
            let inst = self.instance();
            (inst.label_count(), inst.instance_count(), inst.set_count())
        };
        for x in 0..k {
            let mut picks = Vec::with_capacity(m);
            for y in 0..m {
                let pick = (0..n).find_map(|a| {
                    if self.instance().set(a).contains(y) {
                        return None;
                    }
                    let w = self.restrict(v, x, a);
                    (!w.is_empty() && self.dim(&w, &kind) >= depth - 1).then_some((a, w))
                });
                match pick {
                    Some(p) => picks.push(p),
                    None => break,
                }
            }
            if picks.len() == m {
                let edges = picks
                    .into_iter()
                    .map(|(set, w)| WitnessEdge {
                        set,
                        child: self.build_sl(&w, depth - 1),
                    })
                    .collect();
                return WitnessTree::Node { instance: x, edges };
            }
        }
        unreachable!("dimension {depth} has a shattering instance")
    }

    fn build_psl(&mut self, v: &VersionSpace, p: usize, depth: i64) -> WitnessTree {
        if depth == 0 {
            return WitnessTree::Leaf {
                hypothesis: v.first().expect("nonempty version space"),
            };
        }
        let kind = Dimension::PSetLittlestone(p);
        let (k, n) = (
            self.instance().instance_count(),
            self.instance().set_count(),
        );
        for x in 0..k {
            let mut collection = BitSet::empty(n);
            for a in 0..n {
                let w = self.restrict(v, x, a);
                if !w.is_empty() && self.dim(&w, &kind) >= depth - 1 {
                    collection.insert(a);
                }
            }
            if let Some(mut family) = self.empty_subfamily(&collection, p) {
                let last = *family.last().unwrap();
                family.resize(p, last);
                let edges = family
                    .into_iter()
                    .map(|set| {
                        let w = self.restrict(v, x, set);
                        WitnessEdge {
                            set,
                            child: self.build_psl(&w, p, depth - 1),
                        }
                    })
                    .collect();
                return WitnessTree::Node { instance: x, edges };
            }
        }
        unreachable!("dimension {depth} has a shattering instance")
    }
}

fn guard(arity: u128, depth: u32) -> Result<()> {
    let leaves = arity.checked_pow(depth).unwrap_or(u128::MAX);
    if leaves > MAX_WITNESS_NODES {
        return Err(Error::Guard(format!(
            "witness tree would have {arity}^{depth} leaves"
        )));
    }
    Ok(())
}

/// Checks a witness edge by edge and returns its depth.
///
/// `kind` is [`Dimension::SetLittlestone`] or [`Dimension::PSetLittlestone`].
pub fn validate_witness(
    instance: &ProblemInstance,
    tree: &WitnessTree,
    kind: &Dimension,
) -> std::result::Result<usize, String> {
    let arity = match kind {
        Dimension::SetLittlestone => instance.label_count(),
        Dimension::PSetLittlestone(p) if *p >= 2 => *p,
        other => return Err(format!("no witness trees for {other:?}")),
    };
    check(instance, &VersionSpace::full(instance), tree, kind, arity)
}

fn check(
    inst: &ProblemInstance,
    v: &VersionSpace,
    tree: &WitnessTree,
    kind: &Dimension,
    arity: usize,
) -> std::result::Result<usize, String> {
    match tree {
        WitnessTree::Leaf { hypothesis } => {
            if *hypothesis < inst.hypothesis_count() && v.contains(*hypothesis) {
                Ok(0)
            } else {
                Err(format!(
                    "leaf hypothesis {hypothesis} is not consistent with its path"
                ))
            }
        }
        WitnessTree::Node { instance, edges } => {
            if *instance >= inst.instance_count() {
                return Err(format!("instance {instance} out of range"));
            }
            if edges.len() != arity {
                return Err(format!("node has {} edges, expected {arity}", edges.len()));
            }
            if let Some(e) = edges.iter().find(|e| e.set >= inst.set_count()) {
                return Err(format!("set {} out of range", e.set));
            }
            match kind {
                Dimension::SetLittlestone => {
                    if let Some(y) = (0..arity).find(|&y| inst.set(edges[y].set).contains(y)) {
                        return Err(format!("edge {y} carries a set containing {y}"));
                    }
                }
                _ => {
                    let meet = BitSet::intersect_all(
                        inst.label_count(),
                        edges.iter().map(|e| inst.set(e.set)),
                    );
                    if !meet.is_empty() {
                        return Err(format!("sibling sets share labels {:?}", meet.to_vec()));
                    }
                }
            }
            let mut depth = None;
            for e in edges {
                let w = v.restrict(inst, *instance, inst.set(e.set));
                if w.is_empty() {
                    return Err(format!(
                        "edge set {} leaves no consistent hypothesis",
                        e.set
                    ));
                }
                let d = check(inst, &w, &e.child, kind, arity)?;
                if depth.is_some_and(|prev| prev != d) {
                    return Err("tree is not complete".into());
                }
                depth = Some(d);
            }
            Ok(depth.unwrap_or(0) + 1)
        }
    }
}
