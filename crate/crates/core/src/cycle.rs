//! Embedded cycles and their canonical form.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MetricGraph};
use crate::rational::Rational;

/// One traversal of an edge; `forward` means from its first endpoint `u` to `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub edge: EdgeId,
    pub forward: bool,
}

impl Step {
    pub fn reversed(self) -> Step {
        Step {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

/// An embedded closed curve: visits no vertex and no edge twice.
///
/// Steps are stored in canonical form: among all rotations and reversals the
/// one with the lexicographically smallest edge-id sequence, ties broken by
/// preferring forward traversals. Two `Cycle`s are equal iff they are the
/// same curve up to orientation and starting point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    steps: Vec<Step>,
}

fn key(steps: &[Step]) -> (Vec<EdgeId>, Vec<bool>) {
    (
        steps.iter().map(|s| s.edge).collect(),
        steps.iter().map(|s| !s.forward).collect(),
    )
}

fn canonicalize(steps: Vec<Step>) -> Vec<Step> {
    let k = steps.len();
    let reversed: Vec<Step> = steps.iter().rev().map(|s| s.reversed()).collect();
    let mut best: Option<(Vec<Step>, (Vec<EdgeId>, Vec<bool>))> = None;
    for base in [&steps, &reversed] {
        for r in 0..k {
            let cand: Vec<Step> = base[r..].iter().chain(&base[..r]).copied().collect();
            let ck = key(&cand);
            if best.as_ref().is_none_or(|(_, bk)| ck < *bk) {
                best = Some((cand, ck));
            }
        }
    }
    best.map(|(s, _)| s).unwrap_or_default()
}

impl Ord for Cycle {
    fn cmp(&self, other: &Self) -> Ordering {
        key(&self.steps).cmp(&key(&other.steps))
    }
}

impl PartialOrd for Cycle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Cycle {
    /// Builds a cycle from steps already known to be closed and embedded.
    pub(crate) fn from_steps_unchecked(steps: Vec<Step>) -> Self {
        Cycle {
            steps: canonicalize(steps),
        }
    }

    /// Validates `steps` against `g` and returns the canonical cycle.
    pub fn from_steps(g: &MetricGraph, steps: Vec<Step>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::ForeignCycle("empty step list".into()));
        }
        let mut seen_edges = BTreeSet::new();
        let mut seen_vertices = BTreeSet::new();
        let mut prev_end = None;
        let mut first_start = None;
        for s in &steps {
            let e = g
                .edge(s.edge)
                .ok_or_else(|| Error::ForeignCycle(format!("unknown edge {}", s.edge)))?;
            let (a, b) = if s.forward { (e.u, e.v) } else { (e.v, e.u) };
            if let Some(p) = prev_end {
                if p != a {
                    return Err(Error::ForeignCycle(format!("step {} does not continue", s.edge)));
                }
            }
            first_start.get_or_insert(a);
            if !seen_edges.insert(s.edge) || !seen_vertices.insert(a) {
                return Err(Error::ForeignCycle("curve is not embedded".into()));
            }
            prev_end = Some(b);
        }
        if prev_end != first_start {
            return Err(Error::ForeignCycle("curve does not close".into()));
        }
        Ok(Self::from_steps_unchecked(steps))
    }

    /// Interprets an edge set as a cycle, if it is one (each touched vertex
    /// has degree 2 in the set, a loop counting twice, and the set is connected).
    pub fn from_edge_set(g: &MetricGraph, ids: &BTreeSet<EdgeId>) -> Option<Self> {
        let first = *ids.iter().next()?;
        let mut by_vertex: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
        for &id in ids {
            let e = g.edge(id)?;
            by_vertex.entry(e.u).or_default().push(id);
            by_vertex.entry(e.v).or_default().push(id);
        }
        if by_vertex.values().any(|v| v.len() != 2) {
            return None;
        }
        let e0 = g.edge(first)?;
        let mut steps = vec![Step {
            edge: first,
            forward: true,
        }];
        let mut at = e0.v;
        let mut last = first;
        while at != e0.u {
            let inc = &by_vertex[&at];
            let next = if inc[0] == last { inc[1] } else { inc[0] };
            let e = g.edge(next)?;
            let forward = e.u == at;
            steps.push(Step {
                edge: next,
                forward,
            });
            at = e.other(at);
            last = next;
            if steps.len() > ids.len() {
                return None;
            }
        }
        if steps.len() != ids.len() {
            return None;
        }
        Some(Self::from_steps_unchecked(steps))
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// The same curve traversed backwards (not canonicalized).
    pub fn reversed_steps(&self) -> Vec<Step> {
        self.steps.iter().rev().map(|s| s.reversed()).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.steps.len()
    }

    pub fn edge_ids(&self) -> BTreeSet<EdgeId> {
        self.steps.iter().map(|s| s.edge).collect()
    }

    pub fn edge_sequence(&self) -> Vec<EdgeId> {
        self.steps.iter().map(|s| s.edge).collect()
    }

    /// Vertices in traversal order, starting at the tail of the first step.
    pub fn vertices(&self, g: &MetricGraph) -> Vec<usize> {
        self.steps
            .iter()
            .map(|s| {
                let e = g.edge(s.edge).expect("cycle edge belongs to graph");
                if s.forward {
                    e.u
                } else {
                    e.v
                }
            })
            .collect()
    }

    pub fn length(&self, g: &MetricGraph) -> Rational {
        g.total_length_of(self.steps.iter().map(|s| s.edge))
    }

    /// Total weight under a per-edge weight vector aligned with `g.edges()`.
    pub fn weight(&self, g: &MetricGraph, weights: &[Rational]) -> Rational {
        self.steps.iter().fold(Rational::zero(), |acc, s| {
            acc + &weights[g.position(s.edge).expect("cycle edge belongs to graph")]
        })
    }

    /// Transports the cycle along an edge relabeling; `flipped` edges swap
    /// their endpoints, so their traversal direction flips too.
    pub fn relabel(&self, edge_map: &BTreeMap<EdgeId, EdgeId>, flipped: &BTreeSet<EdgeId>) -> Self {
        let steps = self
            .steps
            .iter()
            .map(|s| Step {
                edge: edge_map[&s.edge],
                forward: s.forward ^ flipped.contains(&s.edge),
            })
            .collect();
        Self::from_steps_unchecked(steps)
    }

    /// Compact text form, e.g. `(0+ 2- 1+)`.
    pub fn display(&self) -> String {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| format!("{}{}", s.edge.0, if s.forward { '+' } else { '-' }))
            .collect();
        format!("({})", parts.join(" "))
    }
}
