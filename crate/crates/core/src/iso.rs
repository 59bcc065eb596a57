//! Length-preserving isomorphism of metric multigraphs by backtracking.

use std::collections::{BTreeMap, VecDeque};

use crate::graph::{EdgeId, MetricGraph};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    /// `vertex_map[v]` is the image of vertex `v` of the first graph.
    pub vertex_map: Vec<usize>,
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
}

/// Per-vertex invariant used to prune candidates.
type Signature = (usize, Vec<Rational>, Vec<Rational>);

struct Side<'a> {
    g: &'a MetricGraph,
    sig: Vec<Signature>,
    /// Sorted `(length, id)` lists of edges between an unordered vertex pair.
    between: BTreeMap<(usize, usize), Vec<(Rational, EdgeId)>>,
}

impl<'a> Side<'a> {
    fn new(g: &'a MetricGraph) -> Self {
        let mut sig: Vec<Signature> = vec![(0, Vec::new(), Vec::new()); g.vertex_count()];
        let mut between: BTreeMap<(usize, usize), Vec<(Rational, EdgeId)>> = BTreeMap::new();
        for e in g.edges() {
            sig[e.u].0 += 1;
            sig[e.v].0 += 1;
            if e.is_loop() {
                sig[e.u].1.push(e.length.clone());
            } else {
                sig[e.u].2.push(e.length.clone());
                sig[e.v].2.push(e.length.clone());
            }
            between
                .entry((e.u.min(e.v), e.u.max(e.v)))
                .or_default()
                .push((e.length.clone(), e.id));
        }
        for s in &mut sig {
            s.1.sort();
            s.2.sort();
        }
        for list in between.values_mut() {
            list.sort();
        }
        Side { g, sig, between }
    }

    fn lengths_between(&self, a: usize, b: usize) -> Vec<&Rational> {
        self.between
            .get(&(a.min(b), a.max(b)))
            .map(|l| l.iter().map(|(x, _)| x).collect())
            .unwrap_or_default()
    }
}

/// Returns a length-preserving isomorphism `g1 -> g2` if one exists.
/// Deterministic: the same inputs always give the same map.
pub fn are_isomorphic(g1: &MetricGraph, g2: &MetricGraph) -> Option<Isomorphism> {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let a = Side::new(g1);
    let b = Side::new(g2);
    let mut s1 = a.sig.clone();
    let mut s2 = b.sig.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return None;
    }
    let n = g1.vertex_count();

    // Visit order: BFS from a vertex of the rarest signature.
    let count = |s: &Signature| a.sig.iter().filter(|t| *t == s).count();
    let start = (0..n).min_by_key(|&v| (count(&a.sig[v]), v)).unwrap_or(0);
    let adj = g1.incidences();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for inc in &adj[x] {
            if !seen[inc.other] {
                seen[inc.other] = true;
                queue.push_back(inc.other);
            }
        }
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if !extend(&a, &b, &order, 0, &mut map, &mut used) {
        return None;
    }

    let mut edge_map = BTreeMap::new();
    for (&(x, y), list) in &a.between {
        let (mx, my) = (map[x], map[y]);
        let image = &b.between[&(mx.min(my), mx.max(my))];
        for ((_, from), (_, to)) in list.iter().zip(image) {
            edge_map.insert(*from, *to);
        }
    }
    debug_assert_eq!(edge_map.len(), a.g.edge_count());
    Some(Isomorphism {
        vertex_map: map,
        edge_map,
    })
}

fn extend(
    a: &Side,
    b: &Side,
    order: &[usize],
    k: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if k == order.len() {
        return true;
    }
    let x = order[k];
    for c in 0..b.g.vertex_count() {
        if used[c] || a.sig[x] != b.sig[c] {
            continue;
        }
        let consistent = order[..k]
            .iter()
            .all(|&p| a.lengths_between(x, p) == b.lengths_between(c, map[p]));
        if !consistent {
            continue;
        }
        map[x] = c;
        used[c] = true;
        if extend(a, b, order, k + 1, map, used) {
            return true;
        }
        used[c] = false;
        map[x] = usize::MAX;
    }
    false
}
