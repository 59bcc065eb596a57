//! Finite metric multigraphs with exact rational edge lengths.
//!
//! Loops and parallel edges are allowed. Edges carry a stable [`EdgeId`]
//! that survives forest contraction, so systole supports and homology bases
//! can be followed from one stage of the retraction flow to the next.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: usize,
    pub v: usize,
    pub length: Rational,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite to `x` (for a loop, `x` itself).
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Validation regime for a graph.
///
/// `OuterSpace` demands rank at least 2 and minimum degree 3 (a loop counts
/// twice). `Permissive` only demands connectivity and positive lengths; it is
/// used for intermediate objects and map skeleta.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    OuterSpace,
    #[default]
    Permissive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricGraph {
    name: String,
    vertex_count: usize,
    edges: Vec<Edge>,
}

/// Incidence of an edge at a vertex, as seen from that vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    /// Position of the edge in [`MetricGraph::edges`].
    pub edge: usize,
    pub other: usize,
    /// True when leaving through this incidence traverses the edge from `u` to `v`.
    pub forward: bool,
}

impl MetricGraph {
    /// Builds a graph, sorting edges by id and checking the basic invariants:
    /// endpoints in range, unique ids, positive lengths, connectivity.
    pub fn new(name: impl Into<String>, vertex_count: usize, mut edges: Vec<Edge>) -> Result<Self> {
        edges.sort_by_key(|e| e.id);
        for w in edges.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::DuplicateEdgeId(w[0].id));
            }
        }
        for e in &edges {
            if e.u >= vertex_count || e.v >= vertex_count {
                return Err(Error::Malformed {
                    line: 0,
                    kind: crate::error::ParseErrorKind::VertexOutOfRange(e.u.max(e.v)),
                });
            }
            if !rational::is_positive(&e.length) {
                return Err(Error::NonPositiveLength(e.id));
            }
        }
        let g = MetricGraph {
            name: name.into(),
            vertex_count,
            edges,
        };
        if vertex_count == 0 || !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Convenience constructor from `(u, v, length)` triples; ids are 0, 1, 2, ...
    pub fn from_triples(
        name: impl Into<String>,
        vertex_count: usize,
        triples: &[(usize, usize, Rational)],
    ) -> Result<Self> {
        let edges = triples
            .iter()
            .enumerate()
            .map(|(i, (u, v, l))| Edge {
                id: EdgeId(i as u32),
                u: *u,
                v: *v,
                length: l.clone(),
            })
            .collect();
        Self::new(name, vertex_count, edges)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by id. Positions in this slice index every per-edge vector
    /// (weights, indicator rows) used elsewhere in the crate.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn position(&self, id: EdgeId) -> Option<usize> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.position(id).map(|i| &self.edges[i])
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        self.edges.iter().map(|e| e.id).collect()
    }

    pub fn lengths(&self) -> Vec<Rational> {
        self.edges.iter().map(|e| e.length.clone()).collect()
    }

    pub fn volume(&self) -> Rational {
        rational::sum(self.edges.iter().map(|e| &e.length))
    }

    /// First Betti number `E - V + 1` of the (connected) graph.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    pub fn incidences(&self) -> Vec<Vec<Incidence>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push(Incidence {
                edge: i,
                other: e.v,
                forward: true,
            });
            adj[e.v].push(Incidence {
                edge: i,
                other: e.u,
                forward: false,
            });
        }
        adj
    }

    fn is_connected(&self) -> bool {
        let mut dsu = Dsu::new(self.vertex_count);
        let mut parts = self.vertex_count;
        for e in &self.edges {
            if dsu.union(e.u, e.v) {
                parts -= 1;
            }
        }
        parts == 1
    }

    /// Checks the extra invariants of `mode`.
    pub fn check_mode(&self, mode: Mode) -> Result<()> {
        if mode == Mode::Permissive {
            return Ok(());
        }
        if self.rank() < 2 {
            return Err(Error::RankTooSmall {
                rank: self.rank(),
                min: 2,
            });
        }
        if let Some((vertex, &degree)) = self.degrees().iter().enumerate().find(|(_, d)| **d < 3) {
            return Err(Error::LowDegree { vertex, degree });
        }
        Ok(())
    }

    /// Same combinatorics, new lengths (aligned with [`Self::edges`]).
    pub fn with_lengths(&self, lengths: &[Rational]) -> Result<Self> {
        assert_eq!(lengths.len(), self.edges.len(), "length vector size mismatch");
        let edges = self
            .edges
            .iter()
            .zip(lengths)
            .map(|(e, l)| Edge {
                length: l.clone(),
                ..e.clone()
            })
            .collect();
        Self::new(self.name.clone(), self.vertex_count, edges)
    }

    /// Rescales every edge by one scalar so the total length is exactly 1.
    pub fn normalize_volume(&self) -> Self {
        let vol = self.volume();
        if vol.is_one() {
            return self.clone();
        }
        let scale = Rational::one() / vol;
        let mut g = self.clone();
        for e in &mut g.edges {
            e.length = &e.length * &scale;
        }
        g
    }

    /// Contracts every edge of a forest, merging endpoints.
    ///
    /// Surviving edges keep their ids and lengths. New vertices are numbered
    /// in order of their smallest original vertex.
    pub fn contract_forest(&self, ids: &BTreeSet<EdgeId>) -> Result<(Self, EdgeCorrespondence)> {
        let mut dsu = Dsu::new(self.vertex_count);
        for &id in ids {
            let e = self.edge(id).ok_or(Error::UnknownEdge(id))?;
            if e.is_loop() || !dsu.union(e.u, e.v) {
                return Err(Error::ContractionOfCycle(id));
            }
        }
        let mut root_label = BTreeMap::new();
        let mut vertex_map = Vec::with_capacity(self.vertex_count);
        for v in 0..self.vertex_count {
            let r = dsu.find(v);
            let next = root_label.len();
            vertex_map.push(*root_label.entry(r).or_insert(next));
        }
        let mut edge_map = BTreeMap::new();
        let mut edges = Vec::new();
        for e in &self.edges {
            if ids.contains(&e.id) {
                edge_map.insert(e.id, None);
            } else {
                edge_map.insert(e.id, Some(e.id));
                edges.push(Edge {
                    id: e.id,
                    u: vertex_map[e.u],
                    v: vertex_map[e.v],
                    length: e.length.clone(),
                });
            }
        }
        let g = Self::new(self.name.clone(), root_label.len(), edges)?;
        Ok((
            g,
            EdgeCorrespondence {
                edges: edge_map,
                vertices: vertex_map,
            },
        ))
    }

    /// Applies a relabeling: vertex `v` becomes `vertex_map[v]`, edge `id`
    /// becomes `edge_map[id]`, and edges listed in `flipped` swap endpoints.
    pub fn relabel(
        &self,
        vertex_map: &[usize],
        edge_map: &BTreeMap<EdgeId, EdgeId>,
        flipped: &BTreeSet<EdgeId>,
    ) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let (u, v) = if flipped.contains(&e.id) {
                    (e.v, e.u)
                } else {
                    (e.u, e.v)
                };
                Edge {
                    id: edge_map[&e.id],
                    u: vertex_map[u],
                    v: vertex_map[v],
                    length: e.length.clone(),
                }
            })
            .collect();
        Self::new(self.name.clone(), self.vertex_count, edges)
    }

    pub fn total_length_of(&self, ids: impl IntoIterator<Item = EdgeId>) -> Rational {
        ids.into_iter()
            .filter_map(|id| self.edge(id))
            .fold(Rational::zero(), |acc, e| acc + &e.length)
    }
}

/// Bookkeeping produced by [`MetricGraph::contract_forest`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCorrespondence {
    /// Old edge id to new edge id; `None` for contracted edges.
    pub edges: BTreeMap<EdgeId, Option<EdgeId>>,
    /// Old vertex index to new vertex index.
    pub vertices: Vec<usize>,
}

impl EdgeCorrespondence {
    pub fn identity(g: &MetricGraph) -> Self {
        EdgeCorrespondence {
            edges: g.edges().iter().map(|e| (e.id, Some(e.id))).collect(),
            vertices: (0..g.vertex_count()).collect(),
        }
    }

    pub fn contracted(&self) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, v)| v.is_none())
            .map(|(k, _)| *k)
            .collect()
    }
}

pub fn rank(g: &MetricGraph) -> usize {
    g.rank()
}

pub fn normalize_volume(g: &MetricGraph) -> MetricGraph {
    g.normalize_volume()
}

pub fn contract_forest(
    g: &MetricGraph,
    ids: &BTreeSet<EdgeId>,
) -> Result<(MetricGraph, EdgeCorrespondence)> {
    g.contract_forest(ids)
}

/// First Betti number of the subgraph spanned by `ids` (with their endpoints),
/// which need not be connected.
pub fn subgraph_betti(g: &MetricGraph, ids: &BTreeSet<EdgeId>) -> usize {
    let mut dsu = Dsu::new(g.vertex_count());
    let mut cycles = 0;
    for id in ids {
        if let Some(e) = g.edge(*id) {
            if !dsu.union(e.u, e.v) {
                cycles += 1;
            }
        }
    }
    cycles
}
