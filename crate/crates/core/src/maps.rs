//! Combinatorial maps: graphs with a rotation system, optionally with
//! twisted edges so that non-orientable surfaces can be described too.
//!
//! Internally a map is stored as its flag graph. A flag is a dart together
//! with a side; the three involutions are
//!
//! * `r0`: move to the other end of the edge (keeping the side across a
//!   twisted edge, swapping it otherwise),
//! * `r1`: move to the neighbouring dart in the rotation on that side,
//! * `r2`: swap sides of the same dart.
//!
//! Faces are orbits of `<r0, r1>`, vertices of `<r1, r2>`, edges of `<r0, r2>`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::cycle::{Cycle, Step};
use crate::cycles::{self, DEFAULT_CYCLE_CAP};
use crate::error::{Error, Result};
use crate::format::{DartRef, GraphFile};
use crate::graph::{EdgeId, MetricGraph};
use crate::rational::{self, Rational};

#[derive(Clone, Debug)]
pub struct CombinatorialMap {
    graph: MetricGraph,
    /// Dart `2 * position + end` lies at endpoint `end` of the edge.
    sigma: Vec<usize>,
    sigma_inv: Vec<usize>,
    twisted: Vec<bool>,
}

impl CombinatorialMap {
    /// Builds a map from a parsed file; every vertex needs a rotation line
    /// listing exactly its darts.
    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let g = &file.graph;
        let dart_count = 2 * g.edge_count();
        let mut sigma = vec![usize::MAX; dart_count];
        let mut sigma_inv = vec![usize::MAX; dart_count];
        for v in 0..g.vertex_count() {
            let rot = file
                .rotations
                .get(&v)
                .ok_or_else(|| Error::InvalidMap(format!("vertex {v} has no rotation")))?;
            let darts = rot
                .iter()
                .map(|d| dart_index(g, d, v))
                .collect::<Result<Vec<_>>>()?;
            for (i, &d) in darts.iter().enumerate() {
                let next = darts[(i + 1) % darts.len()];
                if sigma[d] != usize::MAX {
                    return Err(Error::InvalidMap(format!("dart {} listed twice", rot[i])));
                }
                sigma[d] = next;
                sigma_inv[next] = d;
            }
        }
        if let Some(v) = file.rotations.keys().find(|&&v| v >= g.vertex_count()) {
            return Err(Error::InvalidMap(format!("rotation for unknown vertex {v}")));
        }
        if let Some(d) = sigma.iter().position(|&s| s == usize::MAX) {
            return Err(Error::InvalidMap(format!(
                "dart {}.{} missing from the rotations",
                g.edges()[d / 2].id.0,
                d % 2
            )));
        }
        let mut twisted = vec![false; g.edge_count()];
        for id in &file.twisted {
            let pos = g.position(*id).ok_or(Error::UnknownEdge(*id))?;
            twisted[pos] = true;
        }
        Ok(CombinatorialMap {
            graph: g.clone(),
            sigma,
            sigma_inv,
            twisted,
        })
    }

    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    pub fn dart_count(&self) -> usize {
        self.sigma.len()
    }

    pub fn flag_count(&self) -> usize {
        2 * self.sigma.len()
    }

    pub fn is_twisted(&self, id: EdgeId) -> bool {
        self.graph.position(id).is_some_and(|p| self.twisted[p])
    }

    /// Edge involution on darts.
    pub fn alpha(&self, d: usize) -> usize {
        d ^ 1
    }

    /// Rotation at the vertex of `d`.
    pub fn sigma(&self, d: usize) -> usize {
        self.sigma[d]
    }

    pub fn dart_ref(&self, d: usize) -> DartRef {
        DartRef {
            edge: self.graph.edges()[d / 2].id,
            end: (d % 2) as u8,
        }
    }

    // Flag `2 * dart + side`.
    fn r0(&self, f: usize) -> usize {
        let (d, s) = (f / 2, f % 2);
        let t = if self.twisted[d / 2] { s } else { 1 - s };
        2 * (d ^ 1) + t
    }

    fn r1(&self, f: usize) -> usize {
        let (d, s) = (f / 2, f % 2);
        if s == 1 {
            2 * self.sigma[d]
        } else {
            2 * self.sigma_inv[d] + 1
        }
    }

    fn r2(&self, f: usize) -> usize {
        f ^ 1
    }

    fn involutions(&self, f: usize) -> [usize; 3] {
        [self.r0(f), self.r1(f), self.r2(f)]
    }

    fn orbits(&self, gens: &[fn(&Self, usize) -> usize]) -> Vec<usize> {
        let n = self.flag_count();
        let mut id = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if id[start] != usize::MAX {
                continue;
            }
            id[start] = next;
            let mut stack = vec![start];
            while let Some(f) = stack.pop() {
                for g in gens {
                    let h = g(self, f);
                    if id[h] == usize::MAX {
                        id[h] = next;
                        stack.push(h);
                    }
                }
            }
            next += 1;
        }
        id
    }

    fn vertex_orbits(&self) -> Vec<usize> {
        self.orbits(&[Self::r1, Self::r2])
    }

    fn face_orbits(&self) -> Vec<usize> {
        self.orbits(&[Self::r0, Self::r1])
    }

    /// The flag graph is bipartite for the three involutions.
    pub fn is_orientable(&self) -> bool {
        let n = self.flag_count();
        let mut colour = vec![u8::MAX; n];
        colour[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(f) = queue.pop_front() {
            for h in self.involutions(f) {
                if colour[h] == u8::MAX {
                    colour[h] = 1 - colour[f];
                    queue.push_back(h);
                } else if colour[h] == colour[f] {
                    return false;
                }
            }
        }
        true
    }
}

fn dart_index(g: &MetricGraph, d: &DartRef, v: usize) -> Result<usize> {
    let pos = g.position(d.edge).ok_or(Error::UnknownEdge(d.edge))?;
    let e = &g.edges()[pos];
    let at = if d.end == 0 { e.u } else { e.v };
    if at != v {
        return Err(Error::InvalidMap(format!("dart {d} is not at vertex {v}")));
    }
    Ok(2 * pos + d.end as usize)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Darts in boundary order, each leaving the vertex it sits at.
    pub darts: Vec<DartRef>,
    /// The boundary as a cycle, when it visits no vertex twice.
    pub cycle: Option<Cycle>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceTrace {
    pub faces: Vec<Face>,
    pub vertices: usize,
    pub edges: usize,
    pub euler_characteristic: i64,
    pub orientable: bool,
    /// Orientable genus, or the number of cross-caps for a non-orientable surface.
    pub genus: i64,
    pub all_embedded: bool,
}

impl FaceTrace {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }
}

pub fn trace_faces(m: &CombinatorialMap) -> FaceTrace {
    let g = m.graph();
    let mut visited = vec![false; m.flag_count()];
    let mut faces = Vec::new();
    // Side-0 flags first so that untwisted maps trace faces along sigma∘alpha.
    let order = (0..m.dart_count()).map(|d| 2 * d).chain((0..m.dart_count()).map(|d| 2 * d + 1));
    for start in order {
        if visited[start] {
            continue;
        }
        let mut darts = Vec::new();
        let mut f = start;
        loop {
            let h = m.r0(f);
            visited[f] = true;
            visited[h] = true;
            darts.push(f / 2);
            f = m.r1(h);
            if f == start {
                break;
            }
        }
        let steps: Vec<Step> = darts
            .iter()
            .map(|&d| Step {
                edge: g.edges()[d / 2].id,
                forward: d % 2 == 0,
            })
            .collect();
        faces.push(Face {
            darts: darts.iter().map(|&d| m.dart_ref(d)).collect(),
            cycle: Cycle::from_steps(g, steps).ok(),
        });
    }
    let v = g.vertex_count();
    let e = g.edge_count();
    let chi = v as i64 - e as i64 + faces.len() as i64;
    let orientable = m.is_orientable();
    let genus = if orientable { (2 - chi) / 2 } else { 2 - chi };
    let all_embedded = faces.iter().all(|f| f.cycle.is_some());
    FaceTrace {
        faces,
        vertices: v,
        edges: e,
        euler_characteristic: chi,
        orientable,
        genus,
        all_embedded,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapType {
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub uniform: bool,
    /// Face length -> number of faces.
    pub face_lengths: BTreeMap<usize, usize>,
    /// Vertex degree -> number of vertices.
    pub degrees: BTreeMap<usize, usize>,
}

pub fn map_type_check(m: &CombinatorialMap) -> MapType {
    let trace = trace_faces(m);
    let mut face_lengths = BTreeMap::new();
    for f in &trace.faces {
        *face_lengths.entry(f.len()).or_insert(0) += 1;
    }
    let mut degrees = BTreeMap::new();
    for d in m.graph().degrees() {
        *degrees.entry(d).or_insert(0) += 1;
    }
    let single = |m: &BTreeMap<usize, usize>| {
        if m.len() == 1 {
            m.keys().next().copied()
        } else {
            None
        }
    };
    let p = single(&face_lengths);
    let q = single(&degrees);
    MapType {
        p,
        q,
        uniform: p.is_some() && q.is_some(),
        face_lengths,
        degrees,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerRelations {
    pub v: usize,
    pub e: usize,
    pub f: usize,
    pub p: usize,
    /// Rank `E - V + 1` of the skeleton.
    pub n: usize,
    /// `3V = 2E`
    pub three_v_eq_two_e: bool,
    /// `2E = pF`
    pub two_e_eq_pf: bool,
    /// `n = 1 + V/2`
    pub rank_formula: bool,
    /// `F = (6/p)(n - 1)`
    pub face_formula: bool,
}

impl EulerRelations {
    pub fn holds(&self) -> bool {
        self.three_v_eq_two_e && self.two_e_eq_pf && self.rank_formula && self.face_formula
    }
}

pub fn euler_relations(m: &CombinatorialMap) -> Result<EulerRelations> {
    let ty = map_type_check(m);
    if ty.q != Some(3) {
        return Err(Error::NotCubic(ty.degrees.keys().copied().collect()));
    }
    let p = ty.p.ok_or(Error::NotUniform)?;
    let g = m.graph();
    let (v, e) = (g.vertex_count(), g.edge_count());
    let f = ty.face_lengths[&p];
    let n = g.rank();
    Ok(EulerRelations {
        v,
        e,
        f,
        p,
        n,
        three_v_eq_two_e: 3 * v == 2 * e,
        two_e_eq_pf: 2 * e == p * f,
        rank_formula: 2 * n == 2 + v,
        face_formula: p * f == 6 * (n - 1),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagTransitivity {
    pub transitive: bool,
    pub aut_order: usize,
    pub flags: usize,
    pub vertex_transitive: bool,
    pub edge_transitive: bool,
    pub face_transitive: bool,
}

/// Attempts to extend `flag 0 -> target` to an automorphism of the flag graph.
fn propagate(m: &CombinatorialMap, target: usize) -> Option<Vec<usize>> {
    let n = m.flag_count();
    let mut image = vec![usize::MAX; n];
    image[0] = target;
    let mut queue = VecDeque::from([0]);
    while let Some(f) = queue.pop_front() {
        let fi = m.involutions(f);
        let ti = m.involutions(image[f]);
        for (a, b) in fi.into_iter().zip(ti) {
            if image[a] == usize::MAX {
                image[a] = b;
                queue.push_back(a);
            } else if image[a] != b {
                return None;
            }
        }
    }
    // a consistent extension on a connected flag graph is automatically a
    // bijection, but check rather than assume
    let distinct: BTreeSet<_> = image.iter().collect();
    (distinct.len() == n).then_some(image)
}

/// Counts automorphisms (including reflections) by propagating from flag 0.
pub fn flag_transitivity(m: &CombinatorialMap) -> FlagTransitivity {
    let flags = m.flag_count();
    let vertex = m.vertex_orbits();
    let face = m.face_orbits();
    let edge = |f: usize| f / 4;
    let mut aut_order = 0;
    let mut vertex_images = BTreeSet::new();
    let mut face_images = BTreeSet::new();
    let mut edge_images = BTreeSet::new();
    for t in 0..flags {
        if propagate(m, t).is_some() {
            aut_order += 1;
            vertex_images.insert(vertex[t]);
            face_images.insert(face[t]);
            edge_images.insert(edge(t));
        }
    }
    let count = |ids: &[usize]| ids.iter().collect::<BTreeSet<_>>().len();
    FlagTransitivity {
        transitive: aut_order == flags,
        aut_order,
        flags,
        vertex_transitive: vertex_images.len() == count(&vertex),
        edge_transitive: edge_images.len() == m.graph().edge_count(),
        face_transitive: face_images.len() == count(&face),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystolesVsFaces {
    pub girth: usize,
    pub p: usize,
    pub face_count: usize,
    pub min_cycle_count: usize,
    pub equal: bool,
    /// Minimal cycles that are not face boundaries.
    pub extra_min_cycles: Vec<Cycle>,
}

pub fn systoles_equal_faces(m: &CombinatorialMap) -> Result<SystolesVsFaces> {
    systoles_equal_faces_capped(m, DEFAULT_CYCLE_CAP)
}

/// Compares the unit-weight minimal cycles of the skeleton with the face boundaries.
pub fn systoles_equal_faces_capped(m: &CombinatorialMap, cap: usize) -> Result<SystolesVsFaces> {
    let ty = map_type_check(m);
    let p = ty.p.filter(|_| ty.uniform).ok_or(Error::NotUniform)?;
    let g = m.graph();
    let ones = vec![rational::one(); g.edge_count()];
    let girth = cycles::girth(g, &ones).ok_or(Error::NoCycle)?;
    let min_cycles = cycles::cycles_up_to_weight(g, &ones, &girth, cap)?;
    let girth = rational_to_usize(&girth);
    let faces: BTreeSet<Cycle> = trace_faces(m)
        .faces
        .into_iter()
        .filter_map(|f| f.cycle)
        .collect();
    let extra_min_cycles: Vec<Cycle> = min_cycles
        .iter()
        .filter(|c| !faces.contains(c))
        .cloned()
        .collect();
    let face_count = ty.face_lengths[&p];
    let equal = girth == p && extra_min_cycles.is_empty() && faces.len() == face_count
        && min_cycles.len() == face_count;
    Ok(SystolesVsFaces {
        girth,
        p,
        face_count,
        min_cycle_count: min_cycles.len(),
        equal,
        extra_min_cycles,
    })
}

fn rational_to_usize(x: &Rational) -> usize {
    debug_assert!(x.is_integer());
    usize::try_from(x.to_integer()).expect("girth fits in usize")
}
