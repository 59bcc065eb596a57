//! Shared helpers for integration tests: seeded generators, relabelings and
//! a brute-force oracle that enumerates edge subsets directly.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use systole::graph::{Edge, EdgeId, MetricGraph};
use systole::rational::{rat, Rational};

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn build(name: &str, v: usize, pairs: &[(usize, usize)], lengths: Vec<Rational>) -> MetricGraph {
    let edges = pairs
        .iter()
        .zip(lengths)
        .enumerate()
        .map(|(i, (&(u, w), length))| Edge {
            id: EdgeId(i as u32),
            u,
            v: w,
            length,
        })
        .collect();
    MetricGraph::new(name, v, edges).expect("generated graph is valid")
}

/// Connected multigraph (loops and parallel edges allowed) with at most
/// `max_edges` edges and small integer lengths, so that ties are common.
pub fn random_multigraph(rng: &mut TestRng, max_edges: usize) -> MetricGraph {
    let v = rng.gen_range(1..=5usize.min(max_edges));
    let e = rng.gen_range(v.max(1)..=max_edges);
    let mut pairs = Vec::with_capacity(e);
    for x in 1..v {
        pairs.push((rng.gen_range(0..x), x));
    }
    while pairs.len() < e {
        pairs.push((rng.gen_range(0..v), rng.gen_range(0..v)));
    }
    pairs.shuffle(rng);
    let top = rng.gen_range(1..=4);
    let lengths = (0..e).map(|_| rat(rng.gen_range(1..=top), 1)).collect();
    build("random", v, &pairs, lengths)
}

/// Connected multigraph of the given rank with every vertex of degree >= 3,
/// normalized to volume 1. `spread` bounds the integer lengths drawn before
/// normalizing; small spreads produce many ties.
pub fn random_outer_space(rng: &mut TestRng, rank: usize, spread: i64) -> MetricGraph {
    loop {
        let v = rng.gen_range(1..=2 * rank - 2);
        let e = v + rank - 1;
        // configuration model: three stubs per vertex, the rest anywhere
        let mut stubs: Vec<usize> = (0..v).flat_map(|x| [x, x, x]).collect();
        while stubs.len() < 2 * e {
            stubs.push(rng.gen_range(0..v));
        }
        stubs.shuffle(rng);
        let pairs: Vec<(usize, usize)> = stubs.chunks(2).map(|c| (c[0], c[1])).collect();
        if !connected(v, &pairs) {
            continue;
        }
        let lengths = (0..e).map(|_| rat(rng.gen_range(1..=spread), 1)).collect();
        return build("outer", v, &pairs, lengths).normalize_volume();
    }
}

fn connected(v: usize, pairs: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in pairs {
            for (p, q) in [(a, b), (b, a)] {
                if p == x && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub struct Relabeling {
    pub vertex_map: Vec<usize>,
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
    pub flipped: BTreeSet<EdgeId>,
}

/// Random vertex permutation, random sparse edge ids and random endpoint swaps.
pub fn random_relabeling(rng: &mut TestRng, g: &MetricGraph) -> Relabeling {
    let mut vertex_map: Vec<usize> = (0..g.vertex_count()).collect();
    vertex_map.shuffle(rng);
    let mut ids: Vec<u32> = (0..g.edge_count() as u32).map(|i| 3 * i + 5).collect();
    ids.shuffle(rng);
    let edge_map = g.edge_ids().into_iter().zip(ids.into_iter().map(EdgeId)).collect();
    let flipped = g.edge_ids().into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    Relabeling {
        vertex_map,
        edge_map,
        flipped,
    }
}

impl Relabeling {
    pub fn apply(&self, g: &MetricGraph) -> MetricGraph {
        g.relabel(&self.vertex_map, &self.edge_map, &self.flipped).unwrap()
    }
}

// ---------------------------------------------------------------------------
// Brute-force oracle

/// An embedded cycle found by subset enumeration, with an orientation.
#[derive(Clone, Debug)]
pub struct OracleCycle {
    pub edges: BTreeSet<EdgeId>,
    pub vertices: BTreeSet<usize>,
    pub length: Rational,
    /// Signed incidence vector over `g.edges()` for one traversal direction.
    pub vector: Vec<i64>,
}

/// All embedded cycles, by checking every non-empty edge subset.
pub fn oracle_cycles(g: &MetricGraph) -> Vec<OracleCycle> {
    let es = g.edges();
    assert!(es.len() <= 16, "oracle is exponential");
    let mut out = Vec::new();
    for mask in 1u32..(1 << es.len()) {
        let chosen: Vec<usize> = (0..es.len()).filter(|i| mask >> i & 1 == 1).collect();
        let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
        for &i in &chosen {
            *deg.entry(es[i].u).or_default() += 1;
            *deg.entry(es[i].v).or_default() += 1;
        }
        if deg.values().any(|&d| d != 2) {
            continue;
        }
        // walk it; the subset is one cycle iff the walk uses every edge
        let mut vector = vec![0i64; es.len()];
        let start = es[chosen[0]].u;
        let mut at = start;
        let mut used = BTreeSet::new();
        loop {
            let next = chosen
                .iter()
                .copied()
                .find(|&i| !used.contains(&i) && (es[i].u == at || es[i].v == at));
            let Some(i) = next else { break };
            used.insert(i);
            if es[i].u == at {
                vector[i] = 1;
                at = es[i].v;
            } else {
                vector[i] = -1;
                at = es[i].u;
            }
            if at == start {
                break;
            }
        }
        if used.len() != chosen.len() {
            continue;
        }
        out.push(OracleCycle {
            edges: chosen.iter().map(|&i| es[i].id).collect(),
            vertices: deg.keys().copied().collect(),
            length: chosen.iter().map(|&i| es[i].length.clone()).sum(),
            vector,
        });
    }
    out
}

pub fn oracle_systoles(g: &MetricGraph) -> Vec<OracleCycle> {
    let all = oracle_cycles(g);
    let Some(min) = all.iter().map(|c| c.length.clone()).min() else {
        return Vec::new();
    };
    all.into_iter().filter(|c| c.length == min).collect()
}

/// Every cycle shares a vertex with some systole.
pub fn oracle_topologically_fills(g: &MetricGraph) -> bool {
    let sys = oracle_systoles(g);
    let touched: BTreeSet<usize> = sys.iter().flat_map(|c| c.vertices.iter().copied()).collect();
    oracle_cycles(g)
        .iter()
        .all(|c| !c.vertices.is_disjoint(&touched))
}

pub fn oracle_geometrically_fills(g: &MetricGraph) -> bool {
    let covered: BTreeSet<EdgeId> = oracle_systoles(g).iter().flat_map(|c| c.edges.iter().copied()).collect();
    covered.len() == g.edge_count()
}

#[derive(Debug, PartialEq, Eq)]
pub struct OracleLattice {
    pub rank: usize,
    /// `None` for infinite index.
    pub index: Option<BigInt>,
}

/// Rank and index of the lattice spanned by the systole vectors inside
/// `H_1 = ker(boundary)`. Coordinates are taken on the complement of a
/// depth-first spanning tree, which identifies `H_1` with `Z^n`; the index is
/// the gcd of the maximal minors of the coordinate matrix.
pub fn oracle_lattice(g: &MetricGraph) -> OracleLattice {
    let n = g.rank();
    let tree = dfs_tree(g);
    let chords: Vec<usize> = (0..g.edge_count()).filter(|i| !tree.contains(i)).collect();
    let rows: Vec<Vec<i128>> = oracle_systoles(g)
        .iter()
        .map(|c| chords.iter().map(|&i| c.vector[i] as i128).collect())
        .collect();
    let rank = rational_rank(&rows, n);
    if rank < n {
        return OracleLattice { rank, index: None };
    }
    let mut g_acc = BigInt::zero();
    for subset in combinations(rows.len(), n) {
        let m: Vec<Vec<i128>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let d = BigInt::from(det(m)).abs();
        g_acc = g_acc.gcd(&d);
        if g_acc == BigInt::from(1) {
            break;
        }
    }
    OracleLattice {
        rank,
        index: Some(g_acc),
    }
}

fn dfs_tree(g: &MetricGraph) -> BTreeSet<usize> {
    let es = g.edges();
    let mut seen = vec![false; g.vertex_count()];
    let mut tree = BTreeSet::new();
    // start from the last vertex and prefer high edge positions, unlike the library
    let root = g.vertex_count() - 1;
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(&x) = stack.last() {
        let step = (0..es.len()).rev().find_map(|i| {
            let e = &es[i];
            let other = if e.u == x { e.v } else if e.v == x { e.u } else { return None };
            (!seen[other]).then_some((i, other))
        });
        match step {
            Some((i, y)) => {
                seen[y] = true;
                tree.insert(i);
                stack.push(y);
            }
            None => {
                stack.pop();
            }
        }
    }
    tree
}

fn rational_rank(rows: &[Vec<i128>], cols: usize) -> usize {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                for k in 0..cols {
                    let sub = &f * &m[rank][k];
                    m[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn det(mut m: Vec<Vec<i128>>) -> i128 {
    // Bareiss elimination keeps every intermediate an exact integer
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| m[r][k] != 0) else { return 0 };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().unwrap();
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}
