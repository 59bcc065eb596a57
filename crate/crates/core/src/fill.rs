//! Systole support and the filling predicates.

use std::collections::BTreeSet;

use crate::cycle::Cycle;
use crate::cycles::{self, DEFAULT_CYCLE_CAP};
use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::graph::{subgraph_betti, EdgeId, MetricGraph};
use crate::homology::{self, LatticeVerdict};
use crate::rational::Rational;

/// Union of the systoles: the edges and vertices lying on some systole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystoleSupport {
    pub edges: BTreeSet<EdgeId>,
    pub vertices: BTreeSet<usize>,
    /// Total length of `edges`.
    pub length: Rational,
}

impl SystoleSupport {
    pub fn from_cycles(g: &MetricGraph, systoles: &[Cycle]) -> Self {
        let mut edges = BTreeSet::new();
        let mut vertices = BTreeSet::new();
        for c in systoles {
            edges.extend(c.edge_ids());
            vertices.extend(c.vertices(g));
        }
        let length = g.total_length_of(edges.iter().copied());
        SystoleSupport {
            edges,
            vertices,
            length,
        }
    }

    /// Edges on no systole.
    pub fn complement(&self, g: &MetricGraph) -> BTreeSet<EdgeId> {
        g.edges()
            .iter()
            .map(|e| e.id)
            .filter(|id| !self.edges.contains(id))
            .collect()
    }

    /// First Betti number of the (possibly disconnected) support subgraph.
    pub fn betti(&self, g: &MetricGraph) -> usize {
        subgraph_betti(g, &self.edges)
    }

    /// True iff the part of `g` disjoint from the support is a forest.
    pub fn fills_topologically(&self, g: &MetricGraph) -> bool {
        let mut dsu = Dsu::new(g.vertex_count());
        for e in g.edges() {
            if self.vertices.contains(&e.u) || self.vertices.contains(&e.v) {
                continue;
            }
            if !dsu.union(e.u, e.v) {
                return false;
            }
        }
        true
    }

    pub fn fills_geometrically(&self, g: &MetricGraph) -> bool {
        self.edges.len() == g.edge_count()
    }
}

pub fn systole_support(g: &MetricGraph) -> Result<SystoleSupport> {
    systole_support_capped(g, DEFAULT_CYCLE_CAP)
}

pub fn systole_support_capped(g: &MetricGraph, cap: usize) -> Result<SystoleSupport> {
    let systoles = cycles::all_systoles_capped(g, cap)?;
    Ok(SystoleSupport::from_cycles(g, &systoles))
}

/// Every component of the complement of the systole union is contractible.
pub fn topologically_fills(g: &MetricGraph) -> Result<bool> {
    Ok(systole_support(g)?.fills_topologically(g))
}

/// The systole union is the whole graph.
pub fn geometrically_fills(g: &MetricGraph) -> Result<bool> {
    Ok(systole_support(g)?.fills_geometrically(g))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub in_w: bool,
    pub in_v: bool,
    pub in_vprime: bool,
    pub systoles: Vec<Cycle>,
    pub systole_length: Rational,
    pub lattice: LatticeVerdict,
    pub support: SystoleSupport,
}

/// Classifies `g` as well-rounded (`in_w`), topologically filling (`in_v`)
/// and geometrically filling (`in_vprime`). Rank-1 graphs are refused.
pub fn classify_membership(g: &MetricGraph) -> Result<Membership> {
    classify_membership_capped(g, DEFAULT_CYCLE_CAP)
}

pub fn classify_membership_capped(g: &MetricGraph, cap: usize) -> Result<Membership> {
    if g.rank() < 2 {
        return Err(Error::RankTooSmall {
            rank: g.rank(),
            min: 2,
        });
    }
    let (systole_length, systoles) = cycles::minimum_cycles(g, &g.lengths(), cap)?;
    let support = SystoleSupport::from_cycles(g, &systoles);
    let lattice = homology::lattice_of(g, &systoles)?;
    let in_w = lattice.rank == g.rank();
    let in_v = support.fills_topologically(g);
    let in_vprime = support.fills_geometrically(g);
    debug_assert!(!in_w || in_v, "well-rounded graph must fill topologically");
    debug_assert!(!in_vprime || in_v);
    Ok(Membership {
        in_w,
        in_v,
        in_vprime,
        systoles,
        systole_length,
        lattice,
        support,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn theta() -> MetricGraph {
        MetricGraph::from_triples(
            "theta",
            2,
            &[(0, 1, rat(1, 3)), (0, 1, rat(1, 3)), (0, 1, rat(1, 3))],
        )
        .unwrap()
    }

    fn dumbbell(a: Rational, b: Rational, bar: Rational) -> MetricGraph {
        MetricGraph::from_triples("dumbbell", 2, &[(0, 0, a), (1, 1, b), (0, 1, bar)]).unwrap()
    }

    #[test]
    fn support_examples() {
        let s = systole_support(&theta()).unwrap();
        assert_eq!(s.edges.len(), 3);
        assert_eq!(s.length, rat(1, 1));

        let d = dumbbell(rat(1, 3), rat(1, 3), rat(1, 3));
        let s = systole_support(&d).unwrap();
        assert_eq!(s.edges, [EdgeId(0), EdgeId(1)].into());
        assert_eq!(s.length, rat(2, 3));

        let d = dumbbell(rat(1, 4), rat(5, 12), rat(1, 3));
        let s = systole_support(&d).unwrap();
        assert_eq!(s.edges, [EdgeId(0)].into());
        assert_eq!(s.length, rat(1, 4));
    }

    #[test]
    fn filling_examples() {
        let eq = dumbbell(rat(1, 3), rat(1, 3), rat(1, 3));
        let uneq = dumbbell(rat(1, 4), rat(5, 12), rat(1, 3));
        assert!(topologically_fills(&eq).unwrap());
        assert!(!topologically_fills(&uneq).unwrap());
        assert!(topologically_fills(&theta()).unwrap());
        assert!(geometrically_fills(&theta()).unwrap());
        assert!(!geometrically_fills(&eq).unwrap());
    }

    #[test]
    fn membership_examples() {
        let m = classify_membership(&dumbbell(rat(1, 3), rat(1, 3), rat(1, 3))).unwrap();
        assert_eq!((m.in_w, m.in_v, m.in_vprime), (true, true, false));
        let m = classify_membership(&theta()).unwrap();
        assert_eq!((m.in_w, m.in_v, m.in_vprime), (true, true, true));
        let m = classify_membership(&dumbbell(rat(1, 4), rat(5, 12), rat(1, 3))).unwrap();
        assert_eq!((m.in_w, m.in_v, m.in_vprime), (false, false, false));
    }

    #[test]
    fn rank_one_refused() {
        let c = MetricGraph::from_triples("c", 1, &[(0, 0, rat(1, 1))]).unwrap();
        assert!(matches!(classify_membership(&c), Err(Error::RankTooSmall { rank: 1, .. })));
    }

    #[test]
    fn touching_at_a_vertex_counts_as_meeting() {
        // two loops at vertex 0 (one short), a long loop at vertex 1 and a bar;
        // plus a second short loop at vertex 1 so the long loop touches the support
        let g = MetricGraph::from_triples(
            "t",
            2,
            &[
                (0, 0, rat(1, 10)),
                (1, 1, rat(1, 10)),
                (1, 1, rat(1, 2)),
                (0, 1, rat(3, 10)),
            ],
        )
        .unwrap();
        assert!(topologically_fills(&g).unwrap());
        assert!(!geometrically_fills(&g).unwrap());
    }
}
