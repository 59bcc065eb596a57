//! Integer first homology via a spanning-tree basis, and the lattice spanned
//! by systole classes.
//!
//! With a spanning tree fixed, `H_1(g; Z)` is free on the chords (non-tree
//! edges): the class of a closed walk records how many times, with sign, it
//! crosses each chord.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cycle::{Cycle, Step};
use crate::cycles;
use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::graph::{EdgeCorrespondence, EdgeId, MetricGraph};
use crate::snf::{self, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyBasis {
    tree: BTreeSet<EdgeId>,
    chords: Vec<EdgeId>,
    /// Maps coordinates with respect to the basis of the graph this history
    /// started from to coordinates in this basis. Always unimodular.
    change_of_basis: IntMatrix,
}

impl HomologyBasis {
    /// Basis from the breadth-first spanning tree rooted at vertex 0,
    /// scanning incident edges by increasing id.
    pub fn new(g: &MetricGraph) -> Self {
        let adj = g.incidences();
        let mut seen = vec![false; g.vertex_count()];
        let mut tree = BTreeSet::new();
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            let mut inc = adj[x].clone();
            inc.sort_by_key(|i| g.edges()[i.edge].id);
            for i in inc {
                if !seen[i.other] {
                    seen[i.other] = true;
                    tree.insert(g.edges()[i.edge].id);
                    queue.push_back(i.other);
                }
            }
        }
        Self::from_tree(g, tree)
    }

    /// Basis whose tree contains the given forest, completed by increasing edge id.
    pub fn with_forest(g: &MetricGraph, forest: &BTreeSet<EdgeId>) -> Result<Self> {
        let mut dsu = Dsu::new(g.vertex_count());
        let mut tree = BTreeSet::new();
        for &id in forest {
            let e = g.edge(id).ok_or(Error::UnknownEdge(id))?;
            if !dsu.union(e.u, e.v) {
                return Err(Error::ContractionOfCycle(id));
            }
            tree.insert(id);
        }
        for e in g.edges() {
            if dsu.union(e.u, e.v) {
                tree.insert(e.id);
            }
        }
        Ok(Self::from_tree(g, tree))
    }

    fn from_tree(g: &MetricGraph, tree: BTreeSet<EdgeId>) -> Self {
        let chords: Vec<EdgeId> = g
            .edges()
            .iter()
            .map(|e| e.id)
            .filter(|id| !tree.contains(id))
            .collect();
        let n = chords.len();
        HomologyBasis {
            tree,
            chords,
            change_of_basis: snf::identity(n),
        }
    }

    pub fn tree(&self) -> &BTreeSet<EdgeId> {
        &self.tree
    }

    pub fn chords(&self) -> &[EdgeId] {
        &self.chords
    }

    pub fn rank(&self) -> usize {
        self.chords.len()
    }

    pub fn change_of_basis(&self) -> &IntMatrix {
        &self.change_of_basis
    }

    fn chord_index(&self) -> BTreeMap<EdgeId, usize> {
        self.chords.iter().enumerate().map(|(i, c)| (*c, i)).collect()
    }

    /// The cycle formed by chord `i` and the tree path joining its endpoints,
    /// oriented so the chord is traversed forward.
    pub fn fundamental_cycle(&self, g: &MetricGraph, i: usize) -> Cycle {
        let chord = g.edge(self.chords[i]).expect("chord belongs to graph");
        let mut steps = vec![Step {
            edge: chord.id,
            forward: true,
        }];
        steps.extend(self.tree_path(g, chord.v, chord.u));
        Cycle::from_steps(g, steps).expect("fundamental cycle is embedded")
    }

    fn tree_path(&self, g: &MetricGraph, from: usize, to: usize) -> Vec<Step> {
        let adj = g.incidences();
        let mut pred: Vec<Option<(usize, Step)>> = vec![None; g.vertex_count()];
        let mut seen = vec![false; g.vertex_count()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for inc in &adj[x] {
                let id = g.edges()[inc.edge].id;
                if self.tree.contains(&id) && !seen[inc.other] {
                    seen[inc.other] = true;
                    pred[inc.other] = Some((
                        x,
                        Step {
                            edge: id,
                            forward: inc.forward,
                        },
                    ));
                    queue.push_back(inc.other);
                }
            }
        }
        let mut path = Vec::new();
        let mut at = to;
        while at != from {
            let (p, s) = pred[at].expect("tree spans the graph");
            path.push(s);
            at = p;
        }
        path.reverse();
        path
    }

    /// Rebuilds the basis on the contracted graph and records the unimodular
    /// matrix taking old coordinates to new ones.
    pub fn transport(
        &self,
        old: &MetricGraph,
        new: &MetricGraph,
        corr: &EdgeCorrespondence,
    ) -> Result<(HomologyBasis, IntMatrix)> {
        let mut next = HomologyBasis::new(new);
        let n = self.rank();
        if next.rank() != n {
            return Err(Error::ForeignCycle("contraction changed the rank".into()));
        }
        let mut step_matrix = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            let image: Vec<Step> = self
                .fundamental_cycle(old, i)
                .steps()
                .iter()
                .filter_map(|s| {
                    corr.edges[&s.edge].map(|edge| Step {
                        edge,
                        forward: s.forward,
                    })
                })
                .collect();
            let class = walk_class(new, &next, &image)?;
            for (r, x) in class.into_iter().enumerate() {
                step_matrix[r][i] = BigInt::from(x);
            }
        }
        debug_assert!(snf::is_unimodular(&step_matrix));
        next.change_of_basis = snf::mul(&step_matrix, &self.change_of_basis, n, n);
        Ok((next, step_matrix))
    }
}

/// Chord coordinates of any closed walk given as steps.
pub fn walk_class(g: &MetricGraph, basis: &HomologyBasis, steps: &[Step]) -> Result<Vec<i64>> {
    let index = basis.chord_index();
    let mut class = vec![0i64; basis.rank()];
    for s in steps {
        if g.edge(s.edge).is_none() {
            return Err(Error::ForeignCycle(format!("edge {} not in graph", s.edge)));
        }
        if let Some(&i) = index.get(&s.edge) {
            class[i] += if s.forward { 1 } else { -1 };
        }
    }
    Ok(class)
}

/// Homology class of an embedded cycle in its canonical orientation.
pub fn cycle_class(g: &MetricGraph, basis: &HomologyBasis, c: &Cycle) -> Result<Vec<i64>> {
    walk_class(g, basis, c.steps())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeVerdict {
    /// One row per generating class.
    pub generators: Vec<Vec<i64>>,
    /// Rank of the ambient lattice `H_1`.
    pub ambient_rank: usize,
    pub rank: usize,
    pub divisors: Vec<BigInt>,
    pub index: LatticeIndex,
}

impl LatticeVerdict {
    pub fn from_classes(generators: Vec<Vec<i64>>, ambient_rank: usize) -> Self {
        let a: IntMatrix = generators
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let f = snf::smith_normal_form(&a, ambient_rank);
        if cfg!(debug_assertions) {
            assert!(snf::verify(&a, ambient_rank, &f), "Smith form certificate failed");
        }
        let rank = f.rank();
        let index = if rank == ambient_rank {
            LatticeIndex::Finite(f.divisors.iter().fold(BigInt::one(), |acc, d| acc * d))
        } else {
            LatticeIndex::Infinite
        };
        LatticeVerdict {
            generators,
            ambient_rank,
            rank,
            divisors: f.divisors,
            index,
        }
    }

    pub fn is_finite_index(&self) -> bool {
        matches!(self.index, LatticeIndex::Finite(_))
    }

    /// Same lattice invariants, ignoring the particular generator rows.
    pub fn same_invariants(&self, other: &Self) -> bool {
        self.ambient_rank == other.ambient_rank
            && self.rank == other.rank
            && self.divisors == other.divisors
            && self.index == other.index
    }
}

/// Lattice generated by the classes of a list of cycles.
pub fn lattice_of(g: &MetricGraph, cycles: &[Cycle]) -> Result<LatticeVerdict> {
    let basis = HomologyBasis::new(g);
    let rows = cycles
        .iter()
        .map(|c| cycle_class(g, &basis, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(LatticeVerdict::from_classes(rows, basis.rank()))
}

pub fn systole_lattice(g: &MetricGraph) -> Result<LatticeVerdict> {
    lattice_of(g, &cycles::all_systoles(g)?)
}

pub fn systole_lattice_capped(g: &MetricGraph, cap: usize) -> Result<LatticeVerdict> {
    lattice_of(g, &cycles::all_systoles_capped(g, cap)?)
}

/// Whether the systoles generate a finite-index subgroup of `H_1(g; Z)`.
pub fn is_well_rounded(g: &MetricGraph) -> Result<(bool, LatticeVerdict)> {
    let v = systole_lattice(g)?;
    Ok((v.rank == g.rank(), v))
}
