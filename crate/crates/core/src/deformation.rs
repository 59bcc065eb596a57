//! Local dimension of the set of metrics on a fixed graph that keep a given
//! systole set, compared with `2n - 3`.
//!
//! Keeping `F` systoles of equal length imposes `F - 1` linear equations on
//! the edge lengths; with the volume hyperplane the solution set through the
//! current metric is an affine space of dimension `E - 1 - rank(differences)`.
//! Since the systoles are strictly shorter than every other cycle at the base
//! point, a neighbourhood of it in that affine space keeps the same systoles.

use num_traits::{One, Signed, Zero};

use crate::cycle::Cycle;
use crate::cycles::{self, DEFAULT_CYCLE_CAP};
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::linalg;
use crate::rational::{self, Rational};

/// Rows `1[gamma_{i+1}] - 1[gamma_i]` for consecutive cycles, then the all-ones row.
pub fn equality_system_for(g: &MetricGraph, systoles: &[Cycle]) -> Vec<Vec<Rational>> {
    let indicator = |c: &Cycle| {
        let ids = c.edge_ids();
        g.edges()
            .iter()
            .map(|e| {
                if ids.contains(&e.id) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect::<Vec<_>>()
    };
    let rows: Vec<Vec<Rational>> = systoles.iter().map(indicator).collect();
    let mut out: Vec<Vec<Rational>> = rows
        .windows(2)
        .map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect())
        .collect();
    out.push(vec![Rational::one(); g.edge_count()]);
    out
}

pub fn systole_equality_system(g: &MetricGraph) -> Result<Vec<Vec<Rational>>> {
    Ok(equality_system_for(g, &cycles::all_systoles(g)?))
}

/// Directions of motion (aligned with `g.edges()`) that keep the given
/// cycles of equal length and the volume fixed.
pub fn tangent_basis(g: &MetricGraph, systoles: &[Cycle]) -> Vec<Vec<Rational>> {
    linalg::kernel(&equality_system_for(g, systoles), g.edge_count())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationRecord {
    pub edges: usize,
    pub systoles: usize,
    /// Rank of the `F - 1` difference rows.
    pub rank_diff: usize,
    pub dim: usize,
    /// `E - F`, a lower bound for `dim`.
    pub lower_bound: i64,
    pub systole_length: Rational,
    /// Least length of a cycle outside the systole set, if any.
    pub next_length: Option<Rational>,
    /// The normalized base metric is a strictly positive solution of the
    /// system, so the linear dimension is attained inside the positive orthant.
    pub positive_point: bool,
}

pub fn local_deformation_dimension(g: &MetricGraph) -> Result<DeformationRecord> {
    let systoles = cycles::all_systoles(g)?;
    local_deformation_dimension_for(g, &systoles, DEFAULT_CYCLE_CAP)
}

/// Same as [`local_deformation_dimension`] for a prescribed systole set.
///
/// Fails with `NotStrictlyShorter` unless the prescribed cycles all have the
/// same length and every other cycle is strictly longer.
pub fn local_deformation_dimension_for(
    g: &MetricGraph,
    systoles: &[Cycle],
    cap: usize,
) -> Result<DeformationRecord> {
    let first = systoles.first().ok_or(Error::NoCycle)?;
    let lengths = g.lengths();
    let sigma = first.weight(g, &lengths);
    for c in systoles {
        let l = c.weight(g, &lengths);
        if l != sigma {
            let (lo, hi) = if l < sigma { (l, sigma.clone()) } else { (sigma.clone(), l) };
            return Err(Error::NotStrictlyShorter {
                length: rational::format(&lo),
                systole: rational::format(&hi),
            });
        }
    }
    let mut prescribed = systoles.to_vec();
    prescribed.sort();
    prescribed.dedup();
    for c in cycles::cycles_up_to_weight(g, &lengths, &sigma, cap)? {
        if prescribed.binary_search(&c).is_err() {
            return Err(Error::NotStrictlyShorter {
                length: rational::format(&c.weight(g, &lengths)),
                systole: rational::format(&sigma),
            });
        }
    }
    let next_length = cycles::shortest_cycle_above(g, &lengths, &sigma).map(|(l, _)| l);

    let system = equality_system_for(g, &prescribed);
    let diff = &system[..system.len() - 1];
    let e = g.edge_count();
    let rank_diff = linalg::rank(diff, e);
    let dim = e - 1 - rank_diff;
    let f = prescribed.len();
    debug_assert!(dim as i64 >= e as i64 - f as i64);

    let base = g.normalize_volume().lengths();
    let positive_point = base.iter().all(|x| x.is_positive())
        && system.iter().enumerate().all(|(i, row)| {
            let val: Rational = row.iter().zip(&base).map(|(a, b)| a * b).sum();
            if i + 1 == system.len() {
                val.is_one()
            } else {
                val.is_zero()
            }
        });

    Ok(DeformationRecord {
        edges: e,
        systoles: f,
        rank_diff,
        dim,
        lower_bound: e as i64 - f as i64,
        systole_length: sigma,
        next_length,
        positive_point,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VcdWitness {
    pub dim: usize,
    pub vcd: i64,
    pub exceeds: bool,
}

impl VcdWitness {
    pub fn from_record(g: &MetricGraph, rec: &DeformationRecord) -> Self {
        let vcd = 2 * g.rank() as i64 - 3;
        VcdWitness {
            dim: rec.dim,
            vcd,
            exceeds: rec.dim as i64 > vcd,
        }
    }
}

pub fn vcd_witness(g: &MetricGraph) -> Result<VcdWitness> {
    let rec = local_deformation_dimension(g)?;
    Ok(VcdWitness::from_record(g, &rec))
}
