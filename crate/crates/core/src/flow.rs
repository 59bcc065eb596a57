//! The systolic retraction as an exact, event-driven piecewise flow.
//!
//! Within a segment, edges on some systole are scaled by `u` and the other
//! edges by `(1 - u*s) / (1 - s)`, where `s` is the total length of the
//! systole support. Volume stays 1 and every edge length is linear in `u`
//! (`u = e^t`), so each event is the root of a linear equation with rational
//! coefficients.
//!
//! A segment ends either when a cycle outside the current systole set
//! reaches the systole length (`NewSystoles`; the flow restarts from there
//! with the enlarged set) or at `u = 1/s`, when the non-systole edges reach
//! length zero and are contracted (`StageComplete`). The run stops once the
//! systoles cover every edge.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::cycle::Cycle;
use crate::cycles::{self, DEFAULT_CYCLE_CAP};
use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::fill::SystoleSupport;
use crate::graph::{EdgeId, MetricGraph, Mode};
use crate::homology::HomologyBasis;
use crate::rational::{self, Rational};
use crate::snf::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowState {
    pub graph: MetricGraph,
    pub systoles: Vec<Cycle>,
    pub support: SystoleSupport,
    /// Systole length at `u = 1`.
    pub sigma: Rational,
    pub u: Rational,
    cycle_cap: usize,
}

impl FlowState {
    pub fn new(graph: MetricGraph) -> Result<Self> {
        Self::with_cap(graph, DEFAULT_CYCLE_CAP)
    }

    pub fn with_cap(graph: MetricGraph, cycle_cap: usize) -> Result<Self> {
        let vol = graph.volume();
        if !vol.is_one() {
            return Err(Error::NotUnitVolume(rational::format(&vol)));
        }
        let (sigma, systoles) = cycles::minimum_cycles(&graph, &graph.lengths(), cycle_cap)?;
        let support = SystoleSupport::from_cycles(&graph, &systoles);
        Ok(FlowState {
            graph,
            systoles,
            support,
            sigma,
            u: Rational::one(),
            cycle_cap,
        })
    }

    /// Largest admissible parameter `1/s`.
    pub fn max_u(&self) -> Rational {
        Rational::one() / &self.support.length
    }

    fn in_support(&self) -> Vec<bool> {
        self.graph
            .edges()
            .iter()
            .map(|e| self.support.edges.contains(&e.id))
            .collect()
    }

    fn lengths_unchecked(&self, u: &Rational) -> Vec<Rational> {
        let s = &self.support.length;
        let one = Rational::one();
        let shrink = if s.is_one() {
            Rational::zero()
        } else {
            (&one - u * s) / (&one - s)
        };
        self.graph
            .edges()
            .iter()
            .zip(self.in_support())
            .map(|(e, on)| if on { &e.length * u } else { &e.length * &shrink })
            .collect()
    }

    /// Splits a cycle's base length into its support and non-support parts.
    fn split(&self, c: &Cycle) -> (Rational, Rational) {
        let mut on = Rational::zero();
        let mut off = Rational::zero();
        for id in c.edge_ids() {
            let e = self.graph.edge(id).expect("cycle edge belongs to graph");
            if self.support.edges.contains(&id) {
                on += &e.length;
            } else {
                off += &e.length;
            }
        }
        (on, off)
    }
}

/// Edge lengths (aligned with `state.graph.edges()`) at flow parameter `u`.
pub fn flow_lengths_at(state: &FlowState, u: &Rational) -> Result<Vec<Rational>> {
    let max = state.max_u();
    if *u < Rational::one() || *u > max {
        return Err(Error::ParameterOutOfRange {
            u: rational::format(u),
            max: rational::format(&max),
        });
    }
    Ok(state.lengths_unchecked(u))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    NewSystoles,
    StageComplete,
}

/// The next event of a segment, before it is applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NextEvent {
    pub kind: EventKind,
    pub u: Rational,
    /// Cycles of the current graph that become systoles at `u`.
    pub new_systoles: Vec<Cycle>,
    /// Edge lengths at `u`.
    pub lengths: Vec<Rational>,
}

/// Finds the first event after `state.u`.
///
/// Let `f(u)` be the least length over non-systole cycles; `f(u) - sigma*u`
/// is concave and piecewise linear, positive at `u = 1`. Starting from
/// `u = 1/s`, each step replaces `u` by the root of the linear piece active
/// there (the one of a currently shortest cycle); the iterates decrease to
/// the first root in finitely many steps.
pub fn next_event(state: &FlowState) -> Result<NextEvent> {
    let s = &state.support.length;
    if s.is_one() {
        return Err(Error::AlreadyFilling);
    }
    let one = Rational::one();
    let mut u = state.max_u();
    loop {
        let w = state.lengths_unchecked(&u);
        let target = &state.sigma * &u;
        let (m, witness) = cycles::girth_with_witness(&state.graph, &w).ok_or(Error::NoCycle)?;
        if m < target {
            // witness is not a systole: systoles have length exactly `target`
            let (on, off) = state.split(&witness);
            let denom = (&one - s) * (&state.sigma - &on) + s * &off;
            let next = &off / &denom;
            debug_assert!(next < u && next > one);
            u = next;
            continue;
        }
        debug_assert!(m == target);
        let minimal = cycles::cycles_up_to_weight(&state.graph, &w, &target, state.cycle_cap)?;
        let new_systoles: Vec<Cycle> = minimal
            .into_iter()
            .filter(|c| state.systoles.binary_search(c).is_err())
            .collect();
        if !new_systoles.is_empty() {
            debug_assert!(u > state.u);
            return Ok(NextEvent {
                kind: EventKind::NewSystoles,
                u,
                new_systoles,
                lengths: w,
            });
        }
        // Only reachable on the first trial: nothing catches up before 1/s.
        debug_assert!(u == state.max_u());
        let mut dsu = Dsu::new(state.graph.vertex_count());
        for e in state.graph.edges() {
            if !state.support.edges.contains(&e.id) && !dsu.union(e.u, e.v) {
                return Err(Error::DegenerateStage);
            }
        }
        return Ok(NextEvent {
            kind: EventKind::StageComplete,
            u,
            new_systoles: Vec::new(),
            lengths: w,
        });
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub kind: EventKind,
    /// Index of the stage (number of contractions before this event).
    pub stage: usize,
    /// Parameter of the segment that ended here, relative to the previous snapshot.
    pub u: Rational,
    /// Product of the segment parameters since the stage began; equals the
    /// growth factor of the systole length over the stage.
    pub stage_u: Rational,
    pub new_systoles: Vec<Cycle>,
    /// Edges contracted at this event (zero-length non-systole forest).
    pub contracted: Vec<EdgeId>,
    /// Change of homology coordinates across the contraction, when one happened.
    pub homology_change: Option<IntMatrix>,
    /// Graph after the event (after contraction, if any).
    pub graph: MetricGraph,
    pub systole_length: Rational,
    pub systole_count: usize,
    pub support_betti: usize,
}

impl Event {
    /// `t = ln u`, for display.
    pub fn t_approx(&self) -> f64 {
        rational::to_f64(&self.u).ln()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub initial: MetricGraph,
    pub initial_systole_length: Rational,
    pub initial_support_betti: usize,
    pub events: Vec<Event>,
}

impl Trajectory {
    pub fn final_graph(&self) -> &MetricGraph {
        self.events.last().map_or(&self.initial, |e| &e.graph)
    }

    pub fn final_systole_length(&self) -> &Rational {
        self.events
            .last()
            .map_or(&self.initial_systole_length, |e| &e.systole_length)
    }

    pub fn contraction_count(&self) -> usize {
        self.events.iter().filter(|e| !e.contracted.is_empty()).count()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlowLimits {
    /// Defaults to ten times the edge count of the input.
    pub max_events_per_stage: Option<usize>,
    /// Defaults to ten times the vertex count of the input.
    pub max_contractions: Option<usize>,
    /// Cycle enumeration cap; `None` means [`DEFAULT_CYCLE_CAP`].
    pub cycle_cap: Option<usize>,
    /// Accept degree-2 vertices and rank 1.
    pub permissive: bool,
}

/// Runs the flow from `g` until the systoles cover the whole graph.
pub fn retract_to_spine(g: &MetricGraph, limits: &FlowLimits) -> Result<Trajectory> {
    g.check_mode(if limits.permissive {
        Mode::Permissive
    } else {
        Mode::OuterSpace
    })?;
    let max_events = limits.max_events_per_stage.unwrap_or(10 * g.edge_count());
    let max_contractions = limits.max_contractions.unwrap_or(10 * g.vertex_count());
    let cap = limits.cycle_cap.unwrap_or(DEFAULT_CYCLE_CAP);

    let mut state = FlowState::with_cap(g.clone(), cap)?;
    let mut traj = Trajectory {
        initial: g.clone(),
        initial_systole_length: state.sigma.clone(),
        initial_support_betti: state.support.betti(g),
        events: Vec::new(),
    };
    let mut stage = 0;
    let mut in_stage = 0;
    let mut stage_u = Rational::one();

    while !state.support.fills_geometrically(&state.graph) {
        if in_stage == max_events {
            return Err(Error::CapExceeded {
                what: "events per stage",
                cap: max_events,
                partial: Box::new(traj),
            });
        }
        let next = next_event(&state)?;
        in_stage += 1;
        stage_u *= &next.u;

        let zero: BTreeSet<EdgeId> = state
            .graph
            .edges()
            .iter()
            .zip(&next.lengths)
            .filter(|(_, l)| l.is_zero())
            .map(|(e, _)| e.id)
            .collect();
        let (graph, homology_change) = if zero.is_empty() {
            (state.graph.with_lengths(&next.lengths)?, None)
        } else {
            if traj.contraction_count() == max_contractions {
                return Err(Error::CapExceeded {
                    what: "contractions",
                    cap: max_contractions,
                    partial: Box::new(traj),
                });
            }
            let (h, corr) = state.graph.contract_forest(&zero).map_err(|e| match e {
                Error::ContractionOfCycle(_) => Error::DegenerateStage,
                other => other,
            })?;
            let survivors: Vec<Rational> = state
                .graph
                .edges()
                .iter()
                .zip(&next.lengths)
                .filter(|(e, _)| !zero.contains(&e.id))
                .map(|(_, l)| l.clone())
                .collect();
            let h = h.with_lengths(&survivors)?;
            let basis = HomologyBasis::new(&state.graph);
            let (_, change) = basis.transport(&state.graph, &h, &corr)?;
            (h, Some(change))
        };
        debug_assert!(graph.volume().is_one());
        debug_assert!(graph.check_mode(Mode::OuterSpace).is_ok());

        let next_state = FlowState::with_cap(graph.clone(), cap)?;
        debug_assert!(next_state.support.edges.len() > state.support.edges.len() || !zero.is_empty());
        traj.events.push(Event {
            kind: next.kind,
            stage,
            u: next.u,
            stage_u: stage_u.clone(),
            new_systoles: next.new_systoles,
            contracted: zero.iter().copied().collect(),
            homology_change,
            graph,
            systole_length: next_state.sigma.clone(),
            systole_count: next_state.systoles.len(),
            support_betti: next_state.support.betti(&next_state.graph),
        });
        if !zero.is_empty() {
            stage += 1;
            in_stage = 0;
            stage_u = Rational::one();
        }
        state = next_state;
    }
    Ok(traj)
}
