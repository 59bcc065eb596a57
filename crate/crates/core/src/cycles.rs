//! Weighted girth, systole enumeration and bounded cycle search.
//!
//! Every search runs over embedded cycles only. A cycle is attributed to its
//! edge of smallest position, and the rest of it is a simple path between
//! that edge's endpoints using higher-positioned edges only. This makes each
//! enumeration duplicate-free without a seen-set, and Dijkstra distances in
//! the same restricted graph give admissible pruning bounds.
//!
//! Weight vectors are aligned with [`MetricGraph::edges`] and may contain
//! zeros (the flow evaluates lengths at the end of a stage, where the
//! shrinking edges have length 0).

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::cycle::{Cycle, Step};
use crate::error::{Error, Result};
use crate::graph::{Incidence, MetricGraph};
use crate::rational::Rational;

pub const DEFAULT_CYCLE_CAP: usize = 10_000_000;

/// Marks bridges (edges on no cycle). Loops are never bridges.
pub fn bridges(g: &MetricGraph) -> Vec<bool> {
    let adj = g.incidences();
    let n = g.vertex_count();
    let mut is_bridge = vec![false; g.edge_count()];
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    // iterative DFS: (vertex, edge used to enter, next incidence index)
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        let mut stack = vec![(root, usize::MAX, 0usize)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (x, via, ref mut next)) = stack.last_mut() {
            if *next < adj[x].len() {
                let inc = adj[x][*next];
                *next += 1;
                if inc.edge == via {
                    continue;
                }
                let y = inc.other;
                if disc[y] == usize::MAX {
                    disc[y] = timer;
                    low[y] = timer;
                    timer += 1;
                    stack.push((y, inc.edge, 0));
                } else {
                    low[x] = low[x].min(disc[y]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[x]);
                    if low[x] > disc[parent] {
                        is_bridge[via] = true;
                    }
                }
            }
        }
    }
    is_bridge
}

struct Search<'a> {
    g: &'a MetricGraph,
    adj: Vec<Vec<Incidence>>,
    bridge: Vec<bool>,
    w: &'a [Rational],
}

impl<'a> Search<'a> {
    fn new(g: &'a MetricGraph, w: &'a [Rational]) -> Self {
        assert_eq!(w.len(), g.edge_count(), "weight vector size mismatch");
        Search {
            g,
            adj: g.incidences(),
            bridge: bridges(g),
            w,
        }
    }

    fn usable(&self, j: usize) -> bool {
        !self.bridge[j] && !self.g.edges()[j].is_loop()
    }

    /// Dijkstra from `src` over usable edges accepted by `allowed`.
    /// Returns distances and, per vertex, the incidence used to reach it.
    fn dijkstra(
        &self,
        src: usize,
        allowed: impl Fn(usize) -> bool,
    ) -> (Vec<Option<Rational>>, Vec<Option<(usize, Incidence)>>) {
        let n = self.g.vertex_count();
        let mut dist: Vec<Option<Rational>> = vec![None; n];
        let mut pred = vec![None; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[src] = Some(Rational::from_integer(0.into()));
        heap.push(Reverse((Rational::from_integer(0.into()), src)));
        while let Some(Reverse((d, x))) = heap.pop() {
            if done[x] {
                continue;
            }
            done[x] = true;
            for inc in &self.adj[x] {
                if !self.usable(inc.edge) || !allowed(inc.edge) {
                    continue;
                }
                let nd = &d + &self.w[inc.edge];
                let y = inc.other;
                if dist[y].as_ref().is_none_or(|old| nd < *old) {
                    dist[y] = Some(nd.clone());
                    pred[y] = Some((x, *inc));
                    heap.push(Reverse((nd, y)));
                }
            }
        }
        (dist, pred)
    }

    fn step(&self, j: usize, forward: bool) -> Step {
        Step {
            edge: self.g.edges()[j].id,
            forward,
        }
    }

    /// Minimum cycle weight with one witness (not necessarily canonical-minimal).
    fn girth_witness(&self) -> Option<(Rational, Cycle)> {
        let mut best: Option<(Rational, Cycle)> = None;
        for (i, e) in self.g.edges().iter().enumerate() {
            if self.bridge[i] {
                continue;
            }
            if e.is_loop() {
                if best.as_ref().is_none_or(|(b, _)| self.w[i] < *b) {
                    best = Some((self.w[i].clone(), Cycle::from_steps_unchecked(vec![self.step(i, true)])));
                }
                continue;
            }
            let (dist, pred) = self.dijkstra(e.u, |j| j != i);
            let Some(d) = &dist[e.v] else { continue };
            let total = d + &self.w[i];
            if best.as_ref().is_none_or(|(b, _)| total < *b) {
                let mut steps = Vec::new();
                let mut at = e.v;
                while at != e.u {
                    let (prev, inc) = pred[at].expect("reached vertex has predecessor");
                    steps.push(self.step(inc.edge, inc.forward));
                    at = prev;
                }
                steps.reverse();
                steps.push(self.step(i, false));
                best = Some((total, Cycle::from_steps_unchecked(steps)));
            }
        }
        best
    }

    /// All embedded cycles of weight at most `bound`.
    fn up_to(&self, bound: &Rational, cap: usize) -> Result<Vec<Cycle>> {
        let mut out = Vec::new();
        let n = self.g.vertex_count();
        for (i, e) in self.g.edges().iter().enumerate() {
            if self.bridge[i] {
                continue;
            }
            if e.is_loop() {
                if self.w[i] <= *bound {
                    out.push(Cycle::from_steps_unchecked(vec![self.step(i, true)]));
                    if out.len() > cap {
                        return Err(Error::BudgetExceeded { cap });
                    }
                }
                continue;
            }
            let (dist, _) = self.dijkstra(e.u, |j| j > i);
            match &dist[e.v] {
                Some(d) if &(d + &self.w[i]) <= bound => {}
                _ => continue,
            }
            let mut visited = vec![false; n];
            visited[e.v] = true;
            let mut path = vec![self.step(i, true)];
            let mut ctx = Dfs {
                s: self,
                min_edge: i,
                target: e.u,
                bound,
                dist: &dist,
                visited: &mut visited,
                path: &mut path,
                out: &mut out,
                cap,
            };
            ctx.go(e.v, self.w[i].clone())?;
        }
        out.sort();
        Ok(out)
    }

    /// Least cycle weight strictly above `threshold`, with every cycle attaining it.
    fn min_above(&self, threshold: &Rational) -> Option<(Rational, Vec<Cycle>)> {
        struct State {
            at: usize,
            len: Rational,
            visited: Vec<bool>,
            path: Vec<Step>,
        }
        let mut best: Option<Rational> = None;
        let mut found: Vec<Cycle> = Vec::new();
        let offer = |len: Rational, c: Cycle, best: &mut Option<Rational>, found: &mut Vec<Cycle>| {
            match best {
                Some(b) if len > *b => {}
                Some(b) if len == *b => found.push(c),
                _ => {
                    *best = Some(len);
                    found.clear();
                    found.push(c);
                }
            }
        };
        for (i, e) in self.g.edges().iter().enumerate() {
            if self.bridge[i] {
                continue;
            }
            if e.is_loop() {
                if self.w[i] > *threshold {
                    let c = Cycle::from_steps_unchecked(vec![self.step(i, true)]);
                    offer(self.w[i].clone(), c, &mut best, &mut found);
                }
                continue;
            }
            let (dist, _) = self.dijkstra(e.u, |j| j > i);
            let Some(dv) = &dist[e.v] else { continue };
            let lb = dv + &self.w[i];
            if best.as_ref().is_some_and(|b| lb > *b) {
                continue;
            }
            let mut states: Vec<State> = Vec::new();
            let mut heap = BinaryHeap::new();
            let mut visited = vec![false; self.g.vertex_count()];
            visited[e.v] = true;
            states.push(State {
                at: e.v,
                len: self.w[i].clone(),
                visited,
                path: vec![self.step(i, true)],
            });
            heap.push(Reverse((lb, 0usize)));
            while let Some(Reverse((f, id))) = heap.pop() {
                if best.as_ref().is_some_and(|b| f > *b) {
                    break;
                }
                let st = std::mem::replace(
                    &mut states[id],
                    State {
                        at: 0,
                        len: Rational::from_integer(0.into()),
                        visited: Vec::new(),
                        path: Vec::new(),
                    },
                );
                if st.at == e.u {
                    if st.len > *threshold {
                        let c = Cycle::from_steps_unchecked(st.path);
                        offer(st.len, c, &mut best, &mut found);
                    }
                    continue;
                }
                for inc in &self.adj[st.at] {
                    let j = inc.edge;
                    if j <= i || !self.usable(j) {
                        continue;
                    }
                    let y = inc.other;
                    let len = &st.len + &self.w[j];
                    let f = if y == e.u {
                        len.clone()
                    } else if st.visited[y] {
                        continue;
                    } else {
                        match &dist[y] {
                            Some(d) => &len + d,
                            None => continue,
                        }
                    };
                    let mut visited = st.visited.clone();
                    visited[y] = true;
                    let mut path = st.path.clone();
                    path.push(self.step(j, inc.forward));
                    states.push(State {
                        at: y,
                        len,
                        visited,
                        path,
                    });
                    heap.push(Reverse((f, states.len() - 1)));
                }
            }
        }
        let best = best?;
        found.sort();
        found.dedup();
        Some((best, found))
    }
}

struct Dfs<'s, 'a> {
    s: &'s Search<'a>,
    min_edge: usize,
    target: usize,
    bound: &'s Rational,
    dist: &'s [Option<Rational>],
    visited: &'s mut Vec<bool>,
    path: &'s mut Vec<Step>,
    out: &'s mut Vec<Cycle>,
    cap: usize,
}

impl Dfs<'_, '_> {
    fn go(&mut self, x: usize, len: Rational) -> Result<()> {
        for inc in &self.s.adj[x] {
            let j = inc.edge;
            if j <= self.min_edge || !self.s.usable(j) {
                continue;
            }
            let y = inc.other;
            let nl = &len + &self.s.w[j];
            if y == self.target {
                if nl <= *self.bound {
                    self.path.push(self.s.step(j, inc.forward));
                    self.out.push(Cycle::from_steps_unchecked(self.path.clone()));
                    self.path.pop();
                    if self.out.len() > self.cap {
                        return Err(Error::BudgetExceeded { cap: self.cap });
                    }
                }
                continue;
            }
            if self.visited[y] {
                continue;
            }
            match &self.dist[y] {
                Some(d) if &(&nl + d) <= self.bound => {}
                _ => continue,
            }
            self.visited[y] = true;
            self.path.push(self.s.step(j, inc.forward));
            self.go(y, nl)?;
            self.path.pop();
            self.visited[y] = false;
        }
        Ok(())
    }
}

/// Minimum cycle weight, or `None` for a forest.
pub fn girth(g: &MetricGraph, weights: &[Rational]) -> Option<Rational> {
    Search::new(g, weights).girth_witness().map(|(l, _)| l)
}

/// Minimum cycle weight with some witness cycle. Cheaper than
/// [`shortest_cycle`], which picks the canonically smallest witness.
pub fn girth_with_witness(g: &MetricGraph, weights: &[Rational]) -> Option<(Rational, Cycle)> {
    Search::new(g, weights).girth_witness()
}

/// Minimum total weight over embedded cycles and the canonically smallest
/// cycle attaining it.
pub fn shortest_cycle(g: &MetricGraph, weights: &[Rational]) -> Result<(Rational, Cycle)> {
    let (len, mut cycles) = minimum_cycles(g, weights, DEFAULT_CYCLE_CAP)?;
    Ok((len, cycles.swap_remove(0)))
}

/// The minimum weight and every cycle attaining it, canonically sorted.
pub fn minimum_cycles(g: &MetricGraph, weights: &[Rational], cap: usize) -> Result<(Rational, Vec<Cycle>)> {
    let s = Search::new(g, weights);
    let (len, _) = s.girth_witness().ok_or(Error::NoCycle)?;
    let cycles = s.up_to(&len, cap)?;
    debug_assert!(!cycles.is_empty());
    Ok((len, cycles))
}

/// All systoles of `g` under its own edge lengths.
pub fn all_systoles(g: &MetricGraph) -> Result<Vec<Cycle>> {
    all_systoles_capped(g, DEFAULT_CYCLE_CAP)
}

pub fn all_systoles_capped(g: &MetricGraph, cap: usize) -> Result<Vec<Cycle>> {
    minimum_cycles(g, &g.lengths(), cap).map(|(_, c)| c)
}

/// Every embedded cycle of length at most `bound` under `g`'s lengths.
pub fn cycles_up_to_length(g: &MetricGraph, bound: &Rational) -> Result<Vec<Cycle>> {
    cycles_up_to_weight(g, &g.lengths(), bound, DEFAULT_CYCLE_CAP)
}

pub fn cycles_up_to_weight(
    g: &MetricGraph,
    weights: &[Rational],
    bound: &Rational,
    cap: usize,
) -> Result<Vec<Cycle>> {
    Search::new(g, weights).up_to(bound, cap)
}

/// The least cycle weight strictly greater than `threshold` and the
/// canonically smallest cycle attaining it.
pub fn shortest_cycle_above(
    g: &MetricGraph,
    weights: &[Rational],
    threshold: &Rational,
) -> Option<(Rational, Cycle)> {
    min_cycles_above(g, weights, threshold).map(|(l, mut c)| (l, c.swap_remove(0)))
}

/// Like [`shortest_cycle_above`] but returns every cycle attaining the value.
pub fn min_cycles_above(
    g: &MetricGraph,
    weights: &[Rational],
    threshold: &Rational,
) -> Option<(Rational, Vec<Cycle>)> {
    Search::new(g, weights).min_above(threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeId;
    use crate::rational::{int, rat};

    fn theta(a: Rational, b: Rational, c: Rational) -> MetricGraph {
        MetricGraph::from_triples("theta", 2, &[(0, 1, a), (0, 1, b), (0, 1, c)]).unwrap()
    }

    fn dumbbell(a: Rational, b: Rational, bar: Rational) -> MetricGraph {
        MetricGraph::from_triples("dumbbell", 2, &[(0, 0, a), (1, 1, b), (0, 1, bar)]).unwrap()
    }

    fn k4() -> MetricGraph {
        let l = rat(1, 6);
        MetricGraph::from_triples(
            "k4",
            4,
            &[
                (0, 1, l.clone()),
                (0, 2, l.clone()),
                (0, 3, l.clone()),
                (1, 2, l.clone()),
                (1, 3, l.clone()),
                (2, 3, l),
            ],
        )
        .unwrap()
    }

    fn ids(c: &Cycle) -> Vec<u32> {
        c.edge_sequence().iter().map(|e| e.0).collect()
    }

    #[test]
    fn bridges_found() {
        let g = dumbbell(rat(1, 3), rat(1, 3), rat(1, 3));
        assert_eq!(bridges(&g), vec![false, false, true]);
        assert_eq!(bridges(&k4()), vec![false; 6]);
    }

    #[test]
    fn shortest_cycle_examples() {
        let t = theta(rat(1, 3), rat(1, 3), rat(1, 3));
        let (l, c) = shortest_cycle(&t, &t.lengths()).unwrap();
        assert_eq!(l, rat(2, 3));
        assert_eq!(ids(&c), vec![0, 1]);

        let d = dumbbell(rat(1, 3), rat(1, 3), rat(1, 3));
        let (l, c) = shortest_cycle(&d, &d.lengths()).unwrap();
        assert_eq!(l, rat(1, 3));
        assert_eq!(ids(&c), vec![0]);
    }

    #[test]
    fn tree_has_no_cycle() {
        let g = MetricGraph::from_triples("p", 3, &[(0, 1, int(1)), (1, 2, int(1))]).unwrap();
        assert!(matches!(shortest_cycle(&g, &g.lengths()), Err(Error::NoCycle)));
        assert!(matches!(all_systoles(&g), Err(Error::NoCycle)));
        assert_eq!(shortest_cycle_above(&g, &g.lengths(), &int(0)), None);
    }

    #[test]
    fn systole_sets() {
        let t = theta(rat(1, 3), rat(1, 3), rat(1, 3));
        let s = all_systoles(&t).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|c| c.length(&t) == rat(2, 3)));

        let s = all_systoles(&k4()).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|c| c.edge_count() == 3 && c.length(&k4()) == rat(1, 2)));

        let d = dumbbell(rat(1, 4), rat(5, 12), rat(1, 3));
        let s = all_systoles(&d).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].edge_ids(), [EdgeId(0)].into());
    }

    #[test]
    fn bounded_enumeration() {
        let t = theta(rat(1, 3), rat(1, 3), rat(1, 3));
        assert_eq!(cycles_up_to_length(&t, &rat(2, 3)).unwrap().len(), 3);
        let c = cycles_up_to_length(&k4(), &rat(2, 3)).unwrap();
        assert_eq!(c.len(), 7);
        assert_eq!(c.iter().filter(|c| c.edge_count() == 4).count(), 3);
        assert!(matches!(
            cycles_up_to_weight(&k4(), &k4().lengths(), &rat(2, 3), 5),
            Err(Error::BudgetExceeded { cap: 5 })
        ));
    }

    #[test]
    fn above_threshold() {
        let t = theta(rat(1, 3), rat(1, 3), rat(1, 3));
        assert_eq!(shortest_cycle_above(&t, &t.lengths(), &rat(2, 3)), None);

        let (l, c) = shortest_cycle_above(&k4(), &k4().lengths(), &rat(1, 2)).unwrap();
        assert_eq!(l, rat(2, 3));
        assert_eq!(c.edge_count(), 4);
        let (_, all) = min_cycles_above(&k4(), &k4().lengths(), &rat(1, 2)).unwrap();
        assert_eq!(all.len(), 3);

        let d = dumbbell(rat(1, 3), rat(1, 3), rat(1, 3));
        assert_eq!(shortest_cycle_above(&d, &d.lengths(), &rat(1, 3)), None);
    }

    #[test]
    fn zero_weights_are_allowed() {
        let t = theta(rat(1, 2), rat(1, 4), rat(1, 4));
        let w = vec![int(0), rat(1, 2), rat(1, 2)];
        let (l, cycles) = minimum_cycles(&t, &w, DEFAULT_CYCLE_CAP).unwrap();
        assert_eq!(l, rat(1, 2));
        assert_eq!(cycles.len(), 2);
    }
}
