//! Heuristic precomputation: reachability pruning, exact backward one-to-all
//! optimal costs per dimension with negative-cycle detection, and the global
//! upper-bound vector.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use thiserror::Error;

use crate::cost::{sat_add, Cost, CostVector, INFINITY, NEG_INFINITY};
use crate::graph::{Graph, Problem, StateId, StateMap};

/// Which single-objective routine computes the backward costs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BackwardMethod {
    /// Dijkstra when the dimension has no negative edge, label-correcting otherwise.
    #[default]
    Auto,
    /// Queue-based Bellman-Ford with hop-count cycle detection.
    LabelCorrecting,
    /// Plain Dijkstra. Only exact when the dimension has no negative edge.
    Dijkstra,
}

/// Exact `cost_k`-optimal value from every state to `goal` (`dimension` is
/// zero-based). States that cannot reach `goal` get [`INFINITY`]; states from
/// which the value is unbounded below get [`NEG_INFINITY`].
pub fn backward_optimal_costs(graph: &Graph, goal: StateId, dimension: usize) -> Vec<Cost> {
    backward_optimal_costs_with(graph, goal, dimension, BackwardMethod::Auto)
}

pub fn backward_optimal_costs_with(
    graph: &Graph,
    goal: StateId,
    dimension: usize,
    method: BackwardMethod,
) -> Vec<Cost> {
    assert!(dimension < graph.arity(), "dimension {dimension} out of range");
    let method = match method {
        BackwardMethod::Auto if graph.edges().all(|e| e.cost[dimension] >= 0) => BackwardMethod::Dijkstra,
        BackwardMethod::Auto => BackwardMethod::LabelCorrecting,
        m => m,
    };
    match method {
        BackwardMethod::Dijkstra => backward_dijkstra(graph, goal, dimension),
        _ => backward_label_correcting(graph, goal, dimension),
    }
}

fn backward_dijkstra(graph: &Graph, goal: StateId, dimension: usize) -> Vec<Cost> {
    let mut dist = vec![INFINITY; graph.state_count()];
    let mut heap = BinaryHeap::new();
    dist[goal.index()] = 0;
    heap.push(Reverse((0, goal.0)));
    while let Some(Reverse((d, v))) = heap.pop() {
        let v = StateId(v);
        if d > dist[v.index()] {
            continue;
        }
        for e in graph.in_edges(v) {
            let u = e.source.index();
            let nd = d + e.cost[dimension];
            if nd < dist[u] {
                dist[u] = nd;
                heap.push(Reverse((nd, u as u32)));
            }
        }
    }
    dist
}

fn backward_label_correcting(graph: &Graph, goal: StateId, dimension: usize) -> Vec<Cost> {
    let n = graph.state_count();
    let mut dist = vec![INFINITY; n];
    // Edge count of the walk that produced the current label.
    let mut hops = vec![0usize; n];
    let mut queued = vec![false; n];
    let mut unbounded = vec![false; n];
    let mut queue = VecDeque::new();

    dist[goal.index()] = 0;
    queue.push_back(goal);
    queued[goal.index()] = true;

    while let Some(v) = queue.pop_front() {
        queued[v.index()] = false;
        if unbounded[v.index()] {
            continue;
        }
        let dv = dist[v.index()];
        for e in graph.in_edges(v) {
            let u = e.source.index();
            if unbounded[u] {
                continue;
            }
            let nd = dv + e.cost[dimension];
            if nd < dist[u] {
                dist[u] = nd;
                hops[u] = hops[v.index()] + 1;
                // A strictly improving walk with n edges repeats a state, and
                // the repeated segment must be a negative cycle.
                if hops[u] >= n {
                    unbounded[u] = true;
                } else if !queued[u] {
                    queued[u] = true;
                    queue.push_back(e.source);
                }
            }
        }
    }

    // Everything that can reach an unbounded state is unbounded too.
    let mut stack: Vec<StateId> = graph.states().filter(|s| unbounded[s.index()]).collect();
    while let Some(v) = stack.pop() {
        dist[v.index()] = NEG_INFINITY;
        for e in graph.in_edges(v) {
            let u = e.source.index();
            if !unbounded[u] {
                unbounded[u] = true;
                stack.push(e.source);
            }
        }
    }
    dist
}

/// Per-state lower bounds `h(u)`, one component per cost dimension.
#[derive(Clone, Debug)]
pub struct HeuristicTable {
    arity: usize,
    values: Vec<Cost>,
}

impl HeuristicTable {
    /// Interleaves per-dimension columns into a per-state table.
    pub fn from_columns(columns: &[Vec<Cost>]) -> Self {
        let arity = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(n * arity);
        for u in 0..n {
            values.extend(columns.iter().map(|c| c[u]));
        }
        HeuristicTable { arity, values }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn state_count(&self) -> usize {
        self.values.len().checked_div(self.arity).unwrap_or(0)
    }

    #[inline]
    pub fn get(&self, u: StateId) -> &[Cost] {
        &self.values[u.index() * self.arity..(u.index() + 1) * self.arity]
    }

    pub fn vector(&self, u: StateId) -> CostVector {
        CostVector::from_slice(self.get(u))
    }

    /// True when `goal` cannot be reached from `u` (every component is +∞).
    pub fn is_dead_end(&self, u: StateId) -> bool {
        self.get(u)[0] >= INFINITY
    }

    /// Edges `(u, v)` violating `h_k(u) <= cost_k(u,v) + h_k(v)`, as
    /// `(edge id, zero-based dimension)`.
    pub fn consistency_violations(&self, graph: &Graph) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for e in graph.edges() {
            let hu = self.get(e.source);
            let hv = self.get(e.target);
            for k in 0..self.arity {
                if hu[k] > sat_add(e.cost[k], hv[k]) {
                    out.push((e.id, k));
                }
            }
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("negative cycle in cost dimension {dimension} lies on a start-goal walk (through state {state})")]
pub struct NegativeCycleDetected {
    /// One-based cost dimension.
    pub dimension: usize,
    /// A state, in the caller's ids, whose optimal value is unbounded below.
    pub state: StateId,
}

/// Result of the high-level phase: the graph restricted to states reachable
/// from the start (plus the goal) together with the heuristic table over it.
#[derive(Clone, Debug)]
pub struct Prepared {
    graph: Graph,
    map: StateMap,
    start: StateId,
    goal: StateId,
    heuristics: HeuristicTable,
}

/// Graphs above this size compute their dimensions on separate threads.
const PARALLEL_THRESHOLD: usize = 20_000;

impl Prepared {
    /// Reachability pruning and per-dimension backward searches.
    pub fn new(graph: &Graph, start: StateId, goal: StateId) -> Result<Prepared, NegativeCycleDetected> {
        Self::with_method(graph, start, goal, BackwardMethod::Auto)
    }

    pub fn with_method(
        graph: &Graph,
        start: StateId,
        goal: StateId,
        method: BackwardMethod,
    ) -> Result<Prepared, NegativeCycleDetected> {
        let mut keep = graph.reachable_from(start);
        // An unreachable goal is kept as an isolated target so the table is
        // well defined; h(start) is then +∞ everywhere.
        keep.insert(goal);
        let (restricted, map) = graph.restrict(&keep);
        let r_start = map.restricted(start).expect("start retained");
        let r_goal = map.restricted(goal).expect("goal retained");

        let arity = restricted.arity();
        let columns: Vec<Vec<Cost>> = if restricted.state_count() >= PARALLEL_THRESHOLD && arity > 1 {
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..arity)
                    .map(|k| {
                        let g = &restricted;
                        scope.spawn(move || backward_optimal_costs_with(g, r_goal, k, method))
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("backward search panicked"))
                    .collect()
            })
        } else {
            (0..arity)
                .map(|k| backward_optimal_costs_with(&restricted, r_goal, k, method))
                .collect()
        };

        for (k, column) in columns.iter().enumerate() {
            if let Some(u) = column.iter().position(|&h| h <= NEG_INFINITY) {
                return Err(NegativeCycleDetected {
                    dimension: k + 1,
                    state: map.original(StateId::from(u)),
                });
            }
        }

        Ok(Prepared {
            graph: restricted,
            map,
            start: r_start,
            goal: r_goal,
            heuristics: HeuristicTable::from_columns(&columns),
        })
    }

    /// The restricted graph the search runs on.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn state_map(&self) -> &StateMap {
        &self.map
    }

    /// Start state in restricted ids.
    pub fn start(&self) -> StateId {
        self.start
    }

    /// Goal state in restricted ids.
    pub fn goal(&self) -> StateId {
        self.goal
    }

    pub fn heuristics(&self) -> &HeuristicTable {
        &self.heuristics
    }

    /// Heuristic vector of an original-id state, if retained.
    pub fn heuristic_of(&self, original: StateId) -> Option<CostVector> {
        self.map.restricted(original).map(|u| self.heuristics.vector(u))
    }

    pub fn goal_reachable(&self) -> bool {
        !self.heuristics.is_dead_end(self.start)
    }
}

/// Full high-level phase for a problem instance.
pub fn build_heuristics(problem: &Problem<'_>) -> Result<Prepared, NegativeCycleDetected> {
    Prepared::new(problem.graph(), problem.start(), problem.goal())
}

/// Global upper bound `f̄ = (f̄_1, R_1, ..., R_d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperBounds(CostVector);

impl UpperBounds {
    /// `(∞, R_1, ..., R_d)`.
    pub fn new(limits: &[Cost]) -> Self {
        let mut v = Vec::with_capacity(limits.len() + 1);
        v.push(INFINITY);
        v.extend_from_slice(limits);
        UpperBounds(CostVector::new(v))
    }

    pub fn primary(&self) -> Cost {
        self.0.primary()
    }

    /// Lowers the primary bound. The bound never increases.
    pub fn tighten_primary(&mut self, f1: Cost) {
        let mut v = self.0.to_vec();
        debug_assert!(f1 <= v[0], "primary bound must not increase");
        v[0] = f1.min(v[0]);
        self.0 = CostVector::new(v);
    }

    pub fn as_vector(&self) -> &CostVector {
        &self.0
    }

    pub fn as_slice(&self) -> &[Cost] {
        &self.0
    }
}

pub fn init_upper_bounds(problem: &Problem<'_>) -> UpperBounds {
    UpperBounds::new(problem.limits())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::sample::{self, U1, U2, U3, UG, US};

    fn prepared() -> Prepared {
        Prepared::new(&sample::graph(), US, UG).unwrap()
    }

    #[test]
    fn sample_primary_and_third_dimension() {
        let p = prepared();
        let h1: Vec<Cost> = [US, U1, U2, U3, UG]
            .iter()
            .map(|&s| p.heuristic_of(s).unwrap()[0])
            .collect();
        assert_eq!(h1, vec![-1, -2, 2, 1, 0]);
        let h3: Vec<Cost> = [US, U1, U2, U3, UG]
            .iter()
            .map(|&s| p.heuristic_of(s).unwrap()[2])
            .collect();
        assert_eq!(h3, vec![0, 2, 1, 1, 0]);
    }

    #[test]
    fn sample_full_triples() {
        let p = prepared();
        let expect = [
            (US, [-1, 1, 0]),
            (U1, [-2, 0, 2]),
            (U2, [2, 2, 1]),
            (U3, [1, 1, 1]),
            (UG, [0, 0, 0]),
        ];
        for (s, h) in expect {
            assert_eq!(p.heuristic_of(s).unwrap(), CostVector::from(h), "state {s:?}");
        }
        assert!(p.heuristic_of(sample::U4).is_none());
        assert!(p.heuristics().consistency_violations(p.graph()).is_empty());
    }

    #[test]
    fn lone_goal_has_zero() {
        let g = Graph::from_edges(1, 2, std::iter::empty()).unwrap();
        assert_eq!(backward_optimal_costs(&g, StateId(0), 0), vec![0]);
        assert_eq!(
            backward_optimal_costs_with(&g, StateId(0), 1, BackwardMethod::LabelCorrecting),
            vec![0]
        );
    }

    #[test]
    fn cycle_on_path_is_detected() {
        let g = sample::graph_with_cycle_on_path();
        let err = Prepared::new(&g, US, UG).unwrap_err();
        assert_eq!(err.dimension, 1);
    }

    #[test]
    fn unreachable_cycle_is_unbounded_only_on_full_graph() {
        // Without reachability pruning the cycle states are unbounded below.
        let g = sample::graph();
        let h1 = backward_optimal_costs(&g, UG, 0);
        assert_eq!(h1[sample::U4.index()], NEG_INFINITY);
        assert_eq!(h1[sample::U5.index()], NEG_INFINITY);
        assert_eq!(h1[sample::U6.index()], NEG_INFINITY);
        assert_eq!(h1[US.index()], -1);
        // Dimension 2 has no negative cycle.
        let h2 = backward_optimal_costs(&g, UG, 1);
        assert!(h2.iter().all(|&h| h > NEG_INFINITY));
    }

    #[test]
    fn unreachable_goal_gives_infinite_start() {
        let g = Graph::from_edges(3, 2, [(1, 2, CostVector::from([1, 1]))]).unwrap();
        let p = Prepared::new(&g, StateId(0), StateId(2)).unwrap();
        assert!(!p.goal_reachable());
        assert!(p.heuristics().get(p.start()).iter().all(|&h| h == INFINITY));
    }

    #[test]
    fn upper_bound_initialisation() {
        assert_eq!(UpperBounds::new(&[3, 3]).as_slice(), &[INFINITY, 3, 3]);
        assert_eq!(UpperBounds::new(&[10]).as_slice(), &[INFINITY, 10]);
        assert_eq!(UpperBounds::new(&[5, 6, 7]).as_slice(), &[INFINITY, 5, 6, 7]);
        let mut ub = UpperBounds::new(&[3, 3]);
        ub.tighten_primary(2);
        assert_eq!(ub.as_slice(), &[2, 3, 3]);
    }
}
