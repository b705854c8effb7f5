//! Constrained best-first search over a prepared instance.
//!
//! Nodes are extracted in non-decreasing `f_1` order from a bucket queue.
//! An extracted node is dropped when the most recent expansion of its state
//! weakly dominates it (quick check) or when the state's closed list does
//! (full check). Survivors are recorded in the closed list; goal nodes refine
//! the solution set and lower `f̄_1`, other nodes are expanded. Children are
//! pruned at generation against `f̄` and the quick check, and the full
//! dominance test is deferred to extraction. The first extraction with
//! `f_1 > f̄_1` ends the search.

mod dominance;
mod frontier;

use std::fmt;
use std::time::Instant;

use thiserror::Error;

pub use dominance::{quick_dominance, ClosedList, DominanceStore};
pub use frontier::Frontier;

use crate::cost::{sat_add, weakly_dominates, Cost, CostVector, INFINITY};
use crate::graph::{Graph, StateId};
use crate::heuristic::{HeuristicTable, Prepared, UpperBounds};

/// Index of a node in the search arena.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

const NO_PARENT: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct NodeRecord {
    state: StateId,
    parent: u32,
    f1: Cost,
}

/// What happened in one iteration of the main loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepEvent {
    /// The node passed both dominance checks and its successors were generated.
    Expanded { node: NodeId, inserted: usize },
    /// Weakly dominated by the most recent expansion of its state.
    QuickDominated { node: NodeId },
    /// Weakly dominated by some closed vector of its state.
    Dominated { node: NodeId },
    /// A goal node was captured as a solution.
    Solution { node: NodeId },
    /// The search is over; further steps return the same event.
    Finished(Termination),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// The frontier ran empty.
    Exhausted,
    /// A node with `f_1 > f̄_1` was extracted.
    BoundExceeded { node: NodeId },
}

/// Counters maintained by every search.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub extracted: u64,
    pub expanded: u64,
    pub generated: u64,
    pub inserted: u64,
    pub pruned_by_bound: u64,
    pub pruned_by_quick_check: u64,
    pub quick_dominated: u64,
    pub dominated: u64,
    pub solutions_captured: u64,
    /// Extractions whose `f_1` was below the previous one. Always zero under a
    /// consistent heuristic.
    pub monotonicity_violations: u64,
}

/// Hooks into the main loop, for instrumentation and tests. All methods
/// default to no-ops; `()` is the no-op observer.
pub trait SearchObserver {
    fn on_extract(&mut self, _node: NodeId, _f1: Cost) {}
    /// Called for nodes that pass both dominance checks, goal nodes included.
    fn on_accept(&mut self, _node: NodeId, _state: StateId, _g: &[Cost]) {}
    /// A child discarded because `f ⪯̸ f̄`.
    fn on_bound_prune(&mut self, _parent: NodeId, _state: StateId, _g: &[Cost]) {}
}

impl SearchObserver for () {}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("search deadline exceeded")]
pub struct TimedOut;

/// A solution in the ids of the graph it was found on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub cost: CostVector,
    pub path: Vec<StateId>,
}

/// Removes every entry of `sols` weakly dominated by `x` (walking backward),
/// then appends `x`. `dominates(a, b)` must report `g(a) ⪯ g(b)`.
pub fn update_solutions<T>(sols: &mut Vec<T>, x: T, dominates: impl Fn(&T, &T) -> bool) {
    let mut i = sols.len();
    while i >= 1 {
        if dominates(&x, &sols[i - 1]) {
            sols.remove(i - 1);
        }
        i -= 1;
    }
    sols.push(x);
}

/// Default number of extractions between deadline checks.
pub const DEFAULT_CHECK_INTERVAL: u32 = 4096;

/// One constrained search over a prepared instance.
pub struct ConstrainedSearch<'p, O: SearchObserver = ()> {
    graph: &'p Graph,
    heuristics: &'p HeuristicTable,
    goal: StateId,
    arity: usize,
    upper: UpperBounds,
    nodes: Vec<NodeRecord>,
    g_values: Vec<Cost>,
    frontier: Frontier,
    store: DominanceStore,
    solutions: Vec<NodeId>,
    last_f1: Cost,
    finished: Option<Termination>,
    stats: SearchStats,
    observer: O,
    scratch_g: Vec<Cost>,
    scratch_f: Vec<Cost>,
}

impl<'p> ConstrainedSearch<'p, ()> {
    pub fn new(prepared: &'p Prepared, upper: UpperBounds) -> Self {
        Self::with_observer(prepared, upper, ())
    }
}

impl<'p, O: SearchObserver> ConstrainedSearch<'p, O> {
    pub fn with_observer(prepared: &'p Prepared, upper: UpperBounds, observer: O) -> Self {
        let graph = prepared.graph();
        let heuristics = prepared.heuristics();
        let arity = graph.arity();
        assert!(arity >= 2, "constrained search needs at least one resource");
        assert_eq!(upper.as_slice().len(), arity, "upper bound arity");

        let start = prepared.start();
        let h_start = heuristics.get(start);
        let mut search = ConstrainedSearch {
            graph,
            heuristics,
            goal: prepared.goal(),
            arity,
            upper,
            nodes: Vec::new(),
            g_values: Vec::new(),
            frontier: Frontier::new(h_start[0]),
            store: DominanceStore::new(graph.state_count(), arity - 1),
            solutions: Vec::new(),
            last_f1: Cost::MIN,
            finished: None,
            stats: SearchStats::default(),
            observer,
            scratch_g: vec![0; arity],
            scratch_f: vec![0; arity],
        };
        // The start node gets the same bound test as any generated node. When
        // start = goal this rejects the empty path if some limit is negative.
        let zeros = vec![0; arity];
        let start_ok = !heuristics.is_dead_end(start) && weakly_dominates(h_start, search.upper.as_slice());
        if start_ok {
            let id = search.alloc(start, NO_PARENT, h_start[0], &zeros);
            search.frontier.push(h_start[0], id);
        }
        search
    }

    fn alloc(&mut self, state: StateId, parent: u32, f1: Cost, g: &[Cost]) -> NodeId {
        let id = NodeId(u32::try_from(self.nodes.len()).expect("node arena exceeds u32"));
        self.nodes.push(NodeRecord { state, parent, f1 });
        self.g_values.extend_from_slice(g);
        id
    }

    /// Runs one iteration of the main loop.
    pub fn step(&mut self) -> StepEvent {
        if let Some(t) = self.finished {
            return StepEvent::Finished(t);
        }
        let Some((f1, x)) = self.frontier.pop() else {
            self.finished = Some(Termination::Exhausted);
            return StepEvent::Finished(Termination::Exhausted);
        };
        self.stats.extracted += 1;
        if f1 < self.last_f1 {
            self.stats.monotonicity_violations += 1;
        }
        debug_assert!(f1 >= self.last_f1, "extracted f1 decreased: {} -> {f1}", self.last_f1);
        self.last_f1 = f1;
        self.observer.on_extract(x, f1);

        if f1 > self.upper.primary() {
            let t = Termination::BoundExceeded { node: x };
            self.finished = Some(t);
            return StepEvent::Finished(t);
        }

        let record = self.nodes[x.0 as usize];
        let s = record.state;
        let base = x.0 as usize * self.arity;
        let g = &self.g_values[base..base + self.arity];
        let tr = &g[1..];

        if quick_dominance(tr, self.store.last(s.index())) {
            self.stats.quick_dominated += 1;
            return StepEvent::QuickDominated { node: x };
        }
        if self.store.closed(s.index()).is_dominated(tr) {
            self.stats.dominated += 1;
            return StepEvent::Dominated { node: x };
        }
        self.store.closed_mut(s.index()).consolidate(tr);
        debug_assert!(
            self.store.closed(s.index()).len() > 64 || self.store.closed(s.index()).is_well_formed(),
            "closed list of {s:?} lost its order"
        );
        self.store.set_last(s.index(), tr);
        self.observer.on_accept(x, s, g);

        if s == self.goal {
            self.upper.tighten_primary(f1);
            let arity = self.arity;
            let g_values = &self.g_values;
            let g_of = |n: &NodeId| {
                let b = n.0 as usize * arity;
                &g_values[b..b + arity]
            };
            update_solutions(&mut self.solutions, x, |a, b| weakly_dominates(g_of(a), g_of(b)));
            self.stats.solutions_captured += 1;
            return StepEvent::Solution { node: x };
        }

        self.stats.expanded += 1;
        let mut inserted = 0;
        let graph = self.graph;
        for e in graph.out_edges(s) {
            let t = e.target;
            self.stats.generated += 1;
            let h = self.heuristics.get(t);
            let g_parent = &self.g_values[base..base + self.arity];
            for (k, (gk, fk)) in self.scratch_g.iter_mut().zip(self.scratch_f.iter_mut()).enumerate() {
                *gk = g_parent[k] + e.cost[k];
                *fk = sat_add(*gk, h[k]);
            }
            if h[0] >= INFINITY || !weakly_dominates(&self.scratch_f, self.upper.as_slice()) {
                self.stats.pruned_by_bound += 1;
                self.observer.on_bound_prune(x, t, &self.scratch_g);
                continue;
            }
            if quick_dominance(&self.scratch_g[1..], self.store.last(t.index())) {
                self.stats.pruned_by_quick_check += 1;
                continue;
            }
            let child_f1 = self.scratch_f[0];
            let g_child = std::mem::take(&mut self.scratch_g);
            let y = self.alloc(t, x.0, child_f1, &g_child);
            self.scratch_g = g_child;
            self.frontier.push(child_f1, y);
            inserted += 1;
        }
        self.stats.inserted += inserted as u64;
        StepEvent::Expanded { node: x, inserted }
    }

    /// Steps until the search finishes, or until `deadline` passes (checked
    /// on entry and then every `check_interval` extractions).
    pub fn run(&mut self, deadline: Option<Instant>, check_interval: u32) -> Result<Termination, TimedOut> {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(TimedOut);
        }
        let interval = check_interval.max(1);
        let mut countdown = interval;
        loop {
            if let StepEvent::Finished(t) = self.step() {
                return Ok(t);
            }
            countdown -= 1;
            if countdown == 0 {
                countdown = interval;
                if deadline.is_some_and(|d| Instant::now() >= d) {
                    return Err(TimedOut);
                }
            }
        }
    }

    pub fn run_to_end(&mut self) -> Termination {
        self.run(None, DEFAULT_CHECK_INTERVAL).expect("no deadline")
    }

    pub fn is_finished(&self) -> bool {
        self.finished.is_some()
    }

    pub fn termination(&self) -> Option<Termination> {
        self.finished
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stats
    }

    pub fn observer(&self) -> &O {
        &self.observer
    }

    pub fn into_observer(self) -> O {
        self.observer
    }

    pub fn upper_bounds(&self) -> &UpperBounds {
        &self.upper
    }

    pub fn frontier(&self) -> &Frontier {
        &self.frontier
    }

    pub fn store(&self) -> &DominanceStore {
        &self.store
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn state_of(&self, node: NodeId) -> StateId {
        self.nodes[node.0 as usize].state
    }

    pub fn parent_of(&self, node: NodeId) -> Option<NodeId> {
        let p = self.nodes[node.0 as usize].parent;
        (p != NO_PARENT).then_some(NodeId(p))
    }

    pub fn g(&self, node: NodeId) -> &[Cost] {
        let b = node.0 as usize * self.arity;
        &self.g_values[b..b + self.arity]
    }

    /// `f = g + h(state)`.
    pub fn f(&self, node: NodeId) -> CostVector {
        let h = self.heuristics.get(self.state_of(node));
        CostVector::new(
            self.g(node)
                .iter()
                .zip(h)
                .map(|(&g, &h)| sat_add(g, h))
                .collect::<Vec<_>>(),
        )
    }

    pub fn f1(&self, node: NodeId) -> Cost {
        self.nodes[node.0 as usize].f1
    }

    /// States from the start to `node`, following parent references.
    pub fn path(&self, node: NodeId) -> Vec<StateId> {
        let mut path = Vec::new();
        let mut cur = Some(node);
        while let Some(n) = cur {
            path.push(self.state_of(n));
            cur = self.parent_of(n);
        }
        path.reverse();
        path
    }

    /// Solution nodes in insertion order.
    pub fn solution_nodes(&self) -> &[NodeId] {
        &self.solutions
    }

    pub fn solutions(&self) -> Vec<Solution> {
        self.solutions
            .iter()
            .map(|&n| Solution {
                cost: CostVector::from_slice(self.g(n)),
                path: self.path(n),
            })
            .collect()
    }
}

/// Runs the constrained search to completion.
pub fn solve(prepared: &Prepared, upper: UpperBounds) -> Vec<Solution> {
    let mut search = ConstrainedSearch::new(prepared, upper);
    search.run_to_end();
    search.solutions()
}
