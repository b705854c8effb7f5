//! Immutable directed multigraph with cost-vector edges, the RCSP problem
//! instance, and reachability pruning.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::cost::{Cost, CostVector};

/// Dense state identifier, `0 <= index < state_count`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StateId(pub u32);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for StateId {
    fn from(i: usize) -> Self {
        StateId(u32::try_from(i).expect("state index exceeds u32"))
    }
}

impl fmt::Debug for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph arity must be at least 1")]
    ZeroArity,
    #[error("edge {edge}: endpoint {state} out of range (state count {state_count})")]
    EndpointOutOfRange {
        edge: usize,
        state: usize,
        state_count: usize,
    },
    #[error("edge {edge}: cost arity {found}, graph arity {expected}")]
    ArityMismatch { edge: usize, expected: usize, found: usize },
    #[error("too many states or edges for 32-bit ids")]
    TooLarge,
}

/// Compressed adjacency: `edges[offsets[u]..offsets[u + 1]]` are the edge ids
/// incident to `u`, in input order.
#[derive(Clone, Debug)]
struct Adjacency {
    offsets: Vec<u32>,
    edges: Vec<u32>,
}

impl Adjacency {
    fn build(state_count: usize, keys: &[u32]) -> Adjacency {
        let mut offsets = vec![0u32; state_count + 1];
        for &k in keys {
            offsets[k as usize + 1] += 1;
        }
        for i in 0..state_count {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut edges = vec![0u32; keys.len()];
        for (e, &k) in keys.iter().enumerate() {
            let slot = &mut fill[k as usize];
            edges[*slot as usize] = e as u32;
            *slot += 1;
        }
        Adjacency { offsets, edges }
    }

    #[inline]
    fn of(&self, u: usize) -> &[u32] {
        &self.edges[self.offsets[u] as usize..self.offsets[u + 1] as usize]
    }
}

/// One edge as seen through the graph's adjacency.
#[derive(Clone, Copy, Debug)]
pub struct EdgeRef<'g> {
    pub id: usize,
    pub source: StateId,
    pub target: StateId,
    pub cost: &'g [Cost],
}

#[derive(Clone, Debug)]
pub struct Graph {
    state_count: usize,
    arity: usize,
    sources: Vec<u32>,
    targets: Vec<u32>,
    costs: Vec<Cost>,
    forward: Adjacency,
    backward: Adjacency,
}

impl Graph {
    /// Builds a graph from `(source, target, cost)` triples. Parallel edges and
    /// self-loops are kept.
    pub fn from_edges<I>(state_count: usize, arity: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, CostVector)>,
    {
        if arity == 0 {
            return Err(GraphError::ZeroArity);
        }
        if state_count > u32::MAX as usize {
            return Err(GraphError::TooLarge);
        }
        let mut sources = Vec::new();
        let mut targets = Vec::new();
        let mut costs = Vec::new();
        for (edge, (s, t, c)) in edges.into_iter().enumerate() {
            for state in [s, t] {
                if state >= state_count {
                    return Err(GraphError::EndpointOutOfRange {
                        edge,
                        state,
                        state_count,
                    });
                }
            }
            if c.arity() != arity {
                return Err(GraphError::ArityMismatch {
                    edge,
                    expected: arity,
                    found: c.arity(),
                });
            }
            sources.push(s as u32);
            targets.push(t as u32);
            costs.extend_from_slice(&c);
        }
        if sources.len() > u32::MAX as usize {
            return Err(GraphError::TooLarge);
        }
        Ok(Self::from_parts(state_count, arity, sources, targets, costs))
    }

    /// Assembles a graph from already-validated columns.
    pub(crate) fn from_parts(
        state_count: usize,
        arity: usize,
        sources: Vec<u32>,
        targets: Vec<u32>,
        costs: Vec<Cost>,
    ) -> Graph {
        debug_assert_eq!(sources.len(), targets.len());
        debug_assert_eq!(costs.len(), sources.len() * arity);
        let forward = Adjacency::build(state_count, &sources);
        let backward = Adjacency::build(state_count, &targets);
        Graph {
            state_count,
            arity,
            sources,
            targets,
            costs,
            forward,
            backward,
        }
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn edge_count(&self) -> usize {
        self.sources.len()
    }

    /// Number of cost dimensions, `d + 1`.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.state_count as u32).map(StateId)
    }

    #[inline]
    pub fn edge(&self, id: usize) -> EdgeRef<'_> {
        EdgeRef {
            id,
            source: StateId(self.sources[id]),
            target: StateId(self.targets[id]),
            cost: &self.costs[id * self.arity..(id + 1) * self.arity],
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeRef<'_>> {
        (0..self.edge_count()).map(move |e| self.edge(e))
    }

    /// Outgoing edges of `u` in input order.
    #[inline]
    pub fn out_edges(&self, u: StateId) -> impl Iterator<Item = EdgeRef<'_>> {
        self.forward.of(u.index()).iter().map(move |&e| self.edge(e as usize))
    }

    /// Incoming edges of `v` in input order.
    #[inline]
    pub fn in_edges(&self, v: StateId) -> impl Iterator<Item = EdgeRef<'_>> {
        self.backward.of(v.index()).iter().map(move |&e| self.edge(e as usize))
    }

    pub fn out_degree(&self, u: StateId) -> usize {
        self.forward.of(u.index()).len()
    }

    pub fn in_degree(&self, v: StateId) -> usize {
        self.backward.of(v.index()).len()
    }

    pub(crate) fn columns(&self) -> (&[u32], &[u32], &[Cost]) {
        (&self.sources, &self.targets, &self.costs)
    }

    /// States reachable from `source` along directed edges, `source` included.
    pub fn reachable_from(&self, source: StateId) -> StateSet {
        let mut seen = vec![false; self.state_count];
        let mut queue = VecDeque::new();
        seen[source.index()] = true;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for e in self.out_edges(u) {
                let t = e.target.index();
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(e.target);
                }
            }
        }
        StateSet::from_mask(seen)
    }

    /// Induced subgraph on `keep`, with states renumbered densely in
    /// increasing original order. Edge order is preserved.
    pub fn restrict(&self, keep: &StateSet) -> (Graph, StateMap) {
        assert_eq!(keep.universe(), self.state_count, "state set over a different graph");
        let mut to_restricted = vec![None; self.state_count];
        let mut to_original = Vec::with_capacity(keep.len());
        for u in keep.iter() {
            to_restricted[u.index()] = Some(StateId(to_original.len() as u32));
            to_original.push(u);
        }
        let mut sources = Vec::new();
        let mut targets = Vec::new();
        let mut costs = Vec::new();
        for e in self.edges() {
            if let (Some(s), Some(t)) = (to_restricted[e.source.index()], to_restricted[e.target.index()]) {
                sources.push(s.0);
                targets.push(t.0);
                costs.extend_from_slice(e.cost);
            }
        }
        let graph = Graph::from_parts(to_original.len(), self.arity, sources, targets, costs);
        (
            graph,
            StateMap {
                to_original,
                to_restricted,
            },
        )
    }
}

/// A subset of a graph's states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSet {
    mask: Vec<bool>,
    len: usize,
}

impl StateSet {
    pub fn from_mask(mask: Vec<bool>) -> Self {
        let len = mask.iter().filter(|&&b| b).count();
        StateSet { mask, len }
    }

    pub fn all(state_count: usize) -> Self {
        StateSet {
            mask: vec![true; state_count],
            len: state_count,
        }
    }

    pub fn from_states(state_count: usize, states: impl IntoIterator<Item = StateId>) -> Self {
        let mut mask = vec![false; state_count];
        for s in states {
            mask[s.index()] = true;
        }
        Self::from_mask(mask)
    }

    pub fn insert(&mut self, s: StateId) {
        if !self.mask[s.index()] {
            self.mask[s.index()] = true;
            self.len += 1;
        }
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.mask.get(s.index()).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Size of the underlying state space.
    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| StateId(i as u32))
    }
}

/// Id translation between a graph and one of its restrictions.
#[derive(Clone, Debug)]
pub struct StateMap {
    to_original: Vec<StateId>,
    to_restricted: Vec<Option<StateId>>,
}

impl StateMap {
    pub fn identity(state_count: usize) -> Self {
        StateMap {
            to_original: (0..state_count as u32).map(StateId).collect(),
            to_restricted: (0..state_count as u32).map(|i| Some(StateId(i))).collect(),
        }
    }

    pub fn original(&self, restricted: StateId) -> StateId {
        self.to_original[restricted.index()]
    }

    pub fn restricted(&self, original: StateId) -> Option<StateId> {
        self.to_restricted.get(original.index()).copied().flatten()
    }

    pub fn retained_count(&self) -> usize {
        self.to_original.len()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProblemError {
    #[error("{which} state {state} out of range (state count {state_count})")]
    StateOutOfRange {
        which: &'static str,
        state: StateId,
        state_count: usize,
    },
    #[error("graph arity {arity} leaves no resource dimension")]
    NoResources { arity: usize },
    #[error("expected {expected} resource limits, got {found}")]
    LimitCount { expected: usize, found: usize },
}

/// A point-to-point RCSP instance over a borrowed graph.
#[derive(Clone, Debug)]
pub struct Problem<'g> {
    graph: &'g Graph,
    start: StateId,
    goal: StateId,
    limits: Vec<Cost>,
}

impl<'g> Problem<'g> {
    pub fn new(graph: &'g Graph, start: StateId, goal: StateId, limits: Vec<Cost>) -> Result<Self, ProblemError> {
        let n = graph.state_count();
        for (which, state) in [("start", start), ("goal", goal)] {
            if state.index() >= n {
                return Err(ProblemError::StateOutOfRange {
                    which,
                    state,
                    state_count: n,
                });
            }
        }
        if graph.arity() < 2 {
            return Err(ProblemError::NoResources { arity: graph.arity() });
        }
        if limits.len() != graph.arity() - 1 {
            return Err(ProblemError::LimitCount {
                expected: graph.arity() - 1,
                found: limits.len(),
            });
        }
        Ok(Problem {
            graph,
            start,
            goal,
            limits,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn goal(&self) -> StateId {
        self.goal
    }

    /// Resource limits `R_1..R_d`.
    pub fn limits(&self) -> &[Cost] {
        &self.limits
    }

    /// Number of resources `d`.
    pub fn resource_count(&self) -> usize {
        self.limits.len()
    }
}
