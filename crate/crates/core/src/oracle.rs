//! Brute-force reference solver for desk-sized instances, the solver/oracle
//! comparison report, and the random instance generator used for fuzzing.
//!
//! Enumerating simple paths is enough: once every dimension is free of
//! negative cycles on start-goal walks, every cycle on such a walk has an
//! element-wise non-negative cost, so some simple path weakly dominates any
//! walk.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::cost::{weakly_dominates, Cost, CostVector};
use crate::graph::{Graph, Problem, StateId};
use crate::heuristic::Prepared;
use crate::instance::{generate_limits, Tightness};
use crate::search::Solution;

/// Largest graph the oracle agrees to enumerate.
pub const MAX_ORACLE_STATES: usize = 14;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {0} states; the oracle handles at most {MAX_ORACLE_STATES}")]
    TooLarge(usize),
}

/// Non-dominated `cost_1`-minimal feasible cost vectors, one witness path each,
/// sorted by cost vector.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleResult {
    pub solutions: Vec<Solution>,
}

impl OracleResult {
    pub fn costs(&self) -> Vec<CostVector> {
        self.solutions.iter().map(|s| s.cost.clone()).collect()
    }
}

/// Every feasible simple start-goal path with its cost vector.
pub fn feasible_simple_paths(problem: &Problem<'_>) -> Result<Vec<Solution>, OracleError> {
    let graph = problem.graph();
    if graph.state_count() > MAX_ORACLE_STATES {
        return Err(OracleError::TooLarge(graph.state_count()));
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; graph.state_count()];
    let mut path = vec![problem.start()];
    on_path[problem.start().index()] = true;
    let mut cost = vec![0; graph.arity()];
    dfs(graph, problem, &mut path, &mut on_path, &mut cost, &mut out);
    Ok(out)
}

fn dfs(
    graph: &Graph,
    problem: &Problem<'_>,
    path: &mut Vec<StateId>,
    on_path: &mut [bool],
    cost: &mut Vec<Cost>,
    out: &mut Vec<Solution>,
) {
    let u = *path.last().expect("non-empty path");
    if u == problem.goal() {
        if cost[1..].iter().zip(problem.limits()).all(|(c, r)| c <= r) {
            out.push(Solution {
                cost: CostVector::from_slice(cost),
                path: path.clone(),
            });
        }
        return;
    }
    for e in graph.out_edges(u) {
        if on_path[e.target.index()] {
            continue;
        }
        for (c, w) in cost.iter_mut().zip(e.cost) {
            *c += w;
        }
        on_path[e.target.index()] = true;
        path.push(e.target);
        dfs(graph, problem, path, on_path, cost, out);
        path.pop();
        on_path[e.target.index()] = false;
        for (c, w) in cost.iter_mut().zip(e.cost) {
            *c -= w;
        }
    }
}

/// All feasible simple paths of minimal `cost_1`.
pub fn optimal_simple_paths(problem: &Problem<'_>) -> Result<Vec<Solution>, OracleError> {
    let paths = feasible_simple_paths(problem)?;
    let Some(best) = paths.iter().map(|s| s.cost.primary()).min() else {
        return Ok(Vec::new());
    };
    Ok(paths.into_iter().filter(|s| s.cost.primary() == best).collect())
}

/// Exhaustive reference answer. The caller must have checked that no
/// negative cycle lies on a start-goal walk.
pub fn enumerate_solutions(problem: &Problem<'_>) -> Result<OracleResult, OracleError> {
    let mut optimal = optimal_simple_paths(problem)?;
    optimal.sort_by(|a, b| a.cost.cmp(&b.cost).then_with(|| a.path.cmp(&b.path)));
    optimal.dedup_by(|a, b| a.cost == b.cost);
    let solutions = optimal
        .iter()
        .filter(|s| {
            !optimal
                .iter()
                .any(|o| o.cost != s.cost && weakly_dominates(&o.cost, &s.cost))
        })
        .cloned()
        .collect();
    Ok(OracleResult { solutions })
}

/// A solver path whose edges do not add up to its reported cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadPath {
    pub path: Vec<StateId>,
    pub reported: CostVector,
    pub reason: String,
}

/// Outcome of comparing solver output with the oracle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    /// Oracle vectors the solver did not return.
    pub missing: Vec<CostVector>,
    /// Solver vectors the oracle does not have.
    pub extra: Vec<CostVector>,
    pub bad_paths: Vec<BadPath>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.bad_paths.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("pass");
        }
        f.write_str("fail")?;
        for v in &self.missing {
            write!(f, "; missing {v}")?;
        }
        for v in &self.extra {
            write!(f, "; extra {v}")?;
        }
        for b in &self.bad_paths {
            write!(f, "; path {:?} reported {} ({})", b.path, b.reported, b.reason)?;
        }
        Ok(())
    }
}

/// Checks that `path` is a start-goal walk in `graph` and that some choice
/// among parallel edges sums to `reported`.
pub fn check_path(problem: &Problem<'_>, path: &[StateId], reported: &CostVector) -> Result<(), String> {
    let graph = problem.graph();
    if path.first() != Some(&problem.start()) || path.last() != Some(&problem.goal()) {
        return Err("path does not run from start to goal".into());
    }
    let mut sums: HashSet<Vec<Cost>> = HashSet::from([vec![0; graph.arity()]]);
    for w in path.windows(2) {
        let mut next = HashSet::new();
        for e in graph.out_edges(w[0]).filter(|e| e.target == w[1]) {
            for s in &sums {
                next.insert(s.iter().zip(e.cost).map(|(a, b)| a + b).collect::<Vec<_>>());
            }
        }
        if next.is_empty() {
            return Err(format!("no edge {:?} -> {:?}", w[0], w[1]));
        }
        sums = next;
    }
    if sums.contains(reported.as_slice()) {
        Ok(())
    } else {
        Err("edge costs do not sum to the reported vector".into())
    }
}

/// Compares cost-vector sets and revalidates every solver path.
pub fn verify(problem: &Problem<'_>, solver: &[Solution], oracle: &OracleResult) -> VerifyReport {
    let ours: HashSet<&CostVector> = solver.iter().map(|s| &s.cost).collect();
    let theirs: HashSet<&CostVector> = oracle.solutions.iter().map(|s| &s.cost).collect();
    let mut missing: Vec<CostVector> = theirs.difference(&ours).map(|v| (*v).clone()).collect();
    let mut extra: Vec<CostVector> = ours.difference(&theirs).map(|v| (*v).clone()).collect();
    missing.sort();
    extra.sort();
    let bad_paths = solver
        .iter()
        .filter_map(|s| {
            check_path(problem, &s.path, &s.cost).err().map(|reason| BadPath {
                path: s.path.clone(),
                reported: s.cost.clone(),
                reason,
            })
        })
        .collect();
    VerifyReport {
        missing,
        extra,
        bad_paths,
    }
}

/// Shape of random fuzz instances.
#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub min_states: usize,
    pub max_states: usize,
    pub min_edge_probability: f64,
    pub max_edge_probability: f64,
    pub resource_counts: Vec<usize>,
    pub min_cost: Cost,
    pub max_cost: Cost,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            min_states: 4,
            max_states: 12,
            min_edge_probability: 0.25,
            max_edge_probability: 0.5,
            resource_counts: vec![1, 2, 3],
            min_cost: -3,
            max_cost: 5,
        }
    }
}

/// An owned random instance.
#[derive(Clone, Debug)]
pub struct FuzzInstance {
    pub graph: Graph,
    pub start: StateId,
    pub goal: StateId,
    pub limits: Vec<Cost>,
    /// Graphs drawn and discarded for negative cycles before this one.
    pub rejected: usize,
}

impl FuzzInstance {
    pub fn problem(&self) -> Problem<'_> {
        Problem::new(&self.graph, self.start, self.goal, self.limits.clone()).expect("generated instance is valid")
    }
}

const TIGHTNESS_CHOICES: [(u64, u64); 6] = [(1, 10), (3, 10), (5, 10), (7, 10), (9, 10), (1, 1)];

/// Draws an Erdős–Rényi-style digraph (no self-loops) with uniform integer
/// costs, redrawing until no negative cycle lies on a start-goal walk.
///
/// Limits come from a random tightness when the goal is reachable, with a
/// one-in-four chance of uniform limits in `[min_cost, 3 * max_cost]` instead
/// so that infeasible instances also occur.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, config: &FuzzConfig) -> FuzzInstance {
    let mut rejected = 0;
    loop {
        let n = rng.random_range(config.min_states..=config.max_states);
        let p = rng.random_range(config.min_edge_probability..=config.max_edge_probability);
        let d = config.resource_counts[rng.random_range(0..config.resource_counts.len())];
        let arity = d + 1;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.random_bool(p) {
                    let c: Vec<Cost> = (0..arity)
                        .map(|_| rng.random_range(config.min_cost..=config.max_cost))
                        .collect();
                    edges.push((u, v, CostVector::new(c)));
                }
            }
        }
        let graph = Graph::from_edges(n, arity, edges).expect("generated edges are valid");
        let start = StateId::from(rng.random_range(0..n));
        let goal = StateId::from(rng.random_range(0..n));
        let prepared = match Prepared::new(&graph, start, goal) {
            Ok(p) => p,
            Err(_) => {
                rejected += 1;
                continue;
            }
        };
        let limits = if prepared.goal_reachable() && rng.random_bool(0.75) {
            let (num, den) = TIGHTNESS_CHOICES[rng.random_range(0..TIGHTNESS_CHOICES.len())];
            generate_limits(&prepared, Tightness::new(num, den).expect("valid tightness")).expect("goal reachable")
        } else {
            (0..d)
                .map(|_| rng.random_range(config.min_cost..=3 * config.max_cost))
                .collect()
        };
        return FuzzInstance {
            graph,
            start,
            goal,
            limits,
            rejected,
        };
    }
}
