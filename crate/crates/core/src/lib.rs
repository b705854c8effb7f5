//! Exact point-to-point resource constrained shortest paths on graphs whose
//! edge attributes may be negative, provided no negative cycle lies on a
//! start-goal walk.
//!
//! The solver runs in two phases. [`heuristic::Prepared`] drops states the
//! start cannot reach and computes, for every cost dimension, the exact
//! optimal cost from each state to the goal, rejecting instances with a
//! negative cycle on a start-goal walk. [`search::ConstrainedSearch`] then
//! runs a best-first search on the primary cost with lazy dominance pruning
//! over truncated cost vectors, and returns every non-dominated
//! `cost_1`-optimal feasible path.
//!
//! ```
//! use rcsp_core::fixtures::sample;
//! use rcsp_core::{solve_problem, CostVector, Problem};
//!
//! let graph = sample::graph();
//! let problem = Problem::new(&graph, sample::US, sample::UG, vec![3, 3]).unwrap();
//! let report = solve_problem(&problem).unwrap();
//! let costs: Vec<_> = report.solutions.iter().map(|s| s.cost.clone()).collect();
//! assert_eq!(costs, vec![CostVector::from([2, 2, 2]), CostVector::from([2, 3, 0])]);
//! ```

pub mod cost;
pub mod dimacs;
pub mod fixtures;
pub mod graph;
pub mod heuristic;
pub mod instance;
pub mod oracle;
pub mod search;
pub mod solver;

pub use cost::{Cost, CostVector, TruncatedVector, INFINITY};
pub use graph::{Graph, GraphError, Problem, ProblemError, StateId, StateMap, StateSet};
pub use heuristic::{
    build_heuristics, init_upper_bounds, HeuristicTable, NegativeCycleDetected, Prepared, UpperBounds,
};
pub use instance::{generate_limits, Query, Tightness};
pub use search::{ConstrainedSearch, SearchStats, Solution};
pub use solver::{
    solve_or_empty, solve_prepared, solve_problem, solve_problem_with, SolveError, SolveOptions, SolveReport,
};
