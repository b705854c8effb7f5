//! End-to-end entry points: heuristic phase, constrained search, and
//! translation of results back to the caller's state ids.

use std::time::Instant;

use thiserror::Error;

use crate::cost::Cost;
use crate::graph::Problem;
use crate::heuristic::{build_heuristics, NegativeCycleDetected, Prepared, UpperBounds};
use crate::search::{ConstrainedSearch, SearchStats, Solution, TimedOut, DEFAULT_CHECK_INTERVAL};

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub deadline: Option<Instant>,
    /// Extractions between deadline checks.
    pub check_interval: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            deadline: None,
            check_interval: DEFAULT_CHECK_INTERVAL,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    NegativeCycle(#[from] NegativeCycleDetected),
    #[error(transparent)]
    TimedOut(#[from] TimedOut),
}

/// Solutions in the caller's ids, plus search counters.
#[derive(Clone, Debug, Default)]
pub struct SolveReport {
    pub solutions: Vec<Solution>,
    pub stats: SearchStats,
}

/// Runs the constrained search on an already prepared instance and maps the
/// solution paths back to the original graph's ids.
pub fn solve_prepared(prepared: &Prepared, limits: &[Cost], options: SolveOptions) -> Result<SolveReport, TimedOut> {
    let mut search = ConstrainedSearch::new(prepared, UpperBounds::new(limits));
    search.run(options.deadline, options.check_interval)?;
    let map = prepared.state_map();
    let solutions = search
        .solutions()
        .into_iter()
        .map(|mut s| {
            for state in &mut s.path {
                *state = map.original(*state);
            }
            s
        })
        .collect();
    Ok(SolveReport {
        solutions,
        stats: search.stats().clone(),
    })
}

/// Heuristic phase followed by the constrained search.
pub fn solve_problem(problem: &Problem<'_>) -> Result<SolveReport, SolveError> {
    solve_problem_with(problem, SolveOptions::default())
}

pub fn solve_problem_with(problem: &Problem<'_>, options: SolveOptions) -> Result<SolveReport, SolveError> {
    let prepared = build_heuristics(problem)?;
    Ok(solve_prepared(&prepared, problem.limits(), options)?)
}

/// Like [`solve_problem`], but a negative cycle on a start-goal walk yields an
/// empty solution set instead of an error.
pub fn solve_or_empty(problem: &Problem<'_>) -> Vec<Solution> {
    match solve_problem(problem) {
        Ok(report) => report.solutions,
        Err(SolveError::NegativeCycle(_)) => Vec::new(),
        Err(SolveError::TimedOut(_)) => unreachable!("no deadline"),
    }
}
