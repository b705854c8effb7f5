//! Benchmark instance generation: tightness-based resource limits, random
//! start/goal pairs, and the plain-text query file format.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;
use rand::Rng;
use thiserror::Error;

use crate::cost::{Cost, CostVector, INFINITY};
use crate::graph::{Graph, StateId};
use crate::heuristic::Prepared;

/// Constraint tightness `δ ∈ (0, 1]`, kept as an exact decimal fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Tightness {
    num: u64,
    den: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TightnessError {
    #[error("invalid tightness `{0}`: expected a decimal number")]
    Syntax(String),
    #[error("tightness `{0}` outside (0, 1]")]
    Range(String),
}

impl Tightness {
    pub fn new(num: u64, den: u64) -> Result<Self, TightnessError> {
        if den == 0 || num == 0 || num > den {
            return Err(TightnessError::Range(format!("{num}/{den}")));
        }
        Ok(Tightness { num, den })
    }

    pub const ONE: Tightness = Tightness { num: 1, den: 1 };

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `lower + floor(δ · (upper - lower))`, exact.
    pub fn interpolate(self, lower: Cost, upper: Cost) -> Cost {
        let span = (upper - lower) as i128;
        let step = (span * self.num as i128).div_euclid(self.den as i128);
        lower + step as Cost
    }
}

impl FromStr for Tightness {
    type Err = TightnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        let digits_ok = |d: &str| d.bytes().all(|b| b.is_ascii_digit());
        if (int.is_empty() && frac.is_empty()) || !digits_ok(int) || !digits_ok(frac) || frac.len() > 12 {
            return Err(TightnessError::Syntax(s.to_string()));
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| TightnessError::Syntax(s.to_string()))?
        };
        let frac_v: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| TightnessError::Syntax(s.to_string()))?
        };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_v))
            .ok_or_else(|| TightnessError::Range(s.to_string()))?;
        Tightness::new(num, den).map_err(|_| TightnessError::Range(s.to_string()))
    }
}

impl fmt::Display for Tightness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LimitError {
    #[error("goal is not reachable from start")]
    GoalUnreachable,
}

/// Lexicographically smallest cost vector of any start-goal path: the
/// `cost_1`-optimal path, ties broken by `cost_2`, then `cost_3`, and so on.
pub fn lex_optimal_cost(prepared: &Prepared) -> Option<CostVector> {
    if !prepared.goal_reachable() {
        return None;
    }
    let graph = prepared.graph();
    let h = prepared.heuristics();
    let arity = graph.arity();
    let n = graph.state_count();
    let goal = prepared.goal();
    // Only states that reach the goal take part; none of them lies on a
    // negative cycle in any dimension, so lexicographic labels are bounded.
    let live = |s: StateId| !h.is_dead_end(s);
    let nonneg = graph.edges().all(|e| e.cost.iter().all(|&c| c >= 0));

    let mut label: Vec<Option<Vec<Cost>>> = vec![None; n];
    label[goal.index()] = Some(vec![0; arity]);

    let relax = |label: &mut Vec<Option<Vec<Cost>>>, v: StateId, e_cost: &[Cost], u: StateId| -> bool {
        let lv = label[v.index()].as_ref().expect("labelled");
        let cand: Vec<Cost> = lv.iter().zip(e_cost).map(|(a, b)| a + b).collect();
        match &label[u.index()] {
            Some(cur) if *cur <= cand => false,
            _ => {
                label[u.index()] = Some(cand);
                true
            }
        }
    };

    if nonneg {
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((vec![0; arity], goal.0)));
        while let Some(Reverse((d, v))) = heap.pop() {
            let v = StateId(v);
            if label[v.index()].as_ref().is_some_and(|cur| *cur < d) {
                continue;
            }
            for e in graph.in_edges(v) {
                if live(e.source) && relax(&mut label, v, e.cost, e.source) {
                    heap.push(Reverse((label[e.source.index()].clone().unwrap(), e.source.0)));
                }
            }
        }
    } else {
        let mut queued = vec![false; n];
        let mut queue = VecDeque::from([goal]);
        queued[goal.index()] = true;
        while let Some(v) = queue.pop_front() {
            queued[v.index()] = false;
            for e in graph.in_edges(v) {
                let u = e.source;
                if live(u) && relax(&mut label, v, e.cost, u) && !queued[u.index()] {
                    queued[u.index()] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    label[prepared.start().index()].take().map(CostVector::new)
}

/// Resource limits at tightness `delta`: for each resource `k`,
/// `R_k = h_{k+1} + floor(δ · (ub_{k+1} - h_{k+1}))` where `h_{k+1}` is the
/// optimal start-goal value of that dimension and `ub_{k+1}` its usage on the
/// lexicographically smallest `cost_1`-optimal path.
pub fn generate_limits(prepared: &Prepared, delta: Tightness) -> Result<Vec<Cost>, LimitError> {
    let ub = lex_optimal_cost(prepared).ok_or(LimitError::GoalUnreachable)?;
    let h = prepared.heuristics().get(prepared.start());
    debug_assert_eq!(ub[0], h[0]);
    Ok((1..ub.arity())
        .map(|k| {
            debug_assert!(h[k] < INFINITY && h[k] <= ub[k]);
            delta.interpolate(h[k], ub[k])
        })
        .collect())
}

/// A start/goal pair in graph ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub start: StateId,
    pub goal: StateId,
}

#[derive(Debug, Error)]
pub enum QueryFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("read error: {0}")]
    Io(#[from] io::Error),
}

/// Reads `<start> <goal>` lines with one-based ids. Blank lines and lines
/// starting with `#` or `c` are skipped.
pub fn parse_queries<R: BufRead>(reader: R, state_count: usize) -> Result<Vec<Query>, QueryFileError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('c') {
            continue;
        }
        let err = |message: String| QueryFileError::Syntax { line: i + 1, message };
        let ids: Vec<&str> = t.split_ascii_whitespace().collect();
        if ids.len() != 2 {
            return Err(err(format!("expected `<start> <goal>`, got `{t}`")));
        }
        let mut pair = [StateId(0); 2];
        for (slot, field) in pair.iter_mut().zip(&ids) {
            let id: usize = field.parse().map_err(|_| err(format!("invalid state id `{field}`")))?;
            if id == 0 || id > state_count {
                return Err(err(format!("state {id} out of range 1..={state_count}")));
            }
            *slot = StateId::from(id - 1);
        }
        out.push(Query {
            start: pair[0],
            goal: pair[1],
        });
    }
    Ok(out)
}

pub fn write_queries<W: Write>(queries: &[Query], mut out: W) -> io::Result<()> {
    for q in queries {
        writeln!(out, "{} {}", q.start.0 + 1, q.goal.0 + 1)?;
    }
    Ok(())
}

/// States of the largest strongly connected component, in increasing order.
pub fn largest_scc(graph: &Graph) -> Vec<StateId> {
    let mut g = DiGraph::<(), ()>::with_capacity(graph.state_count(), graph.edge_count());
    for _ in 0..graph.state_count() {
        g.add_node(());
    }
    for e in graph.edges() {
        g.add_edge(e.source.0.into(), e.target.0.into(), ());
    }
    let mut best: Vec<StateId> = kosaraju_scc(&g)
        .into_iter()
        .max_by_key(Vec::len)
        .unwrap_or_default()
        .into_iter()
        .map(|n| StateId::from(n.index()))
        .collect();
    best.sort();
    best
}

/// `count` pairs drawn uniformly from the largest strongly connected
/// component, with `start != goal` whenever the component has two states.
pub fn random_queries<R: Rng + ?Sized>(graph: &Graph, count: usize, rng: &mut R) -> Vec<Query> {
    let pool = largest_scc(graph);
    if pool.is_empty() {
        return Vec::new();
    }
    (0..count)
        .map(|_| {
            let start = pool[rng.random_range(0..pool.len())];
            let mut goal = pool[rng.random_range(0..pool.len())];
            while pool.len() > 1 && goal == start {
                goal = pool[rng.random_range(0..pool.len())];
            }
            Query { start, goal }
        })
        .collect()
}
