//! Map loading, instance construction and timed solver runs.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rcsp_core::dimacs::{extend_costs, merge_attributes, parse_gr};
use rcsp_core::instance::{parse_queries, random_queries};
use rcsp_core::{generate_limits, Cost, Graph, Prepared, Query, Solution, SolveOptions, StateId, Tightness};

use crate::record::{Outcome, RunRecord};

/// Attribute files of one map, in dimension order.
#[derive(Clone, Debug)]
pub struct MapSpec {
    pub name: String,
    pub files: Vec<PathBuf>,
    /// Total arity after adding synthetic dimensions (3 or 4).
    pub extend_to: Option<usize>,
}

impl MapSpec {
    /// Name taken from the first file, e.g. `USA-road-d.NY.gr` gives `NY`.
    pub fn from_files(files: Vec<PathBuf>, extend_to: Option<usize>) -> Self {
        let name = files
            .first()
            .and_then(|p| p.file_stem())
            .map(|s| {
                let s = s.to_string_lossy();
                s.rsplit('.').next().unwrap_or(&s).to_string()
            })
            .unwrap_or_else(|| "map".into());
        MapSpec { name, files, extend_to }
    }

    pub fn load(&self) -> Result<Graph> {
        ensure!(!self.files.is_empty(), "no attribute files given");
        let raws = self
            .files
            .iter()
            .map(|p| {
                let f = File::open(p).with_context(|| format!("cannot open {}", p.display()))?;
                let name = p.display().to_string();
                parse_gr(BufReader::new(f), &name).with_context(|| format!("cannot parse {}", p.display()))
            })
            .collect::<Result<Vec<_>>>()?;
        let graph = merge_attributes(&raws)?;
        match self.extend_to {
            Some(arity) if arity != graph.arity() => Ok(extend_costs(&graph, arity)?),
            _ => Ok(graph),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Limits {
    Tightness(Tightness),
    Explicit(Vec<Cost>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub id: usize,
    pub query: Query,
    pub limits: Limits,
}

#[derive(Clone, Debug)]
pub enum QuerySource {
    File(PathBuf),
    Random { seed: u64, count: usize },
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub map: MapSpec,
    pub queries: QuerySource,
    pub deltas: Vec<Tightness>,
    pub timeout: Duration,
    pub threads: usize,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!(!self.deltas.is_empty(), "at least one tightness value is required");
        ensure!(!self.timeout.is_zero(), "timeout must be positive");
        ensure!(self.threads > 0, "need at least one worker thread");
        if let Some(a) = self.map.extend_to {
            ensure!(a == 3 || a == 4, "--extend-to must be 3 or 4, got {a}");
        }
        Ok(())
    }

    pub fn queries(&self, graph: &Graph) -> Result<Vec<Query>> {
        match &self.queries {
            QuerySource::File(path) => {
                let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
                Ok(parse_queries(BufReader::new(f), graph.state_count())?)
            }
            QuerySource::Random { seed, count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let qs = random_queries(graph, *count, &mut rng);
                if qs.len() < *count {
                    bail!("graph has no states to draw queries from");
                }
                Ok(qs)
            }
        }
    }

    /// Every query paired with every tightness value, query-major.
    pub fn instances(&self, graph: &Graph) -> Result<Vec<Instance>> {
        let queries = self.queries(graph)?;
        Ok(queries
            .iter()
            .enumerate()
            .flat_map(|(id, &query)| {
                self.deltas.iter().map(move |&d| Instance {
                    id,
                    query,
                    limits: Limits::Tightness(d),
                })
            })
            .collect())
    }
}

fn base_record(map: &str, graph_arity: usize, instance: &Instance) -> RunRecord {
    RunRecord {
        map: map.to_string(),
        instance: instance.id,
        start: instance.query.start.0 + 1,
        goal: instance.query.goal.0 + 1,
        delta: match &instance.limits {
            Limits::Tightness(t) => Some(t.as_f64()),
            Limits::Explicit(_) => None,
        },
        d: graph_arity.saturating_sub(1),
        outcome: Outcome::Error,
        seconds: 0.0,
        num_solutions: 0,
        solutions: Vec::new(),
    }
}

/// Runs heuristics, limit generation and search on a loaded graph. Solution
/// paths are returned in graph ids.
pub fn solve_on_graph(map: &str, graph: &Graph, instance: &Instance, timeout: Duration) -> (RunRecord, Vec<Solution>) {
    let mut record = base_record(map, graph.arity(), instance);
    let n = graph.state_count();
    let Query { start, goal } = instance.query;
    if start.index() >= n || goal.index() >= n {
        eprintln!("instance {}: state out of range", instance.id);
        return (record, Vec::new());
    }
    if let Limits::Explicit(l) = &instance.limits {
        if l.len() + 1 != graph.arity() {
            eprintln!(
                "instance {}: {} limits for {} resources",
                instance.id,
                l.len(),
                graph.arity() - 1
            );
            return (record, Vec::new());
        }
    }

    let began = Instant::now();
    let options = SolveOptions {
        deadline: Some(began + timeout),
        ..SolveOptions::default()
    };
    let (outcome, solutions) = match Prepared::new(graph, start, goal) {
        Err(_) => (Outcome::NegativeCycle, Vec::new()),
        Ok(prepared) => {
            let limits = match &instance.limits {
                Limits::Explicit(l) => Some(l.clone()),
                Limits::Tightness(t) => generate_limits(&prepared, *t).ok(),
            };
            match limits {
                None => (Outcome::Infeasible, Vec::new()),
                Some(limits) => match rcsp_core::solve_prepared(&prepared, &limits, options) {
                    Err(_) => (Outcome::Timeout, Vec::new()),
                    Ok(r) if r.solutions.is_empty() => (Outcome::Infeasible, Vec::new()),
                    Ok(r) => (Outcome::Solved, r.solutions),
                },
            }
        }
    };
    record.seconds = began.elapsed().as_secs_f64();
    record.outcome = outcome;
    record.num_solutions = solutions.len();
    record.solutions = solutions.iter().map(|s| s.cost.clone()).collect();
    (record, solutions)
}

pub fn run_on_graph(map: &str, graph: &Graph, instance: &Instance, timeout: Duration) -> RunRecord {
    solve_on_graph(map, graph, instance, timeout).0
}

/// Full pipeline for one instance, map loading included. Load failures give
/// an `error` record.
pub fn run_instance(config: &BenchConfig, instance: &Instance) -> RunRecord {
    match config.map.load() {
        Ok(graph) => run_on_graph(&config.map.name, &graph, instance, config.timeout),
        Err(e) => {
            eprintln!("instance {}: {e:#}", instance.id);
            let arity = config.map.extend_to.unwrap_or(config.map.files.len());
            base_record(&config.map.name, arity, instance)
        }
    }
}

/// Runs `instances` on `threads` workers sharing `graph`; records come back
/// in instance order.
pub fn run_all(map: &str, graph: &Graph, instances: &[Instance], timeout: Duration, threads: usize) -> Vec<RunRecord> {
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();
    std::thread::scope(|scope| {
        for _ in 0..threads.max(1).min(instances.len().max(1)) {
            let tx = tx.clone();
            let next = &next;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(inst) = instances.get(i) else { break };
                if tx.send((i, run_on_graph(map, graph, inst, timeout))).is_err() {
                    break;
                }
            });
        }
    });
    drop(tx);
    let mut out: Vec<(usize, RunRecord)> = rx.into_iter().collect();
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, r)| r).collect()
}

/// Loads the map once and runs the whole query × tightness grid.
pub fn run_batch(config: &BenchConfig) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let graph = config.map.load()?;
    let instances = config.instances(&graph)?;
    Ok(run_all(
        &config.map.name,
        &graph,
        &instances,
        config.timeout,
        config.threads,
    ))
}

pub fn one_based(path: &[StateId]) -> Vec<u32> {
    path.iter().map(|s| s.0 + 1).collect()
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
