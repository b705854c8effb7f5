#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rcsp_core::cost::{Cost, CostVector, TruncatedVector, INFINITY, NEG_INFINITY};
use rcsp_core::fixtures::sample;
use rcsp_core::graph::{Graph, StateId};
use rcsp_core::heuristic::{Prepared, UpperBounds};
use rcsp_core::oracle::{random_instance, FuzzConfig, FuzzInstance};
use rcsp_core::search::{ConstrainedSearch, StepEvent};

/// Seeded stream of fuzz instances.
pub fn fuzz_instances(seed: u64, count: usize) -> impl Iterator<Item = FuzzInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = FuzzConfig::default();
    (0..count).map(move |_| random_instance(&mut rng, &config))
}

/// Bellman-Ford on the reversed graph: optimal walk cost from every state to
/// `goal` in one dimension. States that reach a negative cycle which reaches
/// the goal get `NEG_INFINITY`, unreachable ones `INFINITY`.
pub fn bellman_ford_to_goal(graph: &Graph, goal: StateId, dim: usize) -> Vec<Cost> {
    let n = graph.state_count();
    let mut dist = vec![INFINITY; n];
    dist[goal.index()] = 0;
    let relax = |dist: &mut Vec<Cost>, mark: bool| {
        for e in graph.edges() {
            let dv = dist[e.target.index()];
            if dv >= INFINITY {
                continue;
            }
            let cand = if dv <= NEG_INFINITY {
                NEG_INFINITY
            } else {
                dv + e.cost[dim]
            };
            if cand < dist[e.source.index()] {
                dist[e.source.index()] = if mark { NEG_INFINITY } else { cand };
            }
        }
    };
    for _ in 0..n.saturating_sub(1) {
        relax(&mut dist, false);
    }
    for _ in 0..n {
        relax(&mut dist, true);
    }
    dist
}

/// One row of the step-by-step search record: the frontier before the
/// extraction (in extraction order, first entry is extracted), the truncated
/// closed list of the extracted state if it changed, and the solution set
/// after the step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub open: Vec<(CostVector, CostVector, StateId)>,
    pub closed: Option<(StateId, Vec<TruncatedVector>)>,
    pub solutions: Vec<CostVector>,
    pub finished: bool,
}

pub fn record_trace(prepared: &Prepared, limits: &[Cost]) -> Vec<TraceRow> {
    let mut search = ConstrainedSearch::new(prepared, UpperBounds::new(limits));
    let map = prepared.state_map();
    let mut rows = Vec::new();
    loop {
        let open = search
            .frontier()
            .snapshot()
            .into_iter()
            .map(|x| {
                (
                    search.f(x),
                    CostVector::from_slice(search.g(x)),
                    map.original(search.state_of(x)),
                )
            })
            .collect::<Vec<_>>();
        let event = search.step();
        let closed = match event {
            StepEvent::Expanded { node, .. } | StepEvent::Solution { node } => {
                let s = search.state_of(node);
                Some((map.original(s), search.store().closed(s.index()).to_vectors()))
            }
            _ => None,
        };
        let solutions = search.solutions().into_iter().map(|s| s.cost).collect();
        let finished = matches!(event, StepEvent::Finished(_));
        rows.push(TraceRow {
            open,
            closed,
            solutions,
            finished,
        });
        if finished {
            return rows;
        }
    }
}

fn v3(a: [Cost; 3]) -> CostVector {
    CostVector::from(a)
}

fn tr(a: [Cost; 2]) -> TruncatedVector {
    TruncatedVector::from(a)
}

/// Hand-transcribed expected record for the sample graph, limits (3,3).
pub fn sample_expected_trace() -> Vec<TraceRow> {
    use sample::{U1, U2, U3, UG, US};
    // Nodes as (f, g, state).
    let x0 = (v3([-1, 1, 0]), v3([0, 0, 0]), US);
    let x1 = (v3([-1, 1, 3]), v3([1, 1, 1]), U1);
    let x2 = (v3([2, 3, 0]), v3([0, 1, -1]), U2);
    let x3 = (v3([2, 2, 2]), v3([1, 1, 1]), U3);
    let x4 = (v3([3, 3, 3]), v3([2, 2, 2]), U3);
    let x6 = (v3([2, 2, 2]), v3([2, 2, 2]), UG);
    let x7 = (v3([2, 3, 0]), v3([2, 3, 0]), UG);
    let x8 = (v3([2, 3, 1]), v3([1, 2, 0]), U3);
    let x9 = (v3([2, 3, 1]), v3([2, 3, 1]), UG);
    let row = |open: Vec<_>, closed: Option<(StateId, Vec<TruncatedVector>)>, sols: Vec<CostVector>| TraceRow {
        open,
        closed,
        solutions: sols,
        finished: false,
    };
    let s6 = v3([2, 2, 2]);
    let s7 = v3([2, 3, 0]);
    let s9 = v3([2, 3, 1]);
    vec![
        row(vec![x0.clone()], Some((US, vec![tr([0, 0])])), vec![]),
        row(
            vec![x1.clone(), x3.clone(), x2.clone()],
            Some((U1, vec![tr([1, 1])])),
            vec![],
        ),
        row(
            vec![x3.clone(), x2.clone(), x4.clone()],
            Some((U3, vec![tr([1, 1])])),
            vec![],
        ),
        row(
            vec![x6.clone(), x2.clone(), x4.clone()],
            Some((UG, vec![tr([2, 2])])),
            vec![s6.clone()],
        ),
        row(
            vec![x2.clone(), x4.clone()],
            Some((U2, vec![tr([1, -1])])),
            vec![s6.clone()],
        ),
        row(
            vec![x8.clone(), x7.clone(), x4.clone()],
            Some((U3, vec![tr([1, 1]), tr([2, 0])])),
            vec![s6.clone()],
        ),
        row(
            vec![x9.clone(), x7.clone(), x4.clone()],
            Some((UG, vec![tr([2, 2]), tr([3, 1])])),
            vec![s6.clone(), s9],
        ),
        row(
            vec![x7.clone(), x4.clone()],
            Some((UG, vec![tr([2, 2]), tr([3, 0])])),
            vec![s6.clone(), s7.clone()],
        ),
        TraceRow {
            open: vec![x4],
            closed: None,
            solutions: vec![s6, s7],
            finished: true,
        },
    ]
}

/// Directory holding `USA-road-d.NY.gr` and `USA-road-t.NY.gr`, from
/// `RCSP_DIMACS_DIR` or `<workspace>/data`.
pub fn dimacs_dir() -> std::path::PathBuf {
    match std::env::var_os("RCSP_DIMACS_DIR") {
        Some(d) => d.into(),
        None => {
            let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
            manifest.ancestors().nth(2).unwrap_or(manifest).join("data")
        }
    }
}
