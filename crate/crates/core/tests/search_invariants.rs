mod common;

use common::fuzz_instances;
use rcsp_core::cost::{weakly_dominates, Cost, CostVector};
use rcsp_core::graph::StateId;
use rcsp_core::heuristic::{Prepared, UpperBounds};
use rcsp_core::oracle::{enumerate_solutions, optimal_simple_paths, verify};
use rcsp_core::search::{ConstrainedSearch, NodeId, SearchObserver};

#[derive(Default)]
struct Recorder {
    extracted: Vec<Cost>,
    accepted: Vec<(StateId, Vec<Cost>)>,
    bound_pruned: Vec<(NodeId, StateId, Vec<Cost>)>,
}

impl SearchObserver for Recorder {
    fn on_extract(&mut self, _: NodeId, f1: Cost) {
        self.extracted.push(f1);
    }
    fn on_accept(&mut self, _: NodeId, state: StateId, g: &[Cost]) {
        self.accepted.push((state, g[1..].to_vec()));
    }
    fn on_bound_prune(&mut self, parent: NodeId, state: StateId, g: &[Cost]) {
        self.bound_pruned.push((parent, state, g.to_vec()));
    }
}

const INSTANCES: usize = 2500;

#[test]
fn fuzz_solver_equals_oracle() {
    for (i, inst) in fuzz_instances(7, INSTANCES).enumerate() {
        let problem = inst.problem();
        let report = rcsp_core::solve_problem(&problem).unwrap();
        let oracle = enumerate_solutions(&problem).unwrap();
        let v = verify(&problem, &report.solutions, &oracle);
        assert!(v.passed(), "instance {i}: {v}\n{inst:?}");
    }
}

#[test]
fn fuzz_search_invariants_hold() {
    let mut prefix_checks = 0;
    for (i, inst) in fuzz_instances(8, INSTANCES).enumerate() {
        let prepared = Prepared::new(&inst.graph, inst.start, inst.goal).unwrap();
        let mut search =
            ConstrainedSearch::with_observer(&prepared, UpperBounds::new(&inst.limits), Recorder::default());
        search.run_to_end();
        let rec = search.observer();

        assert!(
            rec.extracted.windows(2).all(|w| w[0] <= w[1]),
            "instance {i}: f1 decreased"
        );
        assert_eq!(search.stats().monotonicity_violations, 0);

        // Accepted nodes of one state are never weakly dominated by an
        // earlier accepted node of that state.
        for (j, (s, tr)) in rec.accepted.iter().enumerate() {
            for (s2, tr2) in &rec.accepted[..j] {
                assert!(
                    !(s == s2 && weakly_dominates(tr2, tr)),
                    "instance {i}: accepted a dominated node at {s:?}"
                );
            }
        }

        // Each closed list is strictly lex-increasing and non-dominated.
        for u in prepared.graph().states() {
            assert!(
                search.store().closed(u.index()).is_well_formed(),
                "instance {i}: closed list of {u:?}"
            );
        }

        // Solutions: feasible, shared g1, mutually non-dominated.
        let sols = search.solutions();
        for s in &sols {
            assert!(
                weakly_dominates(&s.cost[1..], &inst.limits),
                "instance {i}: infeasible solution"
            );
            assert_eq!(s.cost[0], sols[0].cost[0]);
        }
        for (a, sa) in sols.iter().enumerate() {
            for (b, sb) in sols.iter().enumerate() {
                assert!(
                    a == b || !sa.cost.weakly_dominates(&sb.cost),
                    "instance {i}: dominated solution"
                );
            }
        }

        // A node discarded by the bound test is never a prefix of an optimal
        // path. Fuzz graphs have no parallel edges, so a state sequence fixes
        // its cost.
        let problem = inst.problem();
        let optimal = optimal_simple_paths(&problem).unwrap();
        let map = prepared.state_map();
        if !optimal.is_empty() {
            prefix_checks += rec.bound_pruned.len();
        }
        for (parent, state, g) in &rec.bound_pruned {
            let mut prefix: Vec<StateId> = search.path(*parent).into_iter().map(|s| map.original(s)).collect();
            prefix.push(map.original(*state));
            for sol in &optimal {
                if sol.path.starts_with(&prefix) {
                    let cost = prefix_cost(&inst.graph, &prefix);
                    assert_ne!(
                        cost.as_slice(),
                        &g[..],
                        "instance {i}: pruned a prefix of {:?}",
                        sol.path
                    );
                }
            }
        }
    }
    assert!(prefix_checks > 0, "bound-prune check never exercised");
    eprintln!("bound-pruned nodes checked against optimal paths: {prefix_checks}");
}

fn prefix_cost(graph: &rcsp_core::Graph, path: &[StateId]) -> CostVector {
    let mut total = CostVector::zeros(graph.arity());
    for w in path.windows(2) {
        let e = graph.out_edges(w[0]).find(|e| e.target == w[1]).expect("edge on path");
        total = &total + &CostVector::from_slice(e.cost);
    }
    total
}
