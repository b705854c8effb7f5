mod common;

use common::fuzz_instances;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rcsp_core::cost::CostVector;
use rcsp_core::dimacs::{extend_costs, merge_attributes, parse_gr_str, write_gr, RawAttributeGraph};
use rcsp_core::graph::{Graph, Problem};
use rcsp_core::heuristic::Prepared;
use rcsp_core::instance::{generate_limits, lex_optimal_cost, Tightness};
use rcsp_core::oracle::enumerate_solutions;
use rcsp_core::solve_problem;

fn raw_graphs() -> impl Strategy<Value = RawAttributeGraph> {
    (1u32..40).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, -1_000_000i64..1_000_000), 0..60).prop_map(move |arcs| RawAttributeGraph {
            name: "g".into(),
            state_count: n as usize,
            arcs,
        })
    })
}

proptest! {
    #[test]
    fn gr_text_round_trips(g in raw_graphs()) {
        let mut text = Vec::new();
        write_gr(&g, &mut text).unwrap();
        let back = parse_gr_str(std::str::from_utf8(&text).unwrap(), "g").unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn third_cost_is_rounded_mean_out_degree(g in raw_graphs()) {
        let mut t = g.clone();
        t.name = "t".into();
        let merged = merge_attributes(&[g, t]).unwrap();
        let ext = extend_costs(&merged, 4).unwrap();
        prop_assert_eq!(ext.edge_count(), merged.edge_count());
        for e in ext.edges() {
            let mean = (merged.out_degree(e.source) + merged.out_degree(e.target)) as f64 / 2.0;
            prop_assert_eq!(e.cost[2], (mean + 0.5).floor() as i64);
            prop_assert_eq!(e.cost[3], 1);
            prop_assert_eq!(&e.cost[..2], merged.edge(e.id).cost);
        }
    }
}

const DELTAS: [&str; 10] = ["0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9", "1"];

#[test]
fn limits_are_monotone_in_tightness() {
    let deltas: Vec<Tightness> = DELTAS.iter().map(|d| d.parse().unwrap()).collect();
    let mut checked = 0;
    for inst in fuzz_instances(21, 1500) {
        let p = Prepared::new(&inst.graph, inst.start, inst.goal).unwrap();
        if !p.goal_reachable() {
            continue;
        }
        checked += 1;
        let rows: Vec<Vec<i64>> = deltas.iter().map(|&d| generate_limits(&p, d).unwrap()).collect();
        for w in rows.windows(2) {
            assert!(w[0].iter().zip(&w[1]).all(|(a, b)| a <= b), "{rows:?}");
        }
        let h = p.heuristics().get(p.start());
        assert!(rows[0].iter().zip(&h[1..]).all(|(r, h)| r >= h));
    }
    assert!(checked > 200);
}

#[test]
fn full_tightness_returns_the_unconstrained_optimum() {
    let one = Tightness::ONE;
    for (i, inst) in fuzz_instances(22, 1500).enumerate() {
        let p = Prepared::new(&inst.graph, inst.start, inst.goal).unwrap();
        let Some(best) = lex_optimal_cost(&p) else { continue };
        let limits = generate_limits(&p, one).unwrap();
        assert!(best[1..].iter().zip(&limits).all(|(c, r)| c <= r), "instance {i}");
        let problem = Problem::new(&inst.graph, inst.start, inst.goal, limits).unwrap();
        let got: Vec<CostVector> = solve_problem(&problem)
            .unwrap()
            .solutions
            .into_iter()
            .map(|s| s.cost)
            .collect();
        assert!(got.contains(&best), "instance {i}: {best} not in {got:?}");
        assert!(
            enumerate_solutions(&problem).unwrap().costs().contains(&best),
            "instance {i}"
        );
    }
}

#[test]
fn oracle_ignores_edge_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for inst in fuzz_instances(24, 600) {
        let mut edges: Vec<_> = inst
            .graph
            .edges()
            .map(|e| (e.source.index(), e.target.index(), CostVector::from_slice(e.cost)))
            .collect();
        edges.shuffle(&mut rng);
        let shuffled = Graph::from_edges(inst.graph.state_count(), inst.graph.arity(), edges).unwrap();
        let a = enumerate_solutions(&inst.problem()).unwrap().costs();
        let p2 = Problem::new(&shuffled, inst.start, inst.goal, inst.limits.clone()).unwrap();
        let b = enumerate_solutions(&p2).unwrap().costs();
        let (mut a, mut b) = (a, b);
        a.sort_by(|x, y| x.as_slice().cmp(y.as_slice()));
        b.sort_by(|x, y| x.as_slice().cmp(y.as_slice()));
        assert_eq!(a, b);
        let solved = solve_problem(&p2).unwrap().solutions.into_iter().map(|s| s.cost);
        let mut c: Vec<_> = solved.collect();
        c.sort_by(|x, y| x.as_slice().cmp(y.as_slice()));
        assert_eq!(c, a);
    }
}
