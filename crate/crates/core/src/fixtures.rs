//! Small hand-made instances used across tests, benches and the CLI smoke runs.

/// The eight-state, three-attribute example graph: a start state, a goal
/// state, three intermediate states, and a negative `cost_1` / `cost_3` cycle
/// `u4 -> u5 -> u6 -> u4` that no start-goal walk passes through.
///
/// Successor order matters for the LIFO trace: `us` lists `u1, u2, u3`,
/// `u1` lists `u3, ug` and `u2` lists `ug, u3`.
pub mod sample {
    use crate::cost::{Cost, CostVector};
    use crate::graph::{Graph, StateId};

    pub const US: StateId = StateId(0);
    pub const U1: StateId = StateId(1);
    pub const U2: StateId = StateId(2);
    pub const U3: StateId = StateId(3);
    pub const UG: StateId = StateId(4);
    pub const U4: StateId = StateId(5);
    pub const U5: StateId = StateId(6);
    pub const U6: StateId = StateId(7);

    pub const STATE_COUNT: usize = 8;

    pub const EDGES: [(StateId, StateId, [Cost; 3]); 13] = [
        (US, U1, [1, 1, 1]),
        (US, U2, [0, 1, -1]),
        (US, U3, [1, 1, 1]),
        (U1, U3, [1, 1, 1]),
        (U1, UG, [-2, 0, 3]),
        (U2, UG, [2, 2, 1]),
        (U2, U3, [1, 1, 1]),
        (U3, UG, [1, 1, 1]),
        (U4, U5, [1, 1, 1]),
        (U5, U6, [-3, 1, -3]),
        (U6, U4, [1, 1, 1]),
        (U4, UG, [1, 1, 1]),
        (U4, U2, [1, 1, 1]),
    ];

    pub fn edge_list() -> Vec<(usize, usize, CostVector)> {
        EDGES
            .iter()
            .map(|(s, t, c)| (s.index(), t.index(), CostVector::from(*c)))
            .collect()
    }

    pub fn graph() -> Graph {
        Graph::from_edges(STATE_COUNT, 3, edge_list()).expect("fixture is well formed")
    }

    /// The same graph with an extra edge `u3 -> u4` of cost `(1,1,1)`, which
    /// puts the negative cycle on a start-goal walk.
    pub fn graph_with_cycle_on_path() -> Graph {
        let mut edges = edge_list();
        edges.push((U3.index(), U4.index(), CostVector::from([1, 1, 1])));
        Graph::from_edges(STATE_COUNT, 3, edges).expect("fixture is well formed")
    }

    /// Human-readable state names, indexed by id.
    pub const NAMES: [&str; STATE_COUNT] = ["us", "u1", "u2", "u3", "ug", "u4", "u5", "u6"];
}

/// Synthetic road-like maps standing in for DIMACS files in tests and
/// benches.
pub mod grid {
    use rand::Rng;

    use crate::cost::Cost;
    use crate::dimacs::RawAttributeGraph;

    /// A `rows x cols` grid with two-way streets, about a tenth of them
    /// missing. Returns a distance file and a travel-time file. Each street
    /// gets a speed class, so fast streets are not always the short ones.
    pub fn road_grid<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> [RawAttributeGraph; 2] {
        let id = |r: usize, c: usize| (r * cols + c) as u32;
        let mut dist = Vec::new();
        let mut time = Vec::new();
        let mut street = |a: u32, b: u32, rng: &mut R| {
            if rng.random_bool(0.1) {
                return;
            }
            let d: Cost = rng.random_range(50..=1500);
            let speed: Cost = [10, 14, 20, 30][rng.random_range(0..4)];
            let t = d * 36 / speed + rng.random_range(0..=20);
            for (u, v) in [(a, b), (b, a)] {
                dist.push((u, v, d));
                time.push((u, v, t));
            }
        };
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    street(id(r, c), id(r, c + 1), rng);
                }
                if r + 1 < rows {
                    street(id(r, c), id(r + 1, c), rng);
                }
            }
        }
        let n = rows * cols;
        [
            RawAttributeGraph {
                name: "grid-d".into(),
                state_count: n,
                arcs: dist,
            },
            RawAttributeGraph {
                name: "grid-t".into(),
                state_count: n,
                arcs: time,
            },
        ]
    }
}
