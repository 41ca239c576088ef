//! Small hand-built instances with known answers.

use crate::graph::WeightedGraph;
use crate::mlgs::{GradedSubgraph, MlgsInstance};

/// Edges `{0,1}` and `{1,2}` of weight 1 and a shortcut `{0,2}` of weight 3.
pub fn triangle() -> WeightedGraph {
    WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]).expect("valid graph")
}

/// Two-level instance with a cost-25 grading: grade-2 terminals 0, 1, 2
/// meet at Steiner vertex 4, terminal 3 hangs off 1 through vertex 5.
/// Stretch 3.
pub fn two_level_example() -> (MlgsInstance, GradedSubgraph) {
    let g = WeightedGraph::new(
        6,
        [
            (0, 4, 4.0),
            (1, 4, 2.0),
            (2, 4, 5.0),
            (1, 5, 1.0),
            (3, 5, 2.0),
            (0, 1, 7.0),
            (2, 3, 6.0),
        ],
    )
    .expect("valid graph");
    let grades = g
        .edges()
        .iter()
        .map(|e| match (e.u, e.v) {
            (0, 4) | (1, 4) | (2, 4) => 2,
            (1, 5) | (3, 5) => 1,
            _ => 0,
        })
        .collect();
    let inst = MlgsInstance::new(g, vec![vec![0, 1, 2, 3], vec![0, 1, 2]], 3.0)
        .expect("valid instance");
    (inst, GradedSubgraph::new(grades))
}

/// Cycle on `unit_edges + 1` vertices: edge `{0,1}` weighs `1 + eps`, the
/// other `unit_edges` edges weigh 1. Every vertex is a level-1 terminal and
/// 0, 1 are terminals on every level. The stretch equals the edge count of
/// the cycle, so dropping any single edge keeps level 1 feasible.
///
/// Bottom-up with exact subproblems keeps the unit path on every level
/// (`levels * unit_edges`); the optimum grades `{0,1}` at `levels` and all
/// but one unit edge at 1 (`(1 + eps) levels + unit_edges - 1`).
pub fn cycle_instance(unit_edges: usize, levels: usize, eps: f64) -> MlgsInstance {
    assert!(unit_edges >= 2 && levels >= 1);
    let n = unit_edges + 1;
    let mut edges = vec![(0, 1, 1.0 + eps)];
    edges.extend((1..n).map(|v| (v, (v + 1) % n, 1.0)));
    let g = WeightedGraph::new(n, edges).expect("valid graph");
    let mut terminals = vec![(0..n).collect::<Vec<_>>()];
    terminals.extend((1..levels).map(|_| vec![0, 1]));
    MlgsInstance::new(g, terminals, n as f64).expect("valid instance")
}

/// Ladder with one rung per level. Row `i` (1-based) has vertices
/// `2(i-1)` and `2(i-1)+1` joined by a rung of weight `1 + i eps`; rows are
/// linked by rails of weight `eps`. Level `i` needs rows `i..=levels`, stretch 2.
///
/// The rung weights increase by `eps` per row so that the cheapest spanner
/// of the rows from `i` up is unique and uses rung `i`. Top-down with exact
/// subproblems then pays for every rung, about `levels (levels + 1) / 2`,
/// while the optimum only grades the top rung, about `levels`.
pub fn ladder_instance(levels: usize, eps: f64) -> MlgsInstance {
    assert!(levels >= 1);
    let left = |i: usize| 2 * (i - 1);
    let right = |i: usize| 2 * (i - 1) + 1;
    let mut edges = Vec::new();
    for i in 1..=levels {
        edges.push((left(i), right(i), 1.0 + i as f64 * eps));
        if i < levels {
            edges.push((left(i), left(i + 1), eps));
            edges.push((right(i), right(i + 1), eps));
        }
    }
    let g = WeightedGraph::new(2 * levels, edges).expect("valid graph");
    let terminals = (1..=levels)
        .map(|i| (2 * (i - 1)..2 * levels).collect())
        .collect();
    MlgsInstance::new(g, terminals, 2.0).expect("valid instance")
}
