//! Shortest-path size reductions for the flow models.
//!
//! 1. An edge longer than the distance between its endpoints is never part
//!    of a minimum-cost spanner and is deleted.
//! 2. Arc `i -> j` cannot be on the path of pair `(s, t)` when
//!    `d(s, i) + c_ij + d(j, t)` exceeds the pair's budget; it is fixed to 0.
//!    Edges whose arcs are fixed to 0 for every pair are deleted.
//! 3. Arc `i -> j` is on every admissible path of `(s, t)` when removing it
//!    pushes `d(s, t)` over the budget; it is fixed to 1 and so is its edge.
//!
//! The three tests run in this order, twice.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use crate::error::Result;
use crate::graph::{all_pairs_distances, approx_le, check_stretch, EdgeSet, WeightedGraph};
use crate::spanner::PairSet;

use super::model::{IlpModel, ModelKind};

/// Arc `from -> to` on the path of pair `(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcKey {
    pub pair: (usize, usize),
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Fixings {
    pub deleted_edges: BTreeSet<(usize, usize)>,
    pub arcs_zero: BTreeSet<ArcKey>,
    pub arcs_one: BTreeSet<ArcKey>,
    pub edges_one: BTreeSet<(usize, usize)>,
}

impl Fixings {
    /// Arcs fixed both ways; non-empty means some pair has no admissible path.
    pub fn conflicts(&self) -> Vec<ArcKey> {
        self.arcs_zero.intersection(&self.arcs_one).copied().collect()
    }

    /// Line-oriented listing: `delete u v`, `zero i j s t`, `one i j s t`, `edge u v`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (u, v) in &self.deleted_edges {
            out.push_str(&format!("delete {u} {v}\n"));
        }
        for a in &self.arcs_zero {
            out.push_str(&format!("zero {} {} {} {}\n", a.from, a.to, a.pair.0, a.pair.1));
        }
        for a in &self.arcs_one {
            out.push_str(&format!("one {} {} {} {}\n", a.from, a.to, a.pair.0, a.pair.1));
        }
        for (u, v) in &self.edges_one {
            out.push_str(&format!("edge {u} {v}\n"));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Reduction {
    /// Input graph minus the deleted edges; vertex ids are unchanged.
    pub graph: WeightedGraph,
    pub fixings: Fixings,
}

impl Reduction {
    pub fn is_infeasible(&self) -> bool {
        !self.fixings.conflicts().is_empty()
    }
}

const PASSES: usize = 2;

pub fn reduce_instance(g: &WeightedGraph, pairs: &PairSet, t: f64) -> Result<Reduction> {
    check_stretch(t)?;
    let pair_list: Vec<(usize, usize)> = pairs.iter().collect();
    let budgets: Vec<f64> = {
        let d = all_pairs_distances(g);
        pair_list.iter().map(|&(s, u)| t * d.get(s, u)).collect()
    };

    let mut graph = g.clone();
    let mut fixings = Fixings::default();
    for _ in 0..PASSES {
        // test 1
        let dist = all_pairs_distances(&graph);
        let dominated: EdgeSet = graph
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| {
                let d = dist.get(e.u, e.v);
                d < e.weight && !approx_le(e.weight, d)
            })
            .map(|(id, _)| id)
            .collect();
        for id in dominated.iter() {
            fixings.deleted_edges.insert(graph.edge(id).endpoints());
        }
        graph = graph.without_edges(&dominated);

        // test 2
        let dist = all_pairs_distances(&graph);
        let mut usable = vec![false; graph.edge_count()];
        for (k, &(s, u)) in pair_list.iter().enumerate() {
            for (id, e) in graph.edges().iter().enumerate() {
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    let through = dist.get(s, a) + e.weight + dist.get(b, u);
                    if approx_le(through, budgets[k]) {
                        usable[id] = true;
                    } else {
                        fixings.arcs_zero.insert(ArcKey {
                            pair: (s, u),
                            from: a,
                            to: b,
                        });
                    }
                }
            }
        }
        let unusable: EdgeSet = usable
            .iter()
            .enumerate()
            .filter(|(_, &ok)| !ok)
            .map(|(id, _)| id)
            .collect();
        for id in unusable.iter() {
            fixings.deleted_edges.insert(graph.edge(id).endpoints());
        }
        graph = graph.without_edges(&unusable);

        // test 3, one search per (removed arc, source)
        let mut by_source: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (k, &(s, _)) in pair_list.iter().enumerate() {
            by_source.entry(s).or_default().push(k);
        }
        for e in graph.edges() {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                for (&s, ks) in &by_source {
                    let d = dijkstra_without_arc(&graph, s, (a, b));
                    for &k in ks {
                        let (_, u) = pair_list[k];
                        if !approx_le(d[u], budgets[k]) {
                            fixings.arcs_one.insert(ArcKey {
                                pair: (s, u),
                                from: a,
                                to: b,
                            });
                            fixings.edges_one.insert((e.u, e.v));
                        }
                    }
                }
            }
        }
    }

    // drop fixings that refer to deleted edges
    let alive = |a: &ArcKey| graph.edge_id(a.from, a.to).is_some();
    fixings.arcs_zero.retain(alive);
    fixings.arcs_one.retain(alive);
    fixings.edges_one.retain(|&(u, v)| graph.edge_id(u, v).is_some());
    Ok(Reduction { graph, fixings })
}

/// Directed Dijkstra on the arc version of `g` with one arc removed.
fn dijkstra_without_arc(g: &WeightedGraph, source: usize, removed: (usize, usize)) -> Vec<f64> {
    #[derive(PartialEq)]
    struct Item(f64, usize);
    impl Eq for Item {}
    impl PartialOrd for Item {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Item {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
        }
    }

    let mut dist = vec![f64::INFINITY; g.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Item(0.0, source));
    while let Some(Item(d, x)) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        for &(y, id) in g.neighbors(x) {
            if (x, y) == removed {
                continue;
            }
            let nd = d + g.edge(id).weight;
            if nd < dist[y] {
                dist[y] = nd;
                heap.push(Item(nd, y));
            }
        }
    }
    dist
}

/// Writes the fixings into a model's variable bounds.
///
/// Works on models built over the original graph (deleted edges are forced
/// to 0) as well as over the reduced graph. In multi-level models a forced
/// arc raises the edge grade to at least the pair's required grade.
pub fn apply_fixings(model: &mut IlpModel, fixings: &Fixings) {
    for &(u, v) in &fixings.deleted_edges {
        if let Some(var) = model.edge_var(u, v) {
            model.restrict(var, 0, 0);
            for k in 0..model.pairs.len() {
                for (a, b) in [(u, v), (v, u)] {
                    if let Some(arc) = model.arc_var(k, a, b) {
                        model.restrict(arc, 0, 0);
                    }
                }
            }
        }
    }
    let arc_of = |model: &IlpModel, a: &ArcKey| {
        model
            .pair_index(a.pair.0, a.pair.1)
            .and_then(|k| model.arc_var(k, a.from, a.to).map(|var| (k, var)))
    };
    for a in &fixings.arcs_zero {
        if let Some((_, var)) = arc_of(model, a) {
            model.restrict(var, 0, 0);
        }
    }
    for a in &fixings.arcs_one {
        if let Some((k, var)) = arc_of(model, a) {
            model.restrict(var, 1, 1);
            if let Some(edge) = model.edge_var(a.from, a.to) {
                let lower = match model.kind {
                    ModelKind::Pairwise => 1,
                    ModelKind::Mlgs { .. } => model.pair_grades[k] as i64,
                };
                model.restrict(edge, lower, i64::MAX);
            }
        }
    }
    if model.kind == ModelKind::Pairwise {
        for &(u, v) in &fixings.edges_one {
            if let Some(var) = model.edge_var(u, v) {
                model.restrict(var, 1, 1);
            }
        }
    }
}
