//! Single-level constructions: the greedy spanner, shortest-path-union
//! distance preservers, the terminal complete graph (metric closure over a
//! terminal set) and the heuristic subsetwise spanner built from them.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{
    approx_le, check_stretch, dijkstra, path_from_target_distances, EdgeSet, WeightedGraph,
};

/// Unordered vertex pairs, each stored once as `(min, max)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairSet(BTreeSet<(usize, usize)>);

impl PairSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every pair of distinct vertices from `vertices`.
    pub fn all_pairs(vertices: &[usize]) -> Self {
        let mut set = BTreeSet::new();
        for (i, &a) in vertices.iter().enumerate() {
            for &b in &vertices[i + 1..] {
                if a != b {
                    set.insert((a.min(b), a.max(b)));
                }
            }
        }
        Self(set)
    }

    /// Inserts `{a, b}`; a pair `(a, a)` is rejected.
    pub fn insert(&mut self, a: usize, b: usize) -> Result<bool> {
        if a == b {
            return Err(Error::InvalidArgument(format!("pair ({a}, {a}) is not allowed")));
        }
        Ok(self.0.insert((a.min(b), a.max(b))))
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.0.contains(&(a.min(b), a.max(b)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<(usize, usize)> for PairSet {
    /// Normalizes pairs; `(a, a)` entries are dropped.
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        Self(
            iter.into_iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect(),
        )
    }
}

impl<'a> IntoIterator for &'a PairSet {
    type Item = (usize, usize);
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, (usize, usize)>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// Greedy `r`-spanner: edges are scanned by nondecreasing weight (ties by
/// endpoints) and an edge is kept iff the current spanner distance between
/// its endpoints exceeds `r` times its weight.
pub fn greedy_spanner(g: &WeightedGraph, r: f64) -> Result<EdgeSet> {
    check_stretch(r)?;
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by(|&a, &b| {
        let (ea, eb) = (g.edge(a), g.edge(b));
        ea.weight
            .total_cmp(&eb.weight)
            .then((ea.u, ea.v).cmp(&(eb.u, eb.v)))
    });
    let mut mask = vec![false; g.edge_count()];
    for id in order {
        let e = g.edge(id);
        let d = dijkstra(g, e.u, Some(&mask), Some(e.v))[e.v];
        if !approx_le(d, r * e.weight) {
            mask[id] = true;
        }
    }
    Ok(EdgeSet::from_mask(&mask))
}

/// Union of the lexicographic shortest paths of every pair.
pub fn path_union_preserver(g: &WeightedGraph, pairs: &PairSet) -> Result<EdgeSet> {
    preserver(g, None, pairs)
}

/// [`path_union_preserver`] computed inside the subgraph `mask`; distances
/// of the pairs inside that subgraph are preserved exactly.
pub fn path_union_preserver_within(
    g: &WeightedGraph,
    mask: &[bool],
    pairs: &PairSet,
) -> Result<EdgeSet> {
    if mask.len() != g.edge_count() {
        return Err(Error::InvalidArgument("edge mask length mismatch".into()));
    }
    preserver(g, Some(mask), pairs)
}

fn preserver(g: &WeightedGraph, mask: Option<&[bool]>, pairs: &PairSet) -> Result<EdgeSet> {
    // one search per distinct target
    let mut by_target: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (u, v) in pairs {
        g.check_vertex(u)?;
        g.check_vertex(v)?;
        by_target.entry(v).or_default().push(u);
    }
    let mut out = EdgeSet::new();
    for (v, sources) in by_target {
        let to_v = dijkstra(g, v, mask, None);
        for u in sources {
            let path = path_from_target_distances(g, mask, &to_v, u, v)?;
            for id in path.edge_ids(g) {
                out.insert(id);
            }
        }
    }
    Ok(out)
}

/// Complete graph over a terminal set weighted by shortest-path distance.
///
/// Vertex `i` of [`Self::graph`] stands for `terminals[i]`.
#[derive(Debug, Clone)]
pub struct TerminalGraph {
    pub graph: WeightedGraph,
    pub terminals: Vec<usize>,
}

pub fn terminal_complete_graph(g: &WeightedGraph, terminals: &[usize]) -> Result<TerminalGraph> {
    let terminals: Vec<usize> = terminals
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if terminals.len() < 2 {
        return Err(Error::InvalidArgument(
            "terminal complete graph needs at least two terminals".into(),
        ));
    }
    for &x in &terminals {
        g.check_vertex(x)?;
    }
    let mut edges = Vec::new();
    for (i, &a) in terminals.iter().enumerate() {
        let dist = dijkstra(g, a, None, None);
        for (j, &b) in terminals.iter().enumerate().skip(i + 1) {
            if dist[b].is_infinite() {
                return Err(Error::NoPath { u: a, v: b });
            }
            edges.push((i, j, dist[b]));
        }
    }
    Ok(TerminalGraph {
        graph: WeightedGraph::new(terminals.len(), edges)?,
        terminals,
    })
}

/// Heuristic `(T x T)`-spanner: a greedy `t`-spanner of the terminal
/// complete graph picks the pairs to preserve, and the union of their
/// shortest paths in `g` realizes them.
pub fn subsetwise_spanner(g: &WeightedGraph, terminals: &[usize], t: f64) -> Result<EdgeSet> {
    check_stretch(t)?;
    let distinct: BTreeSet<usize> = terminals.iter().copied().collect();
    if distinct.len() < 2 {
        for &x in &distinct {
            g.check_vertex(x)?;
        }
        return Ok(EdgeSet::new());
    }
    let closure = terminal_complete_graph(g, terminals)?;
    let kept = greedy_spanner(&closure.graph, t)?;
    let pairs: PairSet = kept
        .iter()
        .map(|id| {
            let e = closure.graph.edge(id);
            (closure.terminals[e.u], closure.terminals[e.v])
        })
        .collect();
    path_union_preserver(g, &pairs)
}
