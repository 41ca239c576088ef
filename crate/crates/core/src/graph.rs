//! Undirected positively weighted graphs and exact shortest-path machinery.
//!
//! Vertices are dense ids `0..n`. Edges are stored once, normalized so that
//! `u < v`, and sorted by `(u, v)`; an [`EdgeId`] is the position in that
//! order. Subgraphs are expressed as [`EdgeSet`]s or boolean edge masks.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use crate::error::{Error, Result};

pub type EdgeId = usize;

/// Relative tolerance used for every distance comparison.
pub const TOLERANCE: f64 = 1e-9;

/// `a <= b` up to [`TOLERANCE`] (relative to `max(1, |b|)`).
pub fn approx_le(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a <= b;
    }
    a <= b + TOLERANCE * b.abs().max(1.0)
}

pub fn approx_eq(a: f64, b: f64) -> bool {
    approx_le(a, b) && approx_le(b, a)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl Edge {
    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    // neighbours sorted by vertex id, which the lexicographic path rule relies on
    adjacency: Vec<Vec<(usize, EdgeId)>>,
    index: HashMap<(usize, usize), EdgeId>,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl WeightedGraph {
    /// Builds a graph, rejecting self-loops, duplicate edges, out-of-range
    /// endpoints and non-positive or non-finite weights.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("graph needs at least one vertex".into()));
        }
        let mut list = Vec::new();
        let mut seen = BTreeSet::new();
        for (a, b, w) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::InvalidVertex { vertex: x, n });
                }
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {a}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "edge {{{a}, {b}}} has non-positive weight {w}"
                )));
            }
            let (u, v) = (a.min(b), a.max(b));
            if !seen.insert((u, v)) {
                return Err(Error::InvalidArgument(format!("duplicate edge {{{u}, {v}}}")));
            }
            list.push(Edge { u, v, weight: w });
        }
        list.sort_by_key(|e| (e.u, e.v));

        let mut adjacency = vec![Vec::new(); n];
        let mut index = HashMap::with_capacity(list.len());
        for (id, e) in list.iter().enumerate() {
            adjacency[e.u].push((e.v, id));
            adjacency[e.v].push((e.u, id));
            index.insert((e.u, e.v), id);
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        Ok(Self {
            n,
            edges: list,
            adjacency,
            index,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<EdgeId> {
        self.index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, n: self.n })
        }
    }

    /// The graph with the given edges removed; vertex ids are unchanged.
    pub fn without_edges(&self, removed: &EdgeSet) -> WeightedGraph {
        let kept = self
            .edges
            .iter()
            .enumerate()
            .filter(|(id, _)| !removed.contains(*id))
            .map(|(_, e)| (e.u, e.v, e.weight));
        WeightedGraph::new(self.n, kept).expect("subgraph of a valid graph is valid")
    }

    pub fn is_connected(&self) -> bool {
        single_source_distances(self, 0)
            .map(|d| d.iter().all(|x| x.is_finite()))
            .unwrap_or(false)
    }
}

/// A set of edge ids of some graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EdgeSet(BTreeSet<EdgeId>);

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn full(g: &WeightedGraph) -> Self {
        (0..g.edge_count()).collect()
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        mask.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn insert(&mut self, id: EdgeId) -> bool {
        self.0.insert(id)
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.0.contains(&id)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union_with(&mut self, other: &EdgeSet) {
        self.0.extend(other.iter());
    }

    pub fn mask(&self, edge_count: usize) -> Vec<bool> {
        let mut m = vec![false; edge_count];
        for id in self.iter().filter(|&id| id < edge_count) {
            m[id] = true;
        }
        m
    }

    pub fn weight(&self, g: &WeightedGraph) -> f64 {
        self.iter().map(|id| g.edge(id).weight).sum()
    }

    /// Fails with [`Error::UnknownEdgeId`] if an id is not an edge of `g`.
    pub fn check_within(&self, g: &WeightedGraph) -> Result<()> {
        match self.0.iter().next_back() {
            Some(&id) if id >= g.edge_count() => Err(Error::UnknownEdgeId(id)),
            _ => Ok(()),
        }
    }

    /// Endpoint pairs, in edge-id order.
    pub fn endpoints(&self, g: &WeightedGraph) -> Vec<(usize, usize)> {
        self.iter().map(|id| g.edge(id).endpoints()).collect()
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

#[derive(Copy, Clone, PartialEq)]
struct State {
    dist: f64,
    vertex: usize,
}

impl Eq for State {}

// min-heap on distance, ties on vertex id
impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra restricted to the edges allowed by `mask` (all edges when
/// `None`). Stops early once `target` is settled, if given.
pub(crate) fn dijkstra(
    g: &WeightedGraph,
    source: usize,
    mask: Option<&[bool]>,
    target: Option<usize>,
) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(State {
        dist: 0.0,
        vertex: source,
    });
    while let Some(State { dist: d, vertex }) = heap.pop() {
        if d > dist[vertex] {
            continue;
        }
        if Some(vertex) == target {
            break;
        }
        for &(next, id) in &g.adjacency[vertex] {
            if let Some(m) = mask {
                if !m[id] {
                    continue;
                }
            }
            let nd = d + g.edges[id].weight;
            if nd < dist[next] {
                dist[next] = nd;
                heap.push(State {
                    dist: nd,
                    vertex: next,
                });
            }
        }
    }
    dist
}

/// Exact distances from `s`; unreachable vertices get `f64::INFINITY`.
pub fn single_source_distances(g: &WeightedGraph, s: usize) -> Result<Vec<f64>> {
    g.check_vertex(s)?;
    Ok(dijkstra(g, s, None, None))
}

/// Distances from `s` using only edges whose mask entry is set.
pub fn single_source_distances_within(
    g: &WeightedGraph,
    mask: &[bool],
    s: usize,
) -> Result<Vec<f64>> {
    g.check_vertex(s)?;
    if mask.len() != g.edge_count() {
        return Err(Error::InvalidArgument(format!(
            "edge mask has length {}, graph has {} edges",
            mask.len(),
            g.edge_count()
        )));
    }
    Ok(dijkstra(g, s, Some(mask), None))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<f64>,
}

impl DistanceMatrix {
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    pub fn size(&self) -> usize {
        self.n
    }
}

pub fn all_pairs_distances(g: &WeightedGraph) -> DistanceMatrix {
    let n = g.vertex_count();
    let mut dist = Vec::with_capacity(n * n);
    for s in 0..n {
        dist.extend(dijkstra(g, s, None, None));
    }
    DistanceMatrix { n, dist }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub vertices: Vec<usize>,
    pub total_weight: f64,
}

impl Path {
    pub fn edge_ids(&self, g: &WeightedGraph) -> Vec<EdgeId> {
        self.vertices
            .windows(2)
            .map(|w| g.edge_id(w[0], w[1]).expect("path follows graph edges"))
            .collect()
    }
}

/// The lexicographically smallest shortest `u`–`v` path.
///
/// Among equal-length shortest paths the vertex sequence that is smallest
/// in lexicographic order wins, so every prefix of a returned path is itself
/// the returned path for its endpoints.
pub fn shortest_path(g: &WeightedGraph, u: usize, v: usize) -> Result<Path> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    lexicographic_path(g, None, u, v)
}

/// [`shortest_path`] inside the subgraph selected by `mask`.
pub fn shortest_path_within(g: &WeightedGraph, mask: &[bool], u: usize, v: usize) -> Result<Path> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    lexicographic_path(g, Some(mask), u, v)
}

pub(crate) fn lexicographic_path(
    g: &WeightedGraph,
    mask: Option<&[bool]>,
    u: usize,
    v: usize,
) -> Result<Path> {
    let to_target = dijkstra(g, v, mask, None);
    path_from_target_distances(g, mask, &to_target, u, v)
}

/// Walks greedily from `u` along tight edges, always taking the smallest
/// neighbour id. `to_target` must be distances to `v` within the same mask.
pub(crate) fn path_from_target_distances(
    g: &WeightedGraph,
    mask: Option<&[bool]>,
    to_target: &[f64],
    u: usize,
    v: usize,
) -> Result<Path> {
    if to_target[u].is_infinite() {
        return Err(Error::NoPath { u, v });
    }
    let mut vertices = vec![u];
    let mut total = 0.0;
    let mut cur = u;
    while cur != v {
        let remaining = to_target[cur];
        let (next, id) = g.adjacency[cur]
            .iter()
            .copied()
            .find(|&(x, id)| {
                mask.is_none_or(|m| m[id])
                    && to_target[x] < remaining
                    && approx_eq(g.edges[id].weight + to_target[x], remaining)
            })
            .expect("a tight edge leaves every vertex with finite distance");
        total += g.edges[id].weight;
        vertices.push(next);
        cur = next;
    }
    Ok(Path {
        vertices,
        total_weight: total,
    })
}

/// One failed pair of a stretch check: `subgraph_distance > bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct StretchViolation {
    pub u: usize,
    pub v: usize,
    pub subgraph_distance: f64,
    pub bound: f64,
}

/// All pairs for which `d_H(u, v) <= t * d_G(u, v)` fails.
///
/// Pairs that are disconnected in `g` itself are always reported.
pub fn stretch_violations(
    g: &WeightedGraph,
    h: &EdgeSet,
    pairs: impl IntoIterator<Item = (usize, usize)>,
    t: f64,
) -> Result<Vec<StretchViolation>> {
    check_stretch(t)?;
    h.check_within(g)?;
    let mask = h.mask(g.edge_count());
    let mut by_source: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (a, b) in pairs {
        g.check_vertex(a)?;
        g.check_vertex(b)?;
        by_source.entry(a).or_default().push(b);
    }
    let mut out = Vec::new();
    for (u, targets) in by_source {
        let in_g = dijkstra(g, u, None, None);
        let in_h = dijkstra(g, u, Some(&mask), None);
        for v in targets {
            let bound = t * in_g[v];
            if in_g[v].is_infinite() || !approx_le(in_h[v], bound) {
                out.push(StretchViolation {
                    u,
                    v,
                    subgraph_distance: in_h[v],
                    bound,
                });
            }
        }
    }
    Ok(out)
}

pub(crate) fn check_stretch(t: f64) -> Result<()> {
    if t.is_finite() && t >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidStretch(t))
    }
}
