#![allow(dead_code)]

use mlspan_core::{MlgsInstance, WeightedGraph};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Connected graph: random spanning tree plus extra edges, integer weights
/// in `1..=max_weight`, at most `max_edges` edges in total.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, max_edges: usize, max_weight: u32) -> WeightedGraph {
    build_graph(rng, n, max_edges, max_weight, false)
}

fn build_graph(rng: &mut ChaCha8Rng, n: usize, max_edges: usize, max_weight: u32, fill: bool) -> WeightedGraph {
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        edges.push((parent, order[i], rng.random_range(1..=max_weight) as f64));
    }
    let mut others: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !edges.iter().any(|&(x, y, _)| (x.min(y), x.max(y)) == (a, b)))
        .collect();
    others.shuffle(rng);
    let room = max_edges.saturating_sub(edges.len());
    let extra = if fill {
        room.min(others.len())
    } else {
        rng.random_range(0..=room.min(others.len()))
    };
    for &(a, b) in &others[..extra] {
        edges.push((a, b, rng.random_range(1..=max_weight) as f64));
    }
    WeightedGraph::new(n, edges).expect("valid graph")
}

/// Nested terminal sets, each of size at least 2.
pub fn random_terminals(rng: &mut ChaCha8Rng, n: usize, levels: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    current.shuffle(rng);
    current.truncate(rng.random_range(2..=n));
    let mut out = Vec::new();
    for _ in 0..levels {
        let mut sorted = current.clone();
        sorted.sort_unstable();
        out.push(sorted);
        let keep = rng.random_range(2..=current.len());
        current.truncate(keep);
    }
    out
}

/// Random instance with `n` in `3..=max_n` and at most `max_edges` edges.
pub fn random_instance(seed: u64, max_n: usize, max_edges: usize, levels: usize, t: f64) -> MlgsInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(3..=max_n);
    let g = random_graph(&mut rng, n, max_edges, 10);
    let terminals = random_terminals(&mut rng, n, levels);
    MlgsInstance::new(g, terminals, t).expect("valid instance")
}

/// Like [`random_instance`] with `n` in `max_n / 2 + 1..=max_n` and as many
/// edges as `max_edges` allows.
pub fn dense_instance(seed: u64, max_n: usize, max_edges: usize, levels: usize, t: f64) -> MlgsInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(max_n / 2 + 1..=max_n);
    let g = build_graph(&mut rng, n, max_edges, 10, true);
    let terminals = random_terminals(&mut rng, n, levels);
    MlgsInstance::new(g, terminals, t).expect("valid instance")
}

/// Connected graphs with up to `max_n` vertices and small integer weights.
pub fn arb_graph(max_n: usize, max_edges: usize) -> impl Strategy<Value = WeightedGraph> {
    (2..=max_n, any::<u64>())
        .prop_map(move |(n, seed)| random_graph(&mut ChaCha8Rng::seed_from_u64(seed), n, max_edges, 10))
}

/// Possibly disconnected graphs with arbitrary positive float weights.
pub fn arb_sparse_graph(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let count = pairs.len();
        (
            Just(n),
            Just(pairs),
            proptest::collection::vec(proptest::option::weighted(0.4, 0.1f64..20.0), count),
        )
            .prop_map(|(n, pairs, weights)| {
                let edges = pairs
                    .into_iter()
                    .zip(weights)
                    .filter_map(|((a, b), w)| w.map(|w| (a, b, w)));
                WeightedGraph::new(n, edges).expect("valid graph")
            })
    })
}

pub fn arb_instance(max_n: usize, max_edges: usize, max_levels: usize) -> impl Strategy<Value = MlgsInstance> {
    (any::<u64>(), 1..=max_levels, prop::sample::select(vec![1.0, 1.25, 1.5, 2.0, 3.0]))
        .prop_map(move |(seed, levels, t)| random_instance(seed, max_n, max_edges, levels, t))
}
