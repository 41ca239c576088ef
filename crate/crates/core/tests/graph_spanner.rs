mod common;

use common::{arb_graph, arb_sparse_graph};
use mlspan_core::ilp::min_subsetwise_spanner;
use mlspan_core::*;
use proptest::prelude::*;

fn bellman_ford(g: &WeightedGraph, s: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.vertex_count()];
    dist[s] = 0.0;
    for _ in 0..g.vertex_count() {
        for e in g.edges() {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                if dist[a] + e.weight < dist[b] {
                    dist[b] = dist[a] + e.weight;
                }
            }
        }
    }
    dist
}

fn close(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= 1e-9 * a.abs().max(1.0)
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dijkstra_matches_bellman_ford(g in arb_sparse_graph(10)) {
        for s in 0..g.vertex_count() {
            let fast = single_source_distances(&g, s).unwrap();
            let slow = bellman_ford(&g, s);
            for v in 0..g.vertex_count() {
                prop_assert!(close(fast[v], slow[v]), "s={} v={} {} vs {}", s, v, fast[v], slow[v]);
            }
        }
    }

    #[test]
    fn path_weight_matches_distance(g in arb_sparse_graph(9)) {
        let d = all_pairs_distances(&g);
        for u in 0..g.vertex_count() {
            for v in 0..g.vertex_count() {
                match shortest_path(&g, u, v) {
                    Ok(p) => {
                        prop_assert!(close(p.total_weight, d.get(u, v)));
                        let summed: f64 = p.edge_ids(&g).iter().map(|&id| g.edge(id).weight).sum();
                        prop_assert!(close(summed, p.total_weight));
                        prop_assert_eq!(p.vertices.first(), Some(&u));
                        prop_assert_eq!(p.vertices.last(), Some(&v));
                    }
                    Err(_) => prop_assert!(d.get(u, v).is_infinite()),
                }
            }
        }
    }

    #[test]
    fn prefixes_are_shortest_paths(g in arb_graph(9, 20)) {
        for u in 0..g.vertex_count() {
            for v in 0..g.vertex_count() {
                let p = shortest_path(&g, u, v).unwrap();
                for (k, &w) in p.vertices.iter().enumerate() {
                    let prefix = shortest_path(&g, u, w).unwrap();
                    prop_assert_eq!(&prefix.vertices[..], &p.vertices[..=k]);
                }
            }
        }
    }

    #[test]
    fn stretch_check_is_monotone(g in arb_graph(8, 16), keep in proptest::collection::vec(any::<bool>(), 16), t in 1.0f64..3.0, extra in 0.0f64..2.0) {
        let h: EdgeSet = (0..g.edge_count()).filter(|&id| keep[id]).collect();
        let pairs = all_pairs(g.vertex_count());
        if stretch_violations(&g, &h, pairs.clone(), t).unwrap().is_empty() {
            prop_assert!(stretch_violations(&g, &h, pairs, t + extra).unwrap().is_empty());
        }
    }

    #[test]
    fn greedy_spanner_meets_stretch_on_all_pairs(g in arb_graph(10, 25), r in 1.0f64..4.0) {
        let h = greedy_spanner(&g, r).unwrap();
        prop_assert!(stretch_violations(&g, &h, all_pairs(g.vertex_count()), r).unwrap().is_empty());
        prop_assert_eq!(greedy_spanner(&g, r).unwrap(), h);
    }

    #[test]
    fn preserver_keeps_exact_distances(g in arb_graph(10, 25), picks in proptest::collection::vec((0usize..10, 0usize..10), 0..8)) {
        let n = g.vertex_count();
        let pairs: PairSet = picks.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let h = path_union_preserver(&g, &pairs).unwrap();
        prop_assert!(stretch_violations(&g, &h, &pairs, 1.0).unwrap().is_empty());
        prop_assert_eq!(path_union_preserver(&g, &pairs).unwrap(), h);
    }

    #[test]
    fn subsetwise_heuristic_is_feasible_and_never_beats_the_optimum(
        g in arb_graph(7, 12),
        mask in proptest::collection::vec(any::<bool>(), 7),
        t in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0]),
    ) {
        let terminals: Vec<usize> = (0..g.vertex_count()).filter(|&v| mask[v]).collect();
        let h = subsetwise_spanner(&g, &terminals, t).unwrap();
        let pairs = PairSet::all_pairs(&terminals);
        prop_assert!(stretch_violations(&g, &h, &pairs, t).unwrap().is_empty());
        let opt = min_subsetwise_spanner(&g, &terminals, t, 1_000_000).unwrap();
        prop_assert!(stretch_violations(&g, &opt, &pairs, t).unwrap().is_empty());
        prop_assert!(opt.weight(&g) <= h.weight(&g) + 1e-9);
    }
}

#[test]
fn unit_weight_greedy_respects_size_bound() {
    use rand::{Rng, SeedableRng};
    for k in [1u32, 2] {
        for n in [10usize, 20, 50] {
            for seed in 0..5 {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let edges: Vec<_> = all_pairs(n)
                    .into_iter()
                    .filter(|_| rng.random_bool(0.5))
                    .map(|(a, b)| (a, b, 1.0))
                    .collect();
                let g = WeightedGraph::new(n, edges).unwrap();
                let h = greedy_spanner(&g, (2 * k + 1) as f64).unwrap();
                let bound = n * (n as f64).powf(1.0 / k as f64).ceil() as usize;
                assert!(h.len() <= bound, "n={n} k={k}: {} > {bound}", h.len());
            }
        }
    }
}

#[test]
fn disconnected_pairs_are_violations() {
    let g = WeightedGraph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
    let v = stretch_violations(&g, &EdgeSet::full(&g), [(0, 2)], 2.0).unwrap();
    assert_eq!(v.len(), 1);
    assert!(v[0].subgraph_distance.is_infinite());
}

#[test]
fn terminal_graph_uses_graph_distances() {
    let g = fixtures::triangle();
    let closure = terminal_complete_graph(&g, &[2, 0]).unwrap();
    assert_eq!(closure.terminals, vec![0, 2]);
    assert_eq!(closure.graph.edge(0).weight, 2.0);
}
