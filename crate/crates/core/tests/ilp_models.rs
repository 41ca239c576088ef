mod common;

use common::{arb_instance, fixture_path, random_instance};
use mlspan_core::ilp::{apply_fixings, exhaustive_optimum, ModelKind};
use mlspan_core::*;
use proptest::prelude::*;

fn t1_pairs(inst: &MlgsInstance) -> PairSet {
    PairSet::all_pairs(inst.terminals(1))
}

/// Reduced graph with the same terminals and stretch.
fn reduced_instance(inst: &MlgsInstance) -> (MlgsInstance, Fixings) {
    let r = reduce_instance(inst.graph(), &t1_pairs(inst), inst.stretch()).unwrap();
    let reduced = MlgsInstance::new(
        r.graph.clone(),
        inst.terminal_levels().to_vec(),
        inst.stretch(),
    )
    .unwrap();
    (reduced, r.fixings)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pairwise_variable_count(inst in arb_instance(8, 14, 1)) {
        let pairs = t1_pairs(&inst);
        let m = inst.graph().edge_count();
        let model = build_pairwise_model(inst.graph(), &pairs, inst.stretch()).unwrap();
        prop_assert_eq!(model.variable_count(), m + 2 * m * pairs.len());
        let mlgs = build_mlgs_model(&inst).unwrap();
        prop_assert_eq!(mlgs.variable_count(), m + 2 * m * pairs.len());
        prop_assert_eq!(mlgs.relaxable_vars().count(), 2 * m * pairs.len());
    }

    #[test]
    fn emitted_lp_is_stable_and_complete(inst in arb_instance(6, 9, 2)) {
        let model = build_mlgs_model(&inst).unwrap();
        let text = emit_lp_text(&model);
        prop_assert_eq!(&emit_lp_text(&build_mlgs_model(&inst).unwrap()), &text);
        for v in &model.variables {
            prop_assert!(text.contains(&v.name));
        }
    }

    #[test]
    fn exact_solution_satisfies_the_model(inst in arb_instance(6, 9, 2)) {
        // grades plus lexicographic shortest-path arcs inside each level
        let exact = solve_exact(&inst).unwrap();
        let model = build_mlgs_model(&inst).unwrap();
        let g = inst.graph();
        let mut values = vec![0i64; model.variable_count()];
        for (e, &y) in exact.solution.grades().iter().enumerate() {
            values[model.edge_vars[e]] = y as i64;
        }
        for (k, &(s, u)) in model.pairs.iter().enumerate() {
            let mask = exact.solution.level_mask(model.pair_grades[k] as usize);
            let path = graph::shortest_path_within(g, &mask, s, u).unwrap();
            for w in path.vertices.windows(2) {
                values[model.arc_var(k, w[0], w[1]).unwrap()] = 1;
            }
        }
        prop_assert!(model.is_satisfied_by(&values));
        prop_assert!((model.objective_value(&values) - exact.objective).abs() < 1e-9);
    }

    #[test]
    fn reductions_keep_the_optimum(inst in arb_instance(7, 12, 2)) {
        let (reduced, fixings) = reduced_instance(&inst);
        prop_assert!(fixings.conflicts().is_empty());
        let before = solve_exact(&inst).unwrap().objective;
        let after = solve_exact(&reduced).unwrap().objective;
        prop_assert_eq!(before, after);
    }
}

#[test]
fn model_search_matches_exact_solver() {
    for seed in 0..12 {
        let inst = random_instance(seed, 5, 7, 1 + (seed % 2) as usize, [1.0, 1.5, 2.0][seed as usize % 3]);
        let model = build_mlgs_model(&inst).unwrap();
        let searched = exhaustive_optimum(&model, 50_000_000).unwrap();
        assert!(model.is_satisfied_by(&searched.values));
        assert_eq!(searched.objective, solve_exact(&inst).unwrap().objective, "seed {seed}");
    }
}

#[test]
fn fixings_keep_the_model_optimum() {
    for seed in 100..110 {
        let inst = random_instance(seed, 5, 7, 2, [1.0, 1.5, 2.0, 4.0][seed as usize % 4]);
        let (_, fixings) = reduced_instance(&inst);
        let plain = build_mlgs_model(&inst).unwrap();
        let mut fixed = plain.clone();
        apply_fixings(&mut fixed, &fixings);
        let a = exhaustive_optimum(&plain, 50_000_000).unwrap().objective;
        let b = exhaustive_optimum(&fixed, 50_000_000).unwrap().objective;
        assert_eq!(a, b, "seed {seed}");
    }
}

#[test]
fn triangle_reductions() {
    let g = fixtures::triangle();
    let pairs: PairSet = [(0, 2)].into_iter().collect();
    let r = reduce_instance(&g, &pairs, 1.0).unwrap();
    assert!(r.fixings.deleted_edges.contains(&(0, 2)));
    assert_eq!(r.graph.edge_count(), 2);

    let reduced_model = build_pairwise_model(&r.graph, &pairs, 1.0).unwrap();
    let text = emit_lp_text(&reduced_model);
    assert!(!text.contains("x_e_0_2"));
    assert!(!text.contains("xa_0_2_") && !text.contains("xa_2_0_"));

    let loose = reduce_instance(&g, &pairs, 10.0).unwrap();
    assert!(loose.fixings.arcs_zero.is_empty());
}

#[test]
fn path_arcs_are_forced() {
    let g = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
    let pairs: PairSet = [(0, 2)].into_iter().collect();
    let r = reduce_instance(&g, &pairs, 1.0).unwrap();
    let ones: Vec<(usize, usize)> = r.fixings.arcs_one.iter().map(|a| (a.from, a.to)).collect();
    assert_eq!(ones, vec![(0, 1), (1, 2)]);
    assert_eq!(r.fixings.edges_one.len(), 2);
}

#[test]
fn golden_lp_files() {
    let tri = fixtures::triangle();
    let pairs: PairSet = [(0, 2)].into_iter().collect();
    let pairwise = build_pairwise_model(&tri, &pairs, 1.0).unwrap();
    let golden = std::fs::read_to_string(fixture_path("triangle_pairwise.lp")).unwrap();
    assert_eq!(emit_lp_text(&pairwise), golden);

    let inst = format::read_instance(fixture_path("triangle.mlgs")).unwrap();
    let mlgs = build_mlgs_model(&inst).unwrap();
    assert_eq!(mlgs.kind, ModelKind::Mlgs { levels: 1 });
    let golden = std::fs::read_to_string(fixture_path("triangle_mlgs.lp")).unwrap();
    assert_eq!(emit_lp_text(&mlgs), golden);
}

#[test]
fn model_with_130_variables() {
    // 5 vertices, 10 edges, 6 pairs among 4 terminals
    let edges: Vec<_> = (0..5)
        .flat_map(|a| (a + 1..5).map(move |b| (a, b, 1.0 + (a + b) as f64)))
        .collect();
    let g = WeightedGraph::new(5, edges).unwrap();
    let pairs = PairSet::all_pairs(&[0, 1, 2, 3]);
    let model = build_pairwise_model(&g, &pairs, 2.0).unwrap();
    assert_eq!(model.variable_count(), 130);
    let text = emit_lp_text(&model);
    let declared: usize = ["Binary", "General"]
        .iter()
        .filter_map(|section| text.split(&format!("{section}\n")).nth(1))
        .map(|rest| {
            rest.lines()
                .take_while(|l| l.starts_with(' '))
                .map(|l| l.split_whitespace().count())
                .sum::<usize>()
        })
        .sum();
    assert_eq!(declared, 130);
}

#[test]
fn pairwise_all_pairs_identity_stretch_preserves_distances() {
    for seed in 0..5 {
        let inst = random_instance(seed, 4, 5, 1, 1.0);
        let g = inst.graph();
        let all: Vec<usize> = (0..g.vertex_count()).collect();
        let pairs = PairSet::all_pairs(&all);
        let model = build_pairwise_model(g, &pairs, 1.0).unwrap();
        let opt = exhaustive_optimum(&model, 50_000_000).unwrap();
        let h: EdgeSet = (0..g.edge_count())
            .filter(|&e| opt.values[model.edge_vars[e]] == 1)
            .collect();
        assert!(stretch_violations(g, &h, &pairs, 1.0).unwrap().is_empty());
    }
}
