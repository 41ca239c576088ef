mod common;

use common::arb_instance;
use mlspan_core::graph::approx_le;
use mlspan_core::*;
use proptest::prelude::*;

fn cost(inst: &MlgsInstance, sol: &GradedSubgraph) -> f64 {
    solution_cost(inst, sol).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn heuristic_outputs_are_feasible(inst in arb_instance(9, 18, 3)) {
        for sol in [
            bottom_up(&inst, SubsetSolver::Heuristic).unwrap(),
            top_down(&inst, SubsetSolver::Heuristic).unwrap(),
            combined(&inst, SubsetSolver::Heuristic).unwrap().solution().clone(),
        ] {
            prop_assert!(validate_mlgs(&inst, &sol).is_empty());
            prop_assert!(sol.max_grade() as usize <= inst.levels());
        }
    }

    #[test]
    fn levels_round_trip(inst in arb_instance(9, 18, 3)) {
        let sol = combined(&inst, SubsetSolver::Heuristic).unwrap().solution().clone();
        let m = inst.graph().edge_count();
        let levels = sol.to_levels(inst.levels());
        for pair in levels.windows(2) {
            prop_assert!(pair[1].is_subset(&pair[0]));
        }
        prop_assert_eq!(GradedSubgraph::from_levels(m, &levels).unwrap(), sol);
    }

    #[test]
    fn combined_keeps_the_cheaper(inst in arb_instance(9, 18, 3)) {
        let r = combined(&inst, SubsetSolver::Heuristic).unwrap();
        prop_assert_eq!(r.bottom_up_cost, cost(&inst, &bottom_up(&inst, SubsetSolver::Heuristic).unwrap()));
        prop_assert_eq!(r.top_down_cost, cost(&inst, &top_down(&inst, SubsetSolver::Heuristic).unwrap()));
        prop_assert_eq!(cost(&inst, r.solution()), r.cost());
        if r.bottom_up_cost == r.top_down_cost {
            prop_assert_eq!(r.chosen, Choice::TopDown);
        }
    }

    #[test]
    fn exact_is_optimal_and_bounds_hold(inst in arb_instance(7, 11, 3)) {
        let exact = solve_exact(&inst).unwrap();
        prop_assert!(validate_mlgs(&inst, &exact.solution).is_empty());
        let opt = exact.objective;
        let l = inst.levels() as f64;
        let bu = cost(&inst, &bottom_up(&inst, SubsetSolver::exact()).unwrap());
        let td_sol = top_down(&inst, SubsetSolver::exact()).unwrap();
        let td = cost(&inst, &td_sol);
        prop_assert!(approx_le(opt, bu) && approx_le(opt, td));
        prop_assert!(approx_le(bu, l * opt));
        prop_assert!(approx_le(td, (l + 1.0) / 2.0 * opt));
        prop_assert!(approx_le(bu.min(td), (l + 2.0) / 3.0 * opt));
        let heuristic = combined(&inst, SubsetSolver::Heuristic).unwrap().cost();
        prop_assert!(approx_le(opt, heuristic));
    }
}

#[test]
fn single_level_algorithms_coincide() {
    for seed in 0..20 {
        let inst = common::random_instance(seed, 8, 14, 1, 1.5);
        for solver in [SubsetSolver::Heuristic, SubsetSolver::exact()] {
            assert_eq!(
                bottom_up(&inst, solver).unwrap(),
                top_down(&inst, solver).unwrap()
            );
        }
    }
}

#[test]
fn example_instance_has_optimum_25() {
    let (inst, sol) = fixtures::two_level_example();
    assert!(validate_mlgs(&inst, &sol).is_empty());
    assert_eq!(cost(&inst, &sol), 25.0);
    assert_eq!(solve_exact(&inst).unwrap().objective, 25.0);
    assert_eq!(brute_force_oracle(&inst).unwrap().1, 25.0);
}

#[test]
fn disconnected_terminals_are_rejected() {
    let g = WeightedGraph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
    let inst = MlgsInstance::new(g, vec![vec![0, 1, 2]], 2.0).unwrap();
    assert!(bottom_up(&inst, SubsetSolver::Heuristic).is_err());
    assert!(top_down(&inst, SubsetSolver::Heuristic).is_err());
    assert!(solve_exact(&inst).is_err());
}

#[test]
fn cycle_fixture_costs() {
    let inst = fixtures::cycle_instance(6, 2, 0.01);
    let bu = cost(&inst, &bottom_up(&inst, SubsetSolver::exact()).unwrap());
    let opt = solve_exact(&inst).unwrap().objective;
    assert!((bu - 12.0).abs() < 1e-9);
    assert!((opt - 7.02).abs() < 1e-9);
}

#[test]
fn ladder_fixture_costs() {
    let eps = 0.01;
    for l in 2..=4usize {
        let inst = fixtures::ladder_instance(l, eps);
        let lf = l as f64;
        let td = cost(&inst, &top_down(&inst, SubsetSolver::exact()).unwrap());
        let opt = solve_exact(&inst).unwrap().objective;
        let triangular = lf * (lf + 1.0) / 2.0;
        assert!(td >= triangular && td <= triangular * (1.0 + 2.0 * lf * eps), "l={l} td={td}");
        assert!(opt >= lf && opt <= lf * (1.0 + 2.0 * lf * eps), "l={l} opt={opt}");
    }
}
