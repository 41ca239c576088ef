//! Exhaustive enumeration of grade vectors, for cross-checking the exact
//! solver on tiny instances.

use crate::error::{Error, Result};
use crate::mlgs::{FeasibilityChecker, GradedSubgraph, MlgsInstance};

/// Largest number of grade vectors the oracle will enumerate.
pub const ORACLE_CAP: u64 = 1 << 24;

/// Minimum-cost feasible grading over all `(levels + 1)^|E|` assignments.
///
/// Ties go to the lexicographically smallest grade vector (edge 0 first).
pub fn brute_force_oracle(inst: &MlgsInstance) -> Result<(GradedSubgraph, f64)> {
    let g = inst.graph();
    let m = g.edge_count();
    let base = inst.levels() as u32 + 1;
    let assignments = (base as f64).powi(m as i32);
    if assignments > ORACLE_CAP as f64 {
        return Err(Error::OracleCap {
            assignments,
            cap: ORACLE_CAP,
        });
    }
    let checker = FeasibilityChecker::new(g, inst.terminal_levels(), inst.stretch());
    if !checker.feasible(&vec![base - 1; m]) {
        return Err(Error::Infeasible("terminals cannot be connected".into()));
    }
    let weights: Vec<f64> = g.edges().iter().map(|e| e.weight).collect();
    let cost_of = |grades: &[u32]| -> f64 {
        grades
            .iter()
            .zip(&weights)
            .map(|(&y, &c)| c * y as f64)
            .sum()
    };

    let mut grades = vec![0u32; m];
    let mut best: Option<(Vec<u32>, f64)> = None;
    loop {
        let cost = cost_of(&grades);
        // strict improvement keeps the first (smallest) vector among ties
        let better = best.as_ref().is_none_or(|(_, b)| cost < *b);
        if better && checker.feasible(&grades) {
            best = Some((grades.clone(), cost));
        }
        // odometer step, last edge least significant
        let mut pos = m;
        loop {
            if pos == 0 {
                let (grades, cost) = best.expect("top grading is feasible");
                return Ok((GradedSubgraph::new(grades), cost));
            }
            pos -= 1;
            if grades[pos] + 1 < base {
                grades[pos] += 1;
                break;
            }
            grades[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    #[test]
    fn single_edge() {
        let g = WeightedGraph::new(2, [(0, 1, 3.0)]).unwrap();
        let inst = MlgsInstance::new(g, vec![vec![0, 1]], 1.0).unwrap();
        let (sol, cost) = brute_force_oracle(&inst).unwrap();
        assert_eq!(sol.grades(), &[1]);
        assert_eq!(cost, 3.0);
    }

    #[test]
    fn infeasible() {
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let inst = MlgsInstance::new(g, vec![vec![0, 2]], 1.0).unwrap();
        assert!(matches!(brute_force_oracle(&inst), Err(Error::Infeasible(_))));
    }

    #[test]
    fn ties_pick_smallest_vector() {
        // square with unit weights: four optimal paths of two edges between 0 and 2
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)])
            .unwrap();
        let inst = MlgsInstance::new(g, vec![vec![0, 2]], 1.0).unwrap();
        let (sol, cost) = brute_force_oracle(&inst).unwrap();
        assert_eq!(cost, 2.0);
        // edges sorted (0,1),(0,3),(1,2),(2,3); the smallest optimal vector uses 0-3-2
        assert_eq!(sol.grades(), &[0, 1, 0, 1]);
    }

    #[test]
    fn refuses_large_instances() {
        let mut edges = Vec::new();
        for a in 0..8 {
            for b in a + 1..8 {
                edges.push((a, b, 1.0));
            }
        }
        let g = WeightedGraph::new(8, edges).unwrap();
        let inst = MlgsInstance::new(g, vec![vec![0, 1]], 1.0).unwrap();
        assert!(matches!(brute_force_oracle(&inst), Err(Error::OracleCap { .. })));
    }
}
