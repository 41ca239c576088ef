//! Exact multi-level solver: depth-first branch-and-bound over per-edge
//! grades.
//!
//! A node fixes a range `lo_e..=hi_e` for every grade. Its lower bound is
//! the cost of the grades already forced plus, for every level, a dual
//! ascent bound on the cheapest set of extra edges that gives each terminal
//! pair of that level a path within its stretch budget:
//!
//! - A pair `(s, u)` is satisfied when the edges of reduced cost zero
//!   contain an `s`-`u` path within budget.
//! - Otherwise, let `S` hold the vertices reached from `s` over those edges.
//!   The remaining edges `(a, b)` with `a` in `S` and
//!   `d_S(s, a) + c_ab + d(b, u) <= budget` meet every admissible path of
//!   the pair. Their reduced costs drop by their minimum and the bound rises
//!   by the same amount.
//!
//! The reduced costs left over give two more tools. An edge whose reduced
//! costs would lift the bound past the incumbent is excluded from those
//! levels. The zero-reduced-cost edges of every level form a feasible
//! grading, which is pruned greedily into a new incumbent.
//!
//! Branching picks a zero-reduced-cost edge that is not yet forced, on the
//! highest such level. The branch that forces it comes first, then the one
//! that forbids it from that level up.
//!
//! Before searching, each edge gets a grade cap: the largest required grade
//! of a terminal pair that could route through it within its budget. The cap
//! is 0 when no pair can, or when the edge is longer than the distance
//! between its endpoints.

use crate::error::{Error, Result};
use crate::graph::{
    all_pairs_distances, approx_le, check_stretch, dijkstra, EdgeSet, WeightedGraph,
};
use crate::mlgs::{
    combined, solution_cost, validate_mlgs, FeasibilityChecker, GradedSubgraph, MlgsInstance,
    SubsetSolver, DEFAULT_NODE_LIMIT,
};
use crate::spanner::subsetwise_spanner;

#[derive(Debug, Clone)]
pub struct ExactSolution {
    pub solution: GradedSubgraph,
    pub objective: f64,
    /// Branch-and-bound nodes visited.
    pub nodes: u64,
}

/// Proven optimum of `inst` with the default node limit.
pub fn solve_exact(inst: &MlgsInstance) -> Result<ExactSolution> {
    solve_exact_with_limit(inst, DEFAULT_NODE_LIMIT)
}

/// Proven optimum of `inst`, or [`Error::NodeLimit`] once `node_limit` nodes
/// have been expanded. The incumbent starts from the combined heuristic.
pub fn solve_exact_with_limit(inst: &MlgsInstance, node_limit: u64) -> Result<ExactSolution> {
    inst.check_connected()?;
    let start = combined(inst, SubsetSolver::Heuristic)?;
    let (grades, nodes) = branch_and_bound(
        inst.graph(),
        inst.terminal_levels(),
        inst.stretch(),
        Some(start.solution().grades().to_vec()),
        node_limit,
    )?;
    let solution = GradedSubgraph::new(grades);
    if let Some(v) = validate_mlgs(inst, &solution).first() {
        // the search only accepts feasible incumbents
        return Err(Error::Infeasible(format!("exact search produced an invalid solution: {v}")));
    }
    let objective = solution_cost(inst, &solution)?;
    Ok(ExactSolution {
        solution,
        objective,
        nodes,
    })
}

/// Minimum-cost `(T x T)`-spanner with stretch `t`.
pub fn min_subsetwise_spanner(
    g: &WeightedGraph,
    terminals: &[usize],
    t: f64,
    node_limit: u64,
) -> Result<EdgeSet> {
    check_stretch(t)?;
    let mut terms = terminals.to_vec();
    terms.sort_unstable();
    terms.dedup();
    for &v in &terms {
        g.check_vertex(v)?;
    }
    if terms.len() < 2 {
        return Ok(EdgeSet::new());
    }
    let start = subsetwise_spanner(g, &terms, t)?;
    let start = GradedSubgraph::from_edge_set(g.edge_count(), &start, 1);
    let (grades, _) = branch_and_bound(
        g,
        std::slice::from_ref(&terms),
        t,
        Some(start.grades().to_vec()),
        node_limit,
    )?;
    Ok(GradedSubgraph::new(grades).level_edges(1))
}

/// Highest grade at which each edge can matter.
pub(crate) fn grade_caps(g: &WeightedGraph, terminals: &[Vec<usize>], t: f64) -> Vec<u32> {
    let dist = all_pairs_distances(g);
    let required = |v: usize| {
        terminals
            .iter()
            .rposition(|level| level.contains(&v))
            .map_or(0, |i| i as u32 + 1)
    };
    let top = &terminals[0];
    g.edges()
        .iter()
        .map(|e| {
            let direct = dist.get(e.u, e.v);
            if direct < e.weight && !approx_le(e.weight, direct) {
                return 0;
            }
            let mut cap = 0;
            for (k, &s) in top.iter().enumerate() {
                for &u in &top[k + 1..] {
                    let grade = required(s).min(required(u));
                    if grade <= cap {
                        continue;
                    }
                    let budget = t * dist.get(s, u);
                    let fits = [(e.u, e.v), (e.v, e.u)].iter().any(|&(a, b)| {
                        approx_le(dist.get(s, a) + e.weight + dist.get(b, u), budget)
                    });
                    if fits {
                        cap = grade;
                    }
                }
            }
            cap
        })
        .collect()
}

fn improves(value: f64, best: f64) -> bool {
    value < best && !approx_le(best, value)
}

/// Dual ascent result for one level.
struct LevelBound {
    value: f64,
    // reduced cost per edge; infinite for edges unavailable on the level
    reduced: Vec<f64>,
}

struct Search<'a> {
    graph: &'a WeightedGraph,
    checker: FeasibilityChecker<'a>,
    levels: usize,
    // per level: terminals, and pairs (s, u, budget) with the closest first
    terminals: Vec<Vec<usize>>,
    pairs: Vec<Vec<(usize, usize, f64)>>,
    best: Option<(Vec<u32>, f64)>,
    nodes: u64,
    node_limit: u64,
}

impl Search<'_> {
    fn best_cost(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |(_, c)| *c)
    }

    fn committed(&self, lo: &[u32]) -> f64 {
        lo.iter()
            .zip(self.graph.edges())
            .map(|(&y, e)| e.weight * y as f64)
            .sum()
    }

    /// `None` if some pair of the level has no admissible path at all.
    fn dual_ascent(&self, level: usize, lo: &[u32], hi: &[u32]) -> Option<LevelBound> {
        let g = self.graph;
        let m = g.edge_count();
        let avail: Vec<bool> = hi.iter().map(|&h| h as usize >= level).collect();
        let mut reduced: Vec<f64> = (0..m)
            .map(|id| {
                if lo[id] as usize >= level {
                    0.0
                } else if avail[id] {
                    g.edge(id).weight
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        let terms = &self.terminals[level - 1];
        let mut to_target: Vec<Option<Vec<f64>>> = vec![None; g.vertex_count()];
        for &u in terms {
            to_target[u] = Some(dijkstra(g, u, Some(&avail), None));
        }
        let mut value = 0.0;
        let mut tight = vec![false; m];
        for &(s, u, budget) in &self.pairs[level - 1] {
            let du = to_target[u].as_ref().expect("terminal distances");
            if !approx_le(du[s], budget) {
                return None;
            }
            loop {
                for (id, t) in tight.iter_mut().enumerate() {
                    *t = reduced[id] == 0.0;
                }
                let ds = dijkstra(g, s, Some(&tight), Some(u));
                if approx_le(ds[u], budget) {
                    break;
                }
                let mut delta = f64::INFINITY;
                let mut cut = Vec::new();
                for (id, e) in g.edges().iter().enumerate() {
                    if tight[id] || !avail[id] {
                        continue;
                    }
                    let crosses = [(e.u, e.v), (e.v, e.u)]
                        .iter()
                        .any(|&(a, b)| approx_le(ds[a] + e.weight + du[b], budget));
                    if crosses {
                        delta = delta.min(reduced[id]);
                        cut.push(id);
                    }
                }
                debug_assert!(!cut.is_empty());
                value += delta;
                for id in cut {
                    let r = reduced[id] - delta;
                    reduced[id] = if r <= 1e-12 * g.edge(id).weight { 0.0 } else { r };
                }
            }
        }
        Some(LevelBound { value, reduced })
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::NodeLimit(self.node_limit));
        }
        Ok(())
    }

    fn offer(&mut self, grades: Vec<u32>) {
        let cost = self.committed(&grades);
        if improves(cost, self.best_cost()) && self.checker.feasible(&grades) {
            self.best = Some((grades, cost));
        }
    }

    /// Lowers grades greedily, most expensive edges first, keeping feasibility.
    fn prune(&self, mut grades: Vec<u32>) -> Vec<u32> {
        let mut order: Vec<usize> = (0..grades.len()).filter(|&id| grades[id] > 0).collect();
        order.sort_by(|&a, &b| {
            let (ea, eb) = (self.graph.edge(a), self.graph.edge(b));
            eb.weight.total_cmp(&ea.weight).then(a.cmp(&b))
        });
        let mut mask = vec![false; grades.len()];
        for id in order {
            let old = grades[id];
            for new in 0..old {
                grades[id] = new;
                let ok = (new as usize + 1..=old as usize).all(|level| {
                    for (m, &y) in mask.iter_mut().zip(&grades) {
                        *m = y as usize >= level;
                    }
                    self.checker.level_feasible(level, &mask)
                });
                if ok {
                    break;
                }
                grades[id] = old;
            }
        }
        grades
    }

    fn explore(&mut self, lo: Vec<u32>, mut hi: Vec<u32>, depth: usize) -> Result<()> {
        self.tick()?;
        let m = lo.len();
        let bounds = loop {
            let mut bounds = Vec::with_capacity(self.levels);
            for level in 1..=self.levels {
                match self.dual_ascent(level, &lo, &hi) {
                    Some(b) => bounds.push(b),
                    None => return Ok(()),
                }
            }
            let lower = self.committed(&lo) + bounds.iter().map(|b| b.value).sum::<f64>();
            let best = self.best_cost();
            if !improves(lower, best) {
                return Ok(());
            }
            if bounds.iter().all(|b| b.value == 0.0) {
                // the forced grades already satisfy every level
                self.offer(lo);
                return Ok(());
            }
            // an edge whose reduced costs up to some level reach the gap
            // cannot be graded that high in an improving solution
            let mut changed = false;
            for id in 0..m {
                let mut extra = 0.0;
                for level in lo[id] as usize + 1..=hi[id] as usize {
                    extra += bounds[level - 1].reduced[id];
                    if !improves(lower + extra, best) {
                        hi[id] = level as u32 - 1;
                        changed = true;
                        break;
                    }
                }
            }
            if !changed {
                break bounds;
            }
        };

        if depth == 0 || self.nodes.is_power_of_two() {
            // zero-reduced-cost edges satisfy every level
            let start: Vec<u32> = (0..m)
                .map(|id| {
                    (1..=self.levels)
                        .rev()
                        .find(|&level| bounds[level - 1].reduced[id] == 0.0)
                        .map_or(0, |level| level as u32)
                })
                .collect();
            let pruned = self.prune(start);
            self.offer(pruned);
        }

        let mut branch = None;
        for level in (1..=self.levels).rev() {
            let candidate = (0..m)
                .filter(|&id| {
                    bounds[level - 1].reduced[id] == 0.0 && (lo[id] as usize) < level
                })
                .max_by(|&a, &b| {
                    let (ea, eb) = (self.graph.edge(a), self.graph.edge(b));
                    ea.weight.total_cmp(&eb.weight).then(b.cmp(&a))
                });
            if let Some(id) = candidate {
                branch = Some((id, level as u32));
                break;
            }
        }
        let (id, level) = branch.expect("a positive bound leaves an unforced tight edge");

        let mut forced = lo.clone();
        forced[id] = level;
        self.explore(forced, hi.clone(), depth + 1)?;
        hi[id] = level - 1;
        if lo[id] <= hi[id] {
            self.explore(lo, hi, depth + 1)?;
        }
        Ok(())
    }
}

/// Returns the optimal grades and the number of nodes expanded.
pub(crate) fn branch_and_bound(
    g: &WeightedGraph,
    terminals: &[Vec<usize>],
    t: f64,
    incumbent: Option<Vec<u32>>,
    node_limit: u64,
) -> Result<(Vec<u32>, u64)> {
    let checker = FeasibilityChecker::new(g, terminals, t);
    let levels = checker.level_count();
    if !checker.feasible(&vec![levels as u32; g.edge_count()]) {
        return Err(Error::Infeasible("terminals cannot be connected".into()));
    }
    let dist = all_pairs_distances(g);
    let pairs = terminals
        .iter()
        .map(|terms| {
            let mut p = Vec::new();
            for (k, &s) in terms.iter().enumerate() {
                for &u in &terms[k + 1..] {
                    p.push((s, u, t * dist.get(s, u)));
                }
            }
            // closest pairs first gives the strongest bounds
            p.sort_by(|a, b| {
                dist.get(a.0, a.1)
                    .total_cmp(&dist.get(b.0, b.1))
                    .then((a.0, a.1).cmp(&(b.0, b.1)))
            });
            p
        })
        .collect();
    let mut search = Search {
        graph: g,
        checker,
        levels,
        terminals: terminals.to_vec(),
        pairs,
        best: None,
        nodes: 0,
        node_limit,
    };
    if let Some(grades) = incumbent {
        search.offer(grades);
    }
    let caps = grade_caps(g, terminals, t);
    search.explore(vec![0; g.edge_count()], caps, 0)?;
    let nodes = search.nodes;
    let (grades, _) = search
        .best
        .ok_or_else(|| Error::Infeasible("no feasible grading found".into()))?;
    Ok((grades, nodes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]).unwrap()
    }

    #[test]
    fn triangle_optimum() {
        let inst = MlgsInstance::new(triangle(), vec![vec![0, 2]], 1.0).unwrap();
        let s = solve_exact(&inst).unwrap();
        assert_eq!(s.objective, 2.0);
        assert_eq!(s.solution.grades(), &[1, 0, 1]);
    }

    #[test]
    fn forced_edge_at_top_grade() {
        let g = WeightedGraph::new(2, [(0, 1, 4.5)]).unwrap();
        let inst = MlgsInstance::new(g, vec![vec![0, 1], vec![0, 1]], 3.0).unwrap();
        assert_eq!(solve_exact(&inst).unwrap().objective, 9.0);
    }

    #[test]
    fn infeasible_instance() {
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let inst = MlgsInstance::new(g, vec![vec![0, 3]], 2.0).unwrap();
        assert!(matches!(solve_exact(&inst), Err(Error::Infeasible(_))));
    }

    #[test]
    fn node_limit_reports_unsolved() {
        let mut edges = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                edges.push((a, b, 1.0 + ((a * 7 + b * 3) % 5) as f64));
            }
        }
        let g = WeightedGraph::new(6, edges).unwrap();
        let inst = MlgsInstance::new(g, vec![vec![0, 1, 2, 3, 4, 5], vec![0, 3]], 3.0).unwrap();
        assert!(matches!(
            solve_exact_with_limit(&inst, 0),
            Err(Error::NodeLimit(0))
        ));
    }

    #[test]
    fn caps_drop_dominated_edges() {
        let caps = grade_caps(&triangle(), &[vec![0, 1, 2], vec![0, 2]], 5.0);
        assert_eq!(caps, vec![2, 0, 2]);
    }

    #[test]
    fn dual_ascent_bound_on_a_square() {
        // unit square, pair (0, 2) within budget 2: any two-edge path works,
        // so the bound is the cost of one path
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)])
            .unwrap();
        let terminals = vec![vec![0, 2]];
        let search = Search {
            graph: &g,
            checker: FeasibilityChecker::new(&g, &terminals, 1.0),
            levels: 1,
            terminals: terminals.clone(),
            pairs: vec![vec![(0, 2, 2.0)]],
            best: None,
            nodes: 0,
            node_limit: 10,
        };
        let b = search.dual_ascent(1, &[0; 4], &[1; 4]).unwrap();
        assert_eq!(b.value, 2.0);
        assert!(search.dual_ascent(1, &[0; 4], &[0, 1, 1, 0]).is_none());
    }

    #[test]
    fn subsetwise_optimum() {
        let square =
            WeightedGraph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]).unwrap();
        let exact = min_subsetwise_spanner(&square, &[0, 1, 2, 3], 3.0, 1_000).unwrap();
        assert_eq!(exact.len(), 3);
        assert!(min_subsetwise_spanner(&square, &[2], 3.0, 1_000).unwrap().is_empty());
    }
}
