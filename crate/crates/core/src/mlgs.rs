//! The multi-level problem: nested terminal levels, graded solutions, cost,
//! feasibility, and the bottom-up / top-down / combined algorithms.
//!
//! A solution assigns every edge a grade `y_e` in `0..=levels`; the level-`i`
//! subgraph is `{e : y_e >= i}`, so the nested sequence of spanners is
//! implicit in the grades and the cost is `sum(c_e * y_e)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{approx_le, check_stretch, dijkstra, EdgeSet, WeightedGraph};
use crate::ilp::exact;
use crate::spanner::{path_union_preserver_within, subsetwise_spanner, PairSet};

#[derive(Debug, Clone, PartialEq)]
pub struct MlgsInstance {
    graph: WeightedGraph,
    // terminals[0] is T_1 (the largest set); each list sorted, deduplicated
    terminals: Vec<Vec<usize>>,
    stretch: f64,
}

impl MlgsInstance {
    /// `terminals[i]` holds the terminals of level `i + 1`; the sets must be
    /// nested (`T_{i+1}` within `T_i`) and the top level needs two vertices.
    pub fn new(graph: WeightedGraph, terminals: Vec<Vec<usize>>, stretch: f64) -> Result<Self> {
        check_stretch(stretch)?;
        if terminals.is_empty() {
            return Err(Error::InvalidArgument("at least one level is required".into()));
        }
        let terminals: Vec<Vec<usize>> = terminals
            .into_iter()
            .map(|mut level| {
                level.sort_unstable();
                level.dedup();
                level
            })
            .collect();
        for level in &terminals {
            for &v in level {
                graph.check_vertex(v)?;
            }
        }
        for (i, pair) in terminals.windows(2).enumerate() {
            if let Some(v) = pair[1].iter().find(|v| pair[0].binary_search(v).is_err()) {
                return Err(Error::InvalidArgument(format!(
                    "terminal sets not nested: vertex {v} is on level {} but not on level {}",
                    i + 2,
                    i + 1
                )));
            }
        }
        if terminals.last().map_or(0, Vec::len) < 2 {
            return Err(Error::Degenerate(
                "the top level needs at least two terminals".into(),
            ));
        }
        Ok(Self {
            graph,
            terminals,
            stretch,
        })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn levels(&self) -> usize {
        self.terminals.len()
    }

    /// Terminals of `level` (1-based).
    pub fn terminals(&self, level: usize) -> &[usize] {
        &self.terminals[level - 1]
    }

    pub fn terminal_levels(&self) -> &[Vec<usize>] {
        &self.terminals
    }

    pub fn stretch(&self) -> f64 {
        self.stretch
    }

    /// Required grade of service `R(v)`: the highest level containing `v`.
    pub fn required_grade(&self, v: usize) -> usize {
        self.terminals
            .iter()
            .rposition(|level| level.binary_search(&v).is_ok())
            .map_or(0, |i| i + 1)
    }

    /// Fails with [`Error::Infeasible`] if two level-1 terminals are disconnected.
    pub fn check_connected(&self) -> Result<()> {
        let t1 = &self.terminals[0];
        let dist = dijkstra(&self.graph, t1[0], None, None);
        match t1.iter().find(|&&v| dist[v].is_infinite()) {
            Some(&v) => Err(Error::Infeasible(format!(
                "terminals {} and {v} are disconnected",
                t1[0]
            ))),
            None => Ok(()),
        }
    }
}

/// Per-edge grades `y_e`, indexed by edge id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedSubgraph {
    grades: Vec<u32>,
}

impl GradedSubgraph {
    pub fn new(grades: Vec<u32>) -> Self {
        Self { grades }
    }

    pub fn empty(edge_count: usize) -> Self {
        Self::new(vec![0; edge_count])
    }

    pub fn uniform(edge_count: usize, grade: u32) -> Self {
        Self::new(vec![grade; edge_count])
    }

    /// Edges of `set` at `grade`, everything else absent.
    pub fn from_edge_set(edge_count: usize, set: &EdgeSet, grade: u32) -> Self {
        let mut grades = vec![0; edge_count];
        for id in set.iter() {
            grades[id] = grade;
        }
        Self::new(grades)
    }

    /// Builds grades from level edge sets `E_1, ..., E_l`, which must be nested.
    pub fn from_levels(edge_count: usize, levels: &[EdgeSet]) -> Result<Self> {
        for (i, pair) in levels.windows(2).enumerate() {
            if !pair[1].is_subset(&pair[0]) {
                return Err(Error::InvalidArgument(format!(
                    "level {} edges are not contained in level {}",
                    i + 2,
                    i + 1
                )));
            }
        }
        let mut grades = vec![0u32; edge_count];
        for (i, level) in levels.iter().enumerate() {
            level.iter().try_for_each(|id| {
                if id >= edge_count {
                    return Err(Error::UnknownEdgeId(id));
                }
                grades[id] = i as u32 + 1;
                Ok(())
            })?;
        }
        Ok(Self::new(grades))
    }

    pub fn grades(&self) -> &[u32] {
        &self.grades
    }

    pub fn grade(&self, id: usize) -> u32 {
        self.grades.get(id).copied().unwrap_or(0)
    }

    pub fn set_grade(&mut self, id: usize, grade: u32) {
        self.grades[id] = grade;
    }

    pub fn edge_count(&self) -> usize {
        self.grades.len()
    }

    pub fn max_grade(&self) -> u32 {
        self.grades.iter().copied().max().unwrap_or(0)
    }

    /// `E_i = {e : y_e >= level}`.
    pub fn level_edges(&self, level: usize) -> EdgeSet {
        EdgeSet::from_mask(&self.level_mask(level))
    }

    pub fn level_mask(&self, level: usize) -> Vec<bool> {
        self.grades.iter().map(|&y| y as usize >= level).collect()
    }

    pub fn to_levels(&self, levels: usize) -> Vec<EdgeSet> {
        (1..=levels).map(|i| self.level_edges(i)).collect()
    }

    /// Checks that the grades fit `inst`: one grade per edge, none above the level count.
    pub fn check(&self, inst: &MlgsInstance) -> Result<()> {
        if self.grades.len() != inst.graph().edge_count() {
            return Err(Error::InvalidArgument(format!(
                "solution grades {} edges, instance has {}",
                self.grades.len(),
                inst.graph().edge_count()
            )));
        }
        if self.max_grade() as usize > inst.levels() {
            return Err(Error::InvalidArgument(format!(
                "grade {} exceeds the {} levels of the instance",
                self.max_grade(),
                inst.levels()
            )));
        }
        Ok(())
    }
}

/// `sum(c_e * y_e)`.
pub fn solution_cost(inst: &MlgsInstance, sol: &GradedSubgraph) -> Result<f64> {
    sol.check(inst)?;
    Ok(inst
        .graph()
        .edges()
        .iter()
        .zip(sol.grades())
        .map(|(e, &y)| e.weight * y as f64)
        .sum())
}

/// Cost of the edges whose grade is exactly `i`, for `i = 1..=levels`
/// (index 0 is grade 1).
pub fn level_costs(inst: &MlgsInstance, sol: &GradedSubgraph) -> Result<Vec<f64>> {
    sol.check(inst)?;
    let mut out = vec![0.0; inst.levels()];
    for (e, &y) in inst.graph().edges().iter().zip(sol.grades()) {
        if y > 0 {
            out[y as usize - 1] += e.weight;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelViolation {
    pub level: usize,
    pub u: usize,
    pub v: usize,
    pub subgraph_distance: f64,
    pub bound: f64,
}

impl fmt::Display for LevelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "level {}: d({}, {}) = {} exceeds {}",
            self.level, self.u, self.v, self.subgraph_distance, self.bound
        )
    }
}

/// Every `(level, u, v)` whose grade-`>= level` subgraph misses the stretch
/// bound. Empty iff `sol` is a feasible multi-level spanner.
pub fn validate_mlgs(inst: &MlgsInstance, sol: &GradedSubgraph) -> Vec<LevelViolation> {
    let g = inst.graph();
    let t = inst.stretch();
    let mut out = Vec::new();
    for level in 1..=inst.levels() {
        let mask: Vec<bool> = (0..g.edge_count())
            .map(|id| sol.grade(id) as usize >= level)
            .collect();
        let terms = inst.terminals(level);
        for (k, &u) in terms.iter().enumerate() {
            let in_g = dijkstra(g, u, None, None);
            let in_h = dijkstra(g, u, Some(&mask), None);
            for &v in &terms[k + 1..] {
                let bound = t * in_g[v];
                if in_g[v].is_infinite() || !approx_le(in_h[v], bound) {
                    out.push(LevelViolation {
                        level,
                        u,
                        v,
                        subgraph_distance: in_h[v],
                        bound,
                    });
                }
            }
        }
    }
    out
}

/// A source terminal with the budget to each later terminal of its level.
type SourceBudgets = (usize, Vec<(usize, f64)>);

/// Fast yes/no feasibility for repeated checks on one instance.
pub(crate) struct FeasibilityChecker<'a> {
    graph: &'a WeightedGraph,
    levels: Vec<Vec<SourceBudgets>>,
}

impl<'a> FeasibilityChecker<'a> {
    pub(crate) fn new(graph: &'a WeightedGraph, terminals: &[Vec<usize>], t: f64) -> Self {
        let mut rows = std::collections::HashMap::new();
        let levels = terminals
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .enumerate()
                    .take(terms.len().saturating_sub(1))
                    .map(|(k, &u)| {
                        let row = rows
                            .entry(u)
                            .or_insert_with(|| dijkstra(graph, u, None, None));
                        let targets = terms[k + 1..].iter().map(|&v| (v, t * row[v])).collect();
                        (u, targets)
                    })
                    .collect()
            })
            .collect();
        Self { graph, levels }
    }

    pub(crate) fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Is level `level` (1-based) satisfied by the edges in `mask`?
    pub(crate) fn level_feasible(&self, level: usize, mask: &[bool]) -> bool {
        self.levels[level - 1].iter().all(|(u, targets)| {
            let d = dijkstra(self.graph, *u, Some(mask), None);
            targets
                .iter()
                .all(|&(v, budget)| budget.is_finite() && approx_le(d[v], budget))
        })
    }

    pub(crate) fn feasible(&self, grades: &[u32]) -> bool {
        let mut mask = vec![false; grades.len()];
        (1..=self.levels.len()).all(|level| {
            for (m, &y) in mask.iter_mut().zip(grades) {
                *m = y as usize >= level;
            }
            self.level_feasible(level, &mask)
        })
    }
}

/// Default branch-and-bound node budget for exact solves.
pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;

/// How single-level `(S x S)`-spanners are computed inside the algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetSolver {
    /// The greedy-on-metric-closure construction.
    Heuristic,
    /// Proven minimum-cost subsetwise spanner (oracle mode).
    Exact { node_limit: u64 },
}

impl SubsetSolver {
    pub fn exact() -> Self {
        SubsetSolver::Exact {
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SubsetSolver::Heuristic => "heuristic",
            SubsetSolver::Exact { .. } => "exact",
        }
    }

    pub fn solve(&self, g: &WeightedGraph, terminals: &[usize], t: f64) -> Result<EdgeSet> {
        match *self {
            SubsetSolver::Heuristic => subsetwise_spanner(g, terminals, t),
            SubsetSolver::Exact { node_limit } => {
                exact::min_subsetwise_spanner(g, terminals, t, node_limit)
            }
        }
    }
}

impl fmt::Display for SubsetSolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Solve level 1, then prune each higher level to a shortest-path-union
/// preserver of the level below it.
pub fn bottom_up(inst: &MlgsInstance, solver: SubsetSolver) -> Result<GradedSubgraph> {
    inst.check_connected()?;
    let g = inst.graph();
    let m = g.edge_count();
    let mut levels = vec![solver.solve(g, inst.terminals(1), inst.stretch())?];
    for level in 2..=inst.levels() {
        let below = levels[level - 2].mask(m);
        let pairs = PairSet::all_pairs(inst.terminals(level));
        levels.push(path_union_preserver_within(g, &below, &pairs)?);
    }
    GradedSubgraph::from_levels(m, &levels)
}

/// Solve the top level, then each lower level independently, unioning in
/// everything from the levels above.
pub fn top_down(inst: &MlgsInstance, solver: SubsetSolver) -> Result<GradedSubgraph> {
    inst.check_connected()?;
    let g = inst.graph();
    let l = inst.levels();
    let mut levels = vec![EdgeSet::new(); l];
    for level in (1..=l).rev() {
        let mut edges = solver.solve(g, inst.terminals(level), inst.stretch())?;
        if level < l {
            edges.union_with(&levels[level]);
        }
        levels[level - 1] = edges;
    }
    GradedSubgraph::from_levels(g.edge_count(), &levels)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Choice {
    BottomUp,
    TopDown,
}

impl Choice {
    pub fn name(&self) -> &'static str {
        match self {
            Choice::BottomUp => "BU",
            Choice::TopDown => "TD",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CombinedResult {
    pub bottom_up: GradedSubgraph,
    pub top_down: GradedSubgraph,
    pub bottom_up_cost: f64,
    pub top_down_cost: f64,
    pub chosen: Choice,
}

impl CombinedResult {
    pub fn solution(&self) -> &GradedSubgraph {
        match self.chosen {
            Choice::BottomUp => &self.bottom_up,
            Choice::TopDown => &self.top_down,
        }
    }

    pub fn cost(&self) -> f64 {
        self.bottom_up_cost.min(self.top_down_cost)
    }
}

/// Runs both algorithms and keeps the cheaper; equal costs pick top-down.
pub fn combined(inst: &MlgsInstance, solver: SubsetSolver) -> Result<CombinedResult> {
    let (bu, td) = rayon::join(|| bottom_up(inst, solver), || top_down(inst, solver));
    let (bu, td) = (bu?, td?);
    let bottom_up_cost = solution_cost(inst, &bu)?;
    let top_down_cost = solution_cost(inst, &td)?;
    let chosen = if bottom_up_cost < top_down_cost && !approx_le(top_down_cost, bottom_up_cost) {
        Choice::BottomUp
    } else {
        Choice::TopDown
    };
    Ok(CombinedResult {
        bottom_up: bu,
        top_down: td,
        bottom_up_cost,
        top_down_cost,
        chosen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_instance(levels: Vec<Vec<usize>>, t: f64) -> MlgsInstance {
        let g = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]).unwrap();
        MlgsInstance::new(g, levels, t).unwrap()
    }

    /// Grade-2 terminals 0, 1, 2 joined through the
    /// Steiner vertex 4, and terminal 3 hanging off 1 through vertex 5.
    fn example() -> (MlgsInstance, GradedSubgraph) {
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
        .unwrap();
        let grades = g
            .edges()
            .iter()
            .map(|e| match (e.u, e.v) {
                (0, 4) | (1, 4) | (2, 4) => 2,
                (1, 5) | (3, 5) => 1,
                _ => 0,
            })
            .collect();
        let inst = MlgsInstance::new(g, vec![vec![0, 1, 2, 3], vec![0, 1, 2]], 3.0).unwrap();
        (inst, GradedSubgraph::new(grades))
    }

    #[test]
    fn instance_invariants() {
        let g = WeightedGraph::new(3, [(0, 1, 1.0)]).unwrap();
        let err = MlgsInstance::new(g.clone(), vec![vec![0, 1], vec![0, 2]], 2.0).unwrap_err();
        assert!(err.to_string().contains("terminal sets not nested"));
        assert!(matches!(
            MlgsInstance::new(g.clone(), vec![vec![0, 1], vec![1]], 2.0),
            Err(Error::Degenerate(_))
        ));
        assert!(MlgsInstance::new(g.clone(), vec![vec![0, 1]], 0.5).is_err());
        assert!(MlgsInstance::new(g, vec![vec![0, 7]], 1.0).is_err());

        let inst = triangle_instance(vec![vec![0, 1, 2], vec![0, 2]], 2.0);
        assert_eq!(inst.required_grade(0), 2);
        assert_eq!(inst.required_grade(1), 1);
    }

    #[test]
    fn cost_examples() {
        let (inst, sol) = example();
        assert_eq!(solution_cost(&inst, &sol).unwrap(), 25.0);
        assert_eq!(level_costs(&inst, &sol).unwrap(), vec![3.0, 11.0]);

        let m = inst.graph().edge_count();
        assert_eq!(solution_cost(&inst, &GradedSubgraph::empty(m)).unwrap(), 0.0);
        assert!(solution_cost(&inst, &GradedSubgraph::empty(m + 1)).is_err());
        assert!(solution_cost(&inst, &GradedSubgraph::uniform(m, 3)).is_err());

        let single = triangle_instance(vec![vec![0, 2]], 1.0);
        let sol = GradedSubgraph::new(vec![1, 0, 1]);
        assert_eq!(solution_cost(&single, &sol).unwrap(), 2.0);
    }

    #[test]
    fn validate_examples() {
        let (inst, sol) = example();
        assert!(validate_mlgs(&inst, &sol).is_empty());

        let m = inst.graph().edge_count();
        assert!(validate_mlgs(&inst, &GradedSubgraph::uniform(m, 2)).is_empty());

        let empty = validate_mlgs(&inst, &GradedSubgraph::empty(m));
        for level in 1..=2 {
            assert!(empty.iter().any(|v| v.level == level));
        }

        // dropping the light edges breaks only level 1
        let mut broken = sol.clone();
        broken.set_grade(inst.graph().edge_id(3, 5).unwrap(), 0);
        let v = validate_mlgs(&inst, &broken);
        assert!(!v.is_empty());
        assert!(v.iter().all(|x| x.level == 1 && (x.u == 3 || x.v == 3)));
    }

    #[test]
    fn levels_round_trip() {
        let sol = GradedSubgraph::new(vec![2, 0, 1, 3, 1]);
        let levels = sol.to_levels(3);
        assert_eq!(levels[0].len(), 4);
        assert_eq!(levels[2].len(), 1);
        assert_eq!(GradedSubgraph::from_levels(5, &levels).unwrap(), sol);

        let not_nested = vec![[0].into_iter().collect(), [1].into_iter().collect()];
        assert!(GradedSubgraph::from_levels(5, &not_nested).is_err());
    }

    #[test]
    fn single_level_algorithms_agree() {
        let inst = triangle_instance(vec![vec![0, 1, 2]], 2.0);
        for solver in [SubsetSolver::Heuristic, SubsetSolver::exact()] {
            let bu = bottom_up(&inst, solver).unwrap();
            let td = top_down(&inst, solver).unwrap();
            assert_eq!(bu, td);
            assert_eq!(bu.grades(), &[1, 0, 1]);
            let c = combined(&inst, solver).unwrap();
            assert_eq!(c.chosen, Choice::TopDown);
        }
    }

    #[test]
    fn identical_levels() {
        let inst = triangle_instance(vec![vec![0, 2], vec![0, 2]], 1.0);
        let bu = bottom_up(&inst, SubsetSolver::exact()).unwrap();
        assert_eq!(bu.grades(), &[2, 0, 2]);
        let td = top_down(&inst, SubsetSolver::exact()).unwrap();
        assert_eq!(solution_cost(&inst, &td).unwrap(), 2.0 * 2.0);
    }

    #[test]
    fn disconnected_terminals_fail_early() {
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let inst = MlgsInstance::new(g, vec![vec![0, 1, 2]], 2.0).unwrap();
        assert!(matches!(
            bottom_up(&inst, SubsetSolver::Heuristic),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            top_down(&inst, SubsetSolver::Heuristic),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn example_algorithms_are_feasible() {
        let (inst, _) = example();
        for solver in [SubsetSolver::Heuristic, SubsetSolver::exact()] {
            let c = combined(&inst, solver).unwrap();
            assert!(validate_mlgs(&inst, &c.bottom_up).is_empty());
            assert!(validate_mlgs(&inst, &c.top_down).is_empty());
        }
    }
}
