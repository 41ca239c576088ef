//! Exhaustive optimizer for small [`IlpModel`]s, working on the model's own
//! variables and rows.
//!
//! Depth-first search over the objective variables with bounds propagation
//! on every row. At each node the remaining variables are split into groups
//! that share no row except through objective variables; each group must
//! admit a completion on its own or the node is dropped. Once all objective
//! variables are fixed those per-group completions form a full solution.
//!
//! Exponential; meant for cross-checking on models with a handful of edges.

use std::collections::VecDeque;

use crate::error::{Error, Result};

use super::model::{IlpModel, Sense, VarId};

#[derive(Debug, Clone)]
pub struct ModelOptimum {
    pub objective: f64,
    pub values: Vec<i64>,
    pub nodes: u64,
}

type Domains = Vec<(i64, i64)>;

struct Row {
    terms: Vec<(VarId, f64)>,
    rhs: f64,
}

struct Searcher {
    // every row as `sum a x <= rhs`
    rows: Vec<Row>,
    var_rows: Vec<Vec<usize>>,
    objective: Vec<(VarId, f64)>,
    is_objective: Vec<bool>,
    best: Option<(f64, Vec<i64>)>,
    nodes: u64,
    node_limit: u64,
}

fn tolerance(x: f64) -> f64 {
    1e-9 * x.abs().max(1.0)
}

impl Searcher {
    fn new(model: &IlpModel, node_limit: u64) -> Self {
        let mut rows = Vec::new();
        for c in &model.constraints {
            let negated = || Row {
                terms: c.terms.iter().map(|&(v, a)| (v, -a)).collect(),
                rhs: -c.rhs,
            };
            let plain = || Row {
                terms: c.terms.clone(),
                rhs: c.rhs,
            };
            match c.sense {
                Sense::Le => rows.push(plain()),
                Sense::Ge => rows.push(negated()),
                Sense::Eq => {
                    rows.push(plain());
                    rows.push(negated());
                }
            }
        }
        let n = model.variable_count();
        let mut var_rows = vec![Vec::new(); n];
        for (r, row) in rows.iter().enumerate() {
            for &(v, _) in &row.terms {
                if var_rows[v].last() != Some(&r) {
                    var_rows[v].push(r);
                }
            }
        }
        let mut is_objective = vec![false; n];
        for &(v, _) in &model.objective {
            is_objective[v] = true;
        }
        Self {
            rows,
            var_rows,
            objective: model.objective.clone(),
            is_objective,
            best: None,
            nodes: 0,
            node_limit,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::NodeLimit(self.node_limit));
        }
        Ok(())
    }

    /// Tightens `dom` to bounds consistency, starting from `queue`.
    fn propagate(&self, dom: &mut Domains, mut queue: VecDeque<usize>) -> bool {
        let mut queued = vec![false; self.rows.len()];
        for &r in &queue {
            queued[r] = true;
        }
        while let Some(r) = queue.pop_front() {
            queued[r] = false;
            let row = &self.rows[r];
            let min_act: f64 = row
                .terms
                .iter()
                .map(|&(v, a)| if a > 0.0 { a * dom[v].0 as f64 } else { a * dom[v].1 as f64 })
                .sum();
            let rhs = row.rhs + tolerance(row.rhs);
            if min_act > rhs {
                return false;
            }
            for &(v, a) in &row.terms {
                let (lo, hi) = dom[v];
                let own = if a > 0.0 { a * lo as f64 } else { a * hi as f64 };
                let slack = (rhs - (min_act - own)) / a;
                let (new_lo, new_hi) = if a > 0.0 {
                    (lo, hi.min((slack + 1e-9).floor() as i64))
                } else {
                    (lo.max((slack - 1e-9).ceil() as i64), hi)
                };
                if new_lo > new_hi {
                    return false;
                }
                if (new_lo, new_hi) != (lo, hi) {
                    dom[v] = (new_lo, new_hi);
                    for &r2 in &self.var_rows[v] {
                        if r2 != r && !queued[r2] {
                            queued[r2] = true;
                            queue.push_back(r2);
                        }
                    }
                }
            }
        }
        true
    }

    fn assign(&self, dom: &Domains, var: VarId, value: i64) -> Option<Domains> {
        let mut next = dom.clone();
        next[var] = (value, value);
        self.propagate(&mut next, self.var_rows[var].iter().copied().collect())
            .then_some(next)
    }

    fn objective_bound(&self, dom: &Domains) -> f64 {
        self.objective
            .iter()
            .map(|&(v, c)| if c >= 0.0 { c * dom[v].0 as f64 } else { c * dom[v].1 as f64 })
            .sum()
    }

    /// Unfixed non-objective variables grouped by shared rows.
    fn groups(&self, dom: &Domains) -> Vec<Vec<VarId>> {
        let n = dom.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let free = |v: usize| !self.is_objective[v] && dom[v].0 < dom[v].1;
        for row in &self.rows {
            let mut first = None;
            for &(v, _) in &row.terms {
                if !free(v) {
                    continue;
                }
                match first {
                    None => first = Some(v),
                    Some(f) => {
                        let (a, b) = (find(&mut parent, f), find(&mut parent, v));
                        parent[a] = b;
                    }
                }
            }
        }
        let mut by_root: std::collections::BTreeMap<usize, Vec<VarId>> = Default::default();
        for v in (0..n).filter(|&v| free(v)) {
            let root = find(&mut parent, v);
            by_root.entry(root).or_default().push(v);
        }
        by_root.into_values().collect()
    }

    /// Some completion of `vars` consistent with `dom`, if one exists.
    fn complete(&mut self, dom: Domains, vars: &[VarId]) -> Result<Option<Domains>> {
        let Some(&var) = vars.iter().find(|&&v| dom[v].0 < dom[v].1) else {
            return Ok(Some(dom));
        };
        let (lo, hi) = dom[var];
        for value in lo..=hi {
            self.tick()?;
            if let Some(next) = self.assign(&dom, var, value) {
                if let Some(done) = self.complete(next, vars)? {
                    return Ok(Some(done));
                }
            }
        }
        Ok(None)
    }

    fn improves(&self, value: f64) -> bool {
        self.best
            .as_ref()
            .is_none_or(|(b, _)| value < *b - tolerance(*b))
    }

    fn search(&mut self, dom: Domains) -> Result<()> {
        if !self.improves(self.objective_bound(&dom)) {
            return Ok(());
        }
        let mut solved = dom.clone();
        for group in self.groups(&dom) {
            match self.complete(dom.clone(), &group)? {
                None => return Ok(()),
                Some(done) => {
                    for &v in &group {
                        solved[v] = done[v];
                    }
                }
            }
        }
        let branch = self
            .objective
            .iter()
            .map(|&(v, _)| v)
            .find(|&v| dom[v].0 < dom[v].1);
        let Some(var) = branch else {
            // objective fixed; any variable still free is unconstrained
            let values: Vec<i64> = solved.iter().map(|&(lo, _)| lo).collect();
            self.best = Some((self.objective_bound(&dom), values));
            return Ok(());
        };
        let (lo, hi) = dom[var];
        for value in lo..=hi {
            self.tick()?;
            if let Some(next) = self.assign(&dom, var, value) {
                self.search(next)?;
            }
        }
        Ok(())
    }
}

/// Minimum of `model` over all integer assignments within its bounds.
///
/// Returns [`Error::Infeasible`] when no assignment satisfies every row and
/// [`Error::NodeLimit`] when the search gives up.
pub fn exhaustive_optimum(model: &IlpModel, node_limit: u64) -> Result<ModelOptimum> {
    let mut searcher = Searcher::new(model, node_limit);
    let mut dom: Domains = model.variables.iter().map(|v| v.bounds()).collect();
    if dom.iter().any(|&(lo, hi)| lo > hi)
        || !searcher.propagate(&mut dom, (0..searcher.rows.len()).collect())
    {
        return Err(Error::Infeasible("model has no feasible assignment".into()));
    }
    searcher.search(dom)?;
    let nodes = searcher.nodes;
    match searcher.best {
        Some((objective, values)) => {
            debug_assert!(model.is_satisfied_by(&values));
            Ok(ModelOptimum {
                objective,
                values,
                nodes,
            })
        }
        None => Err(Error::Infeasible("model has no feasible assignment".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use crate::ilp::build::{build_mlgs_model, build_pairwise_model};
    use crate::mlgs::MlgsInstance;
    use crate::spanner::PairSet;

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]).unwrap()
    }

    #[test]
    fn triangle_pairwise_optimum() {
        let pairs: PairSet = [(0, 2)].into_iter().collect();
        let model = build_pairwise_model(&triangle(), &pairs, 1.0).unwrap();
        let opt = exhaustive_optimum(&model, 1_000_000).unwrap();
        assert_eq!(opt.objective, 2.0);
        assert!(model.is_satisfied_by(&opt.values));
        assert_eq!(opt.values[model.edge_var(0, 1).unwrap()], 1);
        assert_eq!(opt.values[model.edge_var(1, 2).unwrap()], 1);
        assert_eq!(opt.values[model.edge_var(0, 2).unwrap()], 0);
    }

    #[test]
    fn empty_pair_set_costs_nothing() {
        let model = build_pairwise_model(&triangle(), &PairSet::new(), 1.0).unwrap();
        assert_eq!(exhaustive_optimum(&model, 1_000).unwrap().objective, 0.0);
    }

    #[test]
    fn forced_grade_two_edge() {
        let g = WeightedGraph::new(2, [(0, 1, 2.5)]).unwrap();
        let inst = MlgsInstance::new(g, vec![vec![0, 1], vec![0, 1]], 4.0).unwrap();
        let model = build_mlgs_model(&inst).unwrap();
        assert_eq!(exhaustive_optimum(&model, 1_000).unwrap().objective, 5.0);
    }

    #[test]
    fn infeasible_bounds() {
        let g = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let pairs: PairSet = [(0, 2)].into_iter().collect();
        let mut model = build_pairwise_model(&g, &pairs, 1.0).unwrap();
        let x = model.edge_var(0, 1).unwrap();
        model.restrict(x, 0, 0);
        assert!(matches!(
            exhaustive_optimum(&model, 1_000),
            Err(Error::Infeasible(_))
        ));
    }
}
