//! Multicommodity-flow formulations.
//!
//! Every undirected edge `{i, j}` becomes two arcs `i -> j` and `j -> i`.
//! For each pair `(s, t)` with `s < t` a binary arc variable selects the arcs
//! of one simple `s`-`t` path whose length stays within the stretch budget;
//! the arcs of that path are then tied to the edge variables.

use crate::error::{Error, Result};
use crate::graph::{check_stretch, dijkstra, WeightedGraph};
use crate::mlgs::MlgsInstance;
use crate::spanner::PairSet;

use super::model::{IlpModel, ModelKind, Sense, VarKind};

/// Pairwise spanner model: minimize `sum c_e x_e` so that every pair of `pairs`
/// keeps a path of length at most `t * d_G(s, t)`.
///
/// Has `|E| + 2 |E| |K|` variables.
pub fn build_pairwise_model(g: &WeightedGraph, pairs: &PairSet, t: f64) -> Result<IlpModel> {
    check_stretch(t)?;
    let mut model = IlpModel::new(ModelKind::Pairwise);
    add_edge_vars(&mut model, g, "x_e", VarKind::Binary);
    for (s, u) in pairs {
        model.pairs.push((s, u));
        model.pair_grades.push(1);
    }
    let budgets = budgets(g, &model.pairs, t)?;
    for (k, budget) in budgets.into_iter().enumerate() {
        add_path_block(&mut model, g, k, budget);
        let (s, u) = model.pairs[k];
        for (e, (i, j)) in g.edges().iter().map(|e| (e.u, e.v)).enumerate() {
            let fwd = model.arc_var(k, i, j).expect("arc declared");
            let bwd = model.arc_var(k, j, i).expect("arc declared");
            let xe = model.edge_vars[e];
            model.add_constraint(
                format!("link_{i}_{j}_{s}_{u}"),
                vec![(fwd, 1.0), (bwd, 1.0), (xe, -1.0)],
                Sense::Le,
                0.0,
            );
        }
    }
    Ok(model)
}

/// Multi-level model: minimize `sum c_e y_e` with integer grades `y_e` in
/// `[0, levels]`. Every pair of level-1 terminals gets a path whose arcs force
/// `y_e >= m_uv`, the smaller required grade of its endpoints.
pub fn build_mlgs_model(inst: &MlgsInstance) -> Result<IlpModel> {
    let g = inst.graph();
    let levels = inst.levels() as u32;
    let mut model = IlpModel::new(ModelKind::Mlgs { levels });
    add_edge_vars(
        &mut model,
        g,
        "y",
        VarKind::Integer {
            lower: 0,
            upper: levels as i64,
        },
    );
    for (s, u) in &PairSet::all_pairs(inst.terminals(1)) {
        model.pairs.push((s, u));
        let grade = inst.required_grade(s).min(inst.required_grade(u));
        model.pair_grades.push(grade as u32);
    }
    let budgets = budgets(g, &model.pairs, inst.stretch())?;
    for (k, budget) in budgets.into_iter().enumerate() {
        add_path_block(&mut model, g, k, budget);
        let (s, u) = model.pairs[k];
        let grade = model.pair_grades[k] as f64;
        for (e, edge) in g.edges().iter().enumerate() {
            let ye = model.edge_vars[e];
            for (a, b) in [(edge.u, edge.v), (edge.v, edge.u)] {
                let arc = model.arc_var(k, a, b).expect("arc declared");
                model.add_constraint(
                    format!("grade_{a}_{b}_{s}_{u}"),
                    vec![(ye, 1.0), (arc, -grade)],
                    Sense::Ge,
                    0.0,
                );
            }
        }
    }
    Ok(model)
}

fn add_edge_vars(model: &mut IlpModel, g: &WeightedGraph, prefix: &str, kind: VarKind) {
    for e in g.edges() {
        let id = model.add_variable(format!("{prefix}_{}_{}", e.u, e.v), kind, false);
        model.edges.push((e.u, e.v));
        model.edge_vars.push(id);
        model.objective.push((id, e.weight));
    }
}

fn budgets(g: &WeightedGraph, pairs: &[(usize, usize)], t: f64) -> Result<Vec<f64>> {
    pairs
        .iter()
        .map(|&(s, u)| {
            g.check_vertex(s)?;
            g.check_vertex(u)?;
            let d = dijkstra(g, s, None, Some(u))[u];
            if d.is_infinite() {
                Err(Error::NoPath { u: s, v: u })
            } else {
                Ok(t * d)
            }
        })
        .collect()
}

/// Arc variables plus the length, flow-conservation and out-degree rows of
/// pair `k`.
fn add_path_block(model: &mut IlpModel, g: &WeightedGraph, k: usize, budget: f64) {
    let (s, u) = model.pairs[k];
    let mut length = Vec::with_capacity(2 * g.edge_count());
    for e in g.edges() {
        let fwd = model.add_arc_variable(k, e.u, e.v);
        let bwd = model.add_arc_variable(k, e.v, e.u);
        length.push((fwd, e.weight));
        length.push((bwd, e.weight));
    }
    model.add_constraint(format!("len_{s}_{u}"), length, Sense::Le, budget);

    for i in 0..g.vertex_count() {
        let mut flow = Vec::new();
        let mut out = Vec::new();
        for &(j, _) in g.neighbors(i) {
            let o = model.arc_var(k, i, j).expect("arc declared");
            let inc = model.arc_var(k, j, i).expect("arc declared");
            flow.push((o, 1.0));
            flow.push((inc, -1.0));
            out.push((o, 1.0));
        }
        let rhs = if i == s {
            1.0
        } else if i == u {
            -1.0
        } else {
            0.0
        };
        // isolated vertices contribute empty rows; the endpoints of a pair
        // are never isolated since the pair is connected
        if flow.is_empty() {
            continue;
        }
        model.add_constraint(format!("flow_{s}_{u}_{i}"), flow, Sense::Eq, rhs);
        model.add_constraint(format!("out_{s}_{u}_{i}"), out, Sense::Le, 1.0);
    }
}
