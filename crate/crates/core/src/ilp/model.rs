use std::collections::HashMap;

pub type VarId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VarKind {
    Binary,
    Integer { lower: i64, upper: i64 },
}

impl VarKind {
    pub fn bounds(&self) -> (i64, i64) {
        match *self {
            VarKind::Binary => (0, 1),
            VarKind::Integer { lower, upper } => (lower, upper),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    /// May be relaxed to a continuous `[0, 1]` variable without changing
    /// the optimum (the per-pair arc variables).
    pub relaxable: bool,
    /// Tightened bounds, e.g. from reductions; `None` means the kind's bounds.
    pub fixed: Option<(i64, i64)>,
}

impl Variable {
    pub fn bounds(&self) -> (i64, i64) {
        self.fixed.unwrap_or_else(|| self.kind.bounds())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(&self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Single-level pairwise spanner; edge variables are binary `x_e`.
    Pairwise,
    /// Multi-level spanner; edge variables are integer grades `y_e`.
    Mlgs { levels: u32 },
}

/// A linear integer program with the bookkeeping needed to map its
/// variables back onto graph edges, arcs and pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct IlpModel {
    pub kind: ModelKind,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Minimized.
    pub objective: Vec<(VarId, f64)>,
    /// Pairs `(u, v)` with `u < v`, in model order.
    pub pairs: Vec<(usize, usize)>,
    /// Required grade `m_uv` of each pair (all 1 for pairwise models).
    pub pair_grades: Vec<u32>,
    /// Edge endpoints `(u, v)` with `u < v`, in model order.
    pub edges: Vec<(usize, usize)>,
    pub edge_vars: Vec<VarId>,
    arc_index: HashMap<(usize, usize, usize), VarId>,
}

impl IlpModel {
    pub(crate) fn new(kind: ModelKind) -> Self {
        Self {
            kind,
            variables: Vec::new(),
            constraints: Vec::new(),
            objective: Vec::new(),
            pairs: Vec::new(),
            pair_grades: Vec::new(),
            edges: Vec::new(),
            edge_vars: Vec::new(),
            arc_index: HashMap::new(),
        }
    }

    /// An empty pairwise model: no variables, no constraints.
    pub fn empty() -> Self {
        Self::new(ModelKind::Pairwise)
    }

    pub(crate) fn add_variable(&mut self, name: String, kind: VarKind, relaxable: bool) -> VarId {
        self.variables.push(Variable {
            name,
            kind,
            relaxable,
            fixed: None,
        });
        self.variables.len() - 1
    }

    pub(crate) fn add_arc_variable(&mut self, pair: usize, from: usize, to: usize) -> VarId {
        let (s, t) = self.pairs[pair];
        let id = self.add_variable(format!("xa_{from}_{to}_{s}_{t}"), VarKind::Binary, true);
        self.arc_index.insert((pair, from, to), id);
        id
    }

    pub(crate) fn add_constraint(
        &mut self,
        name: String,
        terms: Vec<(VarId, f64)>,
        sense: Sense,
        rhs: f64,
    ) {
        self.constraints.push(Constraint {
            name,
            terms,
            sense,
            rhs,
        });
    }

    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    /// Variable of arc `from -> to` on the path of pair index `pair`.
    pub fn arc_var(&self, pair: usize, from: usize, to: usize) -> Option<VarId> {
        self.arc_index.get(&(pair, from, to)).copied()
    }

    pub fn pair_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.pairs.iter().position(|&p| p == key)
    }

    pub fn edge_var(&self, u: usize, v: usize) -> Option<VarId> {
        let key = (u.min(v), u.max(v));
        self.edges
            .iter()
            .position(|&e| e == key)
            .map(|i| self.edge_vars[i])
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn relaxable_vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.variables
            .iter()
            .enumerate()
            .filter(|(_, v)| v.relaxable)
            .map(|(i, _)| i)
    }

    /// Tightens a variable's bounds to `[lower, upper]` intersected with the current ones.
    pub fn restrict(&mut self, var: VarId, lower: i64, upper: i64) {
        let (lo, hi) = self.variables[var].bounds();
        self.variables[var].fixed = Some((lo.max(lower), hi.min(upper)));
    }

    pub fn objective_value(&self, values: &[i64]) -> f64 {
        self.objective
            .iter()
            .map(|&(v, c)| c * values[v] as f64)
            .sum()
    }

    /// Checks bounds and every row for a full assignment.
    pub fn is_satisfied_by(&self, values: &[i64]) -> bool {
        if values.len() != self.variables.len() {
            return false;
        }
        let in_bounds = self.variables.iter().zip(values).all(|(var, &x)| {
            let (lo, hi) = var.bounds();
            lo <= x && x <= hi
        });
        in_bounds
            && self.constraints.iter().all(|c| {
                let lhs: f64 = c.terms.iter().map(|&(v, a)| a * values[v] as f64).sum();
                let tol = 1e-9 * c.rhs.abs().max(1.0);
                match c.sense {
                    Sense::Le => lhs <= c.rhs + tol,
                    Sense::Ge => lhs >= c.rhs - tol,
                    Sense::Eq => (lhs - c.rhs).abs() <= tol,
                }
            })
    }
}
