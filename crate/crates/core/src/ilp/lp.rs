//! LP-format writer for external MILP solvers.
//!
//! Variable names:
//! - `x_e_<u>_<v>`: binary edge selector of a pairwise model, `u < v`
//! - `y_<u>_<v>`: integer grade of edge `{u, v}` in a multi-level model
//! - `xa_<i>_<j>_<s>_<t>`: binary, arc `i -> j` lies on the path of pair `(s, t)`
//!
//! Arc variables may be relaxed to continuous `[0, 1]`; they are listed in
//! `\ relaxable` comment lines before `End`.

use std::fmt::Write;

use super::model::{IlpModel, VarId, VarKind};

const TERMS_PER_LINE: usize = 8;

pub fn emit_lp_text(model: &IlpModel) -> String {
    let mut out = String::new();
    out.push_str("Minimize\n obj:");
    if model.objective.is_empty() {
        out.push_str(" 0");
    } else {
        write_terms(&mut out, model, &model.objective);
    }
    out.push('\n');

    out.push_str("Subject To\n");
    for c in &model.constraints {
        let _ = write!(out, " {}:", c.name);
        write_terms(&mut out, model, &c.terms);
        let _ = writeln!(out, " {} {}", c.sense.symbol(), c.rhs);
    }

    let mut bounds = String::new();
    let mut general = Vec::new();
    let mut binary = Vec::new();
    for var in &model.variables {
        let (lo, hi) = var.bounds();
        match var.kind {
            VarKind::Binary => {
                binary.push(var.name.as_str());
                if lo == hi {
                    let _ = writeln!(bounds, " {} = {}", var.name, lo);
                } else if (lo, hi) != (0, 1) {
                    let _ = writeln!(bounds, " {} <= {} <= {}", lo, var.name, hi);
                }
            }
            VarKind::Integer { .. } => {
                general.push(var.name.as_str());
                if lo == hi {
                    let _ = writeln!(bounds, " {} = {}", var.name, lo);
                } else {
                    let _ = writeln!(bounds, " {} <= {} <= {}", lo, var.name, hi);
                }
            }
        }
    }
    if !bounds.is_empty() {
        out.push_str("Bounds\n");
        out.push_str(&bounds);
    }
    write_name_section(&mut out, "General", &general);
    write_name_section(&mut out, "Binary", &binary);

    let relaxable: Vec<&str> = model
        .relaxable_vars()
        .map(|v| model.variables[v].name.as_str())
        .collect();
    for chunk in relaxable.chunks(TERMS_PER_LINE) {
        let _ = writeln!(out, "\\ relaxable: {}", chunk.join(" "));
    }
    out.push_str("End\n");
    out
}

fn write_terms(out: &mut String, model: &IlpModel, terms: &[(VarId, f64)]) {
    for (k, &(var, coef)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let name = &model.variables[var].name;
        let _ = if coef < 0.0 {
            write!(out, " - {} {}", -coef, name)
        } else if k == 0 {
            write!(out, " {} {}", coef, name)
        } else {
            write!(out, " + {} {}", coef, name)
        };
    }
}

fn write_name_section(out: &mut String, title: &str, names: &[&str]) {
    if names.is_empty() {
        return;
    }
    out.push_str(title);
    out.push('\n');
    for chunk in names.chunks(TERMS_PER_LINE) {
        let _ = writeln!(out, " {}", chunk.join(" "));
    }
}
