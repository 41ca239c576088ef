//! Line-oriented text formats.
//!
//! Instances:
//!
//! ```text
//! # comment
//! nodes 3
//! edge 0 1 1
//! edge 0 2 3
//! edge 1 2 1
//! stretch 2
//! level 1 0 1 2
//! level 2 0 2
//! ```
//!
//! `nodes` comes first; levels are numbered from 1 and each level's
//! terminals must also appear on the level below.
//!
//! Graded solutions list one `grade <u> <v> <y>` line per edge with a
//! nonzero grade.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{ParseError, Result};
use crate::graph::WeightedGraph;
use crate::mlgs::{GradedSubgraph, MlgsInstance};

fn tokens(line: &str) -> Vec<&str> {
    line.split('#').next().unwrap_or("").split_whitespace().collect()
}

fn number<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::new(line, format!("invalid {what} '{token}'")))
}

fn expect_args(line: usize, toks: &[&str], count: usize) -> Result<(), ParseError> {
    if toks.len() != count + 1 {
        return Err(ParseError::new(
            line,
            format!("'{}' takes {count} values, found {}", toks[0], toks.len() - 1),
        ));
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<MlgsInstance, ParseError> {
    let mut nodes: Option<usize> = None;
    let mut edges = Vec::new();
    let mut stretch: Option<(usize, f64)> = None;
    let mut levels: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks = tokens(raw);
        let Some(&keyword) = toks.first() else {
            continue;
        };
        if nodes.is_none() && keyword != "nodes" {
            return Err(ParseError::new(line, "expected 'nodes' before anything else"));
        }
        match keyword {
            "nodes" => {
                if nodes.is_some() {
                    return Err(ParseError::new(line, "'nodes' given twice"));
                }
                expect_args(line, &toks, 1)?;
                let n: usize = number(line, toks[1], "vertex count")?;
                if n == 0 {
                    return Err(ParseError::new(line, "vertex count must be positive"));
                }
                nodes = Some(n);
            }
            "edge" => {
                expect_args(line, &toks, 3)?;
                let u: usize = number(line, toks[1], "vertex")?;
                let v: usize = number(line, toks[2], "vertex")?;
                let w: f64 = number(line, toks[3], "weight")?;
                edges.push((line, u, v, w));
            }
            "stretch" => {
                if stretch.is_some() {
                    return Err(ParseError::new(line, "'stretch' given twice"));
                }
                expect_args(line, &toks, 1)?;
                let t: f64 = number(line, toks[1], "stretch")?;
                if !(t.is_finite() && t >= 1.0) {
                    return Err(ParseError::new(line, format!("stretch {t} must be >= 1")));
                }
                stretch = Some((line, t));
            }
            "level" => {
                if toks.len() < 2 {
                    return Err(ParseError::new(line, "'level' needs a level number"));
                }
                let i: usize = number(line, toks[1], "level")?;
                if i != levels.len() + 1 {
                    return Err(ParseError::new(
                        line,
                        format!("expected level {}, found level {i}", levels.len() + 1),
                    ));
                }
                let verts = toks[2..]
                    .iter()
                    .map(|t| number(line, t, "vertex"))
                    .collect::<Result<Vec<usize>, _>>()?;
                if let Some((_, below)) = levels.last() {
                    if let Some(v) = verts.iter().find(|v| !below.contains(v)) {
                        return Err(ParseError::new(
                            line,
                            format!("terminal sets not nested: vertex {v} is missing from level {}", i - 1),
                        ));
                    }
                }
                levels.push((line, verts));
            }
            other => return Err(ParseError::new(line, format!("unknown keyword '{other}'"))),
        }
    }

    let n = nodes.ok_or_else(|| ParseError::new(last_line.max(1), "missing 'nodes'"))?;
    let (stretch_line, t) =
        stretch.ok_or_else(|| ParseError::new(last_line, "missing 'stretch'"))?;
    if levels.is_empty() {
        return Err(ParseError::new(last_line, "missing 'level 1'"));
    }

    // report graph errors against the first offending edge line
    let mut seen = std::collections::HashSet::new();
    for &(line, u, v, w) in &edges {
        let bad = if u >= n || v >= n {
            Some(format!("vertex out of range for {n} vertices"))
        } else if u == v {
            Some("self-loop".to_string())
        } else if !(w.is_finite() && w > 0.0) {
            Some(format!("weight {w} must be positive"))
        } else if !seen.insert((u.min(v), u.max(v))) {
            Some("duplicate edge".to_string())
        } else {
            None
        };
        if let Some(message) = bad {
            return Err(ParseError::new(line, message));
        }
    }
    let graph = WeightedGraph::new(n, edges.iter().map(|&(_, u, v, w)| (u, v, w)))
        .map_err(|e| ParseError::new(1, e.to_string()))?;
    for (line, verts) in &levels {
        if let Some(v) = verts.iter().find(|&&v| v >= n) {
            return Err(ParseError::new(*line, format!("vertex {v} out of range")));
        }
    }
    let top_line = levels.last().map_or(stretch_line, |(l, _)| *l);
    MlgsInstance::new(graph, levels.into_iter().map(|(_, v)| v).collect(), t)
        .map_err(|e| ParseError::new(top_line, e.to_string()))
}

pub fn serialize_instance(inst: &MlgsInstance) -> String {
    serialize_instance_with_comments(inst, &[])
}

/// Like [`serialize_instance`] with `# ` comment lines on top.
pub fn serialize_instance_with_comments(inst: &MlgsInstance, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let g = inst.graph();
    let _ = writeln!(out, "nodes {}", g.vertex_count());
    for e in g.edges() {
        let _ = writeln!(out, "edge {} {} {}", e.u, e.v, e.weight);
    }
    let _ = writeln!(out, "stretch {}", inst.stretch());
    for (i, level) in inst.terminal_levels().iter().enumerate() {
        let _ = write!(out, "level {}", i + 1);
        for v in level {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<MlgsInstance> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_instance(&text)?)
}

pub fn write_instance(path: impl AsRef<Path>, inst: &MlgsInstance) -> Result<()> {
    std::fs::write(path, serialize_instance(inst))?;
    Ok(())
}

/// Reads `grade u v y` lines against the edges of `graph`; edges not listed get grade 0.
pub fn parse_solution(text: &str, graph: &WeightedGraph) -> Result<GradedSubgraph, ParseError> {
    let mut grades = vec![0u32; graph.edge_count()];
    let mut listed = vec![false; graph.edge_count()];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokens(raw);
        let Some(&keyword) = toks.first() else {
            continue;
        };
        if keyword != "grade" {
            return Err(ParseError::new(line, format!("unknown keyword '{keyword}'")));
        }
        expect_args(line, &toks, 3)?;
        let u: usize = number(line, toks[1], "vertex")?;
        let v: usize = number(line, toks[2], "vertex")?;
        let y: u32 = number(line, toks[3], "grade")?;
        let id = graph
            .edge_id(u, v)
            .ok_or_else(|| ParseError::new(line, format!("{{{u}, {v}}} is not an edge")))?;
        if std::mem::replace(&mut listed[id], true) {
            return Err(ParseError::new(line, format!("edge {{{u}, {v}}} graded twice")));
        }
        grades[id] = y;
    }
    Ok(GradedSubgraph::new(grades))
}

pub fn serialize_solution(graph: &WeightedGraph, sol: &GradedSubgraph) -> String {
    let mut out = String::new();
    for (e, &y) in graph.edges().iter().zip(sol.grades()) {
        if y > 0 {
            let _ = writeln!(out, "grade {} {} {}", e.u, e.v, y);
        }
    }
    out
}

pub fn read_solution(path: impl AsRef<Path>, graph: &WeightedGraph) -> Result<GradedSubgraph> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_solution(&text, graph)?)
}
