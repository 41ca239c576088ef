//! Experiment pipeline: generate instances over a parameter grid, run the
//! heuristics and the exact solver, re-validate every solution, and write
//! raw records plus per-parameter ratio summaries as CSV.
//!
//! Config files are TOML; every key is optional:
//!
//! ```toml
//! families = ["erdos_renyi", "watts_strogatz"]
//! n = [20, 40]
//! levels = [1, 2, 3]
//! stretch = [1.2, 1.4, 2.0]
//! instances_per_cell = 3
//! algorithms = ["BU", "TD", "MIN", "EXACT"]
//! subsolvers = ["heuristic", "exact"]
//! seed = 1
//! eps = 1.0          # Erdős–Rényi density parameter
//! ws_k = 6
//! ws_beta = 0.2
//! large_graph_mode = false
//! workers = 0        # 0 = one per core
//! node_limit = 10000000
//! instances = []     # extra instance files, run once each
//! ```

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::read_instance;
use crate::generators::{Family, GeneratorSpec};
use crate::ilp::solve_exact_with_limit;
use crate::mlgs::{
    bottom_up, combined, solution_cost, top_down, validate_mlgs, GradedSubgraph, MlgsInstance,
    SubsetSolver, DEFAULT_NODE_LIMIT,
};

pub const CSV_COLUMNS: [&str; 14] = [
    "family",
    "n",
    "m",
    "levels",
    "t",
    "seed",
    "algorithm",
    "subsolver",
    "cost",
    "opt_cost",
    "ratio",
    "ratio_denominator",
    "runtime_ms",
    "status",
];

pub const AGGREGATE_COLUMNS: [&str; 10] = [
    "parameter",
    "value",
    "algorithm",
    "subsolver",
    "count",
    "min",
    "q1",
    "median",
    "q3",
    "max",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    BottomUp,
    TopDown,
    Min,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::BottomUp,
        Algorithm::TopDown,
        Algorithm::Min,
        Algorithm::Exact,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::BottomUp => "BU",
            Algorithm::TopDown => "TD",
            Algorithm::Min => "MIN",
            Algorithm::Exact => "EXACT",
        }
    }

    /// Worst-case ratio to the optimum when subproblems are solved exactly.
    pub fn ratio_bound(&self, levels: usize) -> f64 {
        let l = levels as f64;
        match self {
            Algorithm::BottomUp => l,
            Algorithm::TopDown => (l + 1.0) / 2.0,
            Algorithm::Min => (l + 2.0) / 3.0,
            Algorithm::Exact => 1.0,
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "BU" => Ok(Algorithm::BottomUp),
            "TD" => Ok(Algorithm::TopDown),
            "MIN" => Ok(Algorithm::Min),
            "EXACT" => Ok(Algorithm::Exact),
            _ => Err(Error::InvalidArgument(format!("unknown algorithm '{s}'"))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Ok,
    Unsolved,
    Infeasible,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Unsolved => "unsolved",
            Status::Infeasible => "infeasible",
        }
    }
}

/// What a record's ratio was divided by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Denominator {
    Optimum,
    MinBuTd,
}

impl Denominator {
    pub fn name(&self) -> &'static str {
        match self {
            Denominator::Optimum => "opt",
            Denominator::MinBuTd => "min_bu_td",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub families: Vec<String>,
    pub n: Vec<usize>,
    pub levels: Vec<usize>,
    pub stretch: Vec<f64>,
    pub instances_per_cell: usize,
    pub algorithms: Vec<String>,
    pub subsolvers: Vec<String>,
    pub seed: u64,
    pub eps: f64,
    pub ws_k: usize,
    pub ws_beta: f64,
    /// Divide by min(BU, TD) instead of the optimum and skip EXACT.
    pub large_graph_mode: bool,
    pub workers: usize,
    pub node_limit: u64,
    pub instances: Vec<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            families: vec!["erdos_renyi".into(), "watts_strogatz".into()],
            n: vec![20],
            levels: vec![1, 2, 3],
            stretch: vec![1.2, 1.4, 2.0],
            instances_per_cell: 3,
            algorithms: Algorithm::ALL.iter().map(|a| a.name().to_string()).collect(),
            subsolvers: vec!["heuristic".into(), "exact".into()],
            seed: 1,
            eps: 1.0,
            ws_k: 6,
            ws_beta: 0.2,
            large_graph_mode: false,
            workers: 0,
            node_limit: DEFAULT_NODE_LIMIT,
            instances: Vec::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))
    }

    /// Reads a config; relative instance paths resolve against its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut config = Self::from_toml(&std::fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in &mut config.instances {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(config)
    }

    pub fn parsed_algorithms(&self) -> Result<Vec<Algorithm>> {
        let mut out: Vec<Algorithm> = self
            .algorithms
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn parsed_subsolvers(&self) -> Result<Vec<SubsetSolver>> {
        let mut out = Vec::new();
        for s in &self.subsolvers {
            let solver = match s.to_ascii_lowercase().as_str() {
                "heuristic" => SubsetSolver::Heuristic,
                "exact" => SubsetSolver::Exact {
                    node_limit: self.node_limit,
                },
                other => {
                    return Err(Error::InvalidArgument(format!("unknown subsolver '{other}'")))
                }
            };
            if !out.contains(&solver) {
                out.push(solver);
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        if self.instances_per_cell == 0 {
            return Err(Error::InvalidArgument("instances_per_cell must be >= 1".into()));
        }
        let grid = self.families.len() * self.n.len() * self.levels.len() * self.stretch.len();
        if grid == 0 && self.instances.is_empty() {
            return Err(Error::InvalidArgument("empty experiment grid".into()));
        }
        if self.parsed_algorithms()?.is_empty() {
            return Err(Error::InvalidArgument("no algorithms selected".into()));
        }
        let needs_subsolver = self
            .parsed_algorithms()?
            .iter()
            .any(|a| *a != Algorithm::Exact);
        if needs_subsolver && self.parsed_subsolvers()?.is_empty() {
            return Err(Error::InvalidArgument("no subsolvers selected".into()));
        }
        for f in &self.families {
            Family::from_name(f, self.eps, self.ws_k, self.ws_beta)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub levels: usize,
    pub t: f64,
    pub seed: u64,
    pub algorithm: Algorithm,
    /// `heuristic`, `exact`, or `none` for EXACT rows.
    pub subsolver: String,
    pub cost: Option<f64>,
    pub opt_cost: Option<f64>,
    pub ratio: Option<f64>,
    pub ratio_denominator: Option<Denominator>,
    pub runtime_ms: f64,
    pub status: Status,
    /// The graded solution behind `cost`, not written to CSV.
    pub solution: Option<GradedSubgraph>,
}

impl ExperimentRecord {
    pub fn csv_fields(&self) -> [String; 14] {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        [
            self.family.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.levels.to_string(),
            self.t.to_string(),
            self.seed.to_string(),
            self.algorithm.name().to_string(),
            self.subsolver.clone(),
            opt(self.cost),
            opt(self.opt_cost),
            opt(self.ratio),
            self.ratio_denominator
                .map(|d| d.name().to_string())
                .unwrap_or_default(),
            format!("{:.3}", self.runtime_ms),
            self.status.name().to_string(),
        ]
    }
}

struct Task {
    family: String,
    seed: u64,
    levels: usize,
    stretch: f64,
    // either a spec to generate or a file to read
    source: Source,
}

enum Source {
    Spec(GeneratorSpec),
    File(PathBuf),
}

fn instance_seed(base: u64, graph_index: u64) -> u64 {
    base.wrapping_add(graph_index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn tasks(config: &ExperimentConfig) -> Result<Vec<Task>> {
    let mut out = Vec::new();
    // the graph seed depends on (family, n, k) only, so cells that differ
    // only in levels or stretch share their graphs
    let mut graph_index = 0u64;
    for family_name in &config.families {
        let family = Family::from_name(family_name, config.eps, config.ws_k, config.ws_beta)?;
        for &n in &config.n {
            for k in 0..config.instances_per_cell {
                let seed = instance_seed(config.seed, graph_index + k as u64);
                for &levels in &config.levels {
                    for &stretch in &config.stretch {
                        out.push(Task {
                            family: family.name().to_string(),
                            seed,
                            levels,
                            stretch,
                            source: Source::Spec(GeneratorSpec {
                                family,
                                n,
                                levels,
                                stretch,
                                seed,
                            }),
                        });
                    }
                }
            }
            graph_index += config.instances_per_cell as u64;
        }
    }
    for path in &config.instances {
        out.push(Task {
            family: "file".into(),
            seed: 0,
            levels: 0,
            stretch: 0.0,
            source: Source::File(path.clone()),
        });
    }
    Ok(out)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

fn status_of(err: &Error) -> Status {
    match err {
        Error::NodeLimit(_) => Status::Unsolved,
        _ => Status::Infeasible,
    }
}

/// Runs every requested algorithm on one instance.
pub fn run_instance(
    inst: &MlgsInstance,
    family: &str,
    seed: u64,
    algorithms: &[Algorithm],
    subsolvers: &[SubsetSolver],
    large_graph_mode: bool,
    node_limit: u64,
) -> Vec<ExperimentRecord> {
    let base = ExperimentRecord {
        family: family.to_string(),
        n: inst.graph().vertex_count(),
        m: inst.graph().edge_count(),
        levels: inst.levels(),
        t: inst.stretch(),
        seed,
        algorithm: Algorithm::Exact,
        subsolver: "none".into(),
        cost: None,
        opt_cost: None,
        ratio: None,
        ratio_denominator: None,
        runtime_ms: 0.0,
        status: Status::Ok,
        solution: None,
    };
    let mut records = Vec::new();

    // a solution only counts if it passes validation
    let accept = |sol: GradedSubgraph| -> (Option<f64>, Status, Option<GradedSubgraph>) {
        if !validate_mlgs(inst, &sol).is_empty() {
            return (None, Status::Infeasible, None);
        }
        match solution_cost(inst, &sol) {
            Ok(c) => (Some(c), Status::Ok, Some(sol)),
            Err(_) => (None, Status::Infeasible, None),
        }
    };

    let mut opt = None;
    if algorithms.contains(&Algorithm::Exact) && !large_graph_mode {
        let (result, ms) = timed(|| solve_exact_with_limit(inst, node_limit));
        let mut rec = ExperimentRecord {
            runtime_ms: ms,
            ..base.clone()
        };
        match result {
            Ok(exact) => {
                let (cost, status, solution) = accept(exact.solution);
                rec.cost = cost;
                rec.status = status;
                rec.solution = solution;
                opt = cost;
            }
            Err(e) => rec.status = status_of(&e),
        }
        records.push(rec);
    }

    for &solver in subsolvers {
        let mut rows = Vec::new();
        for &alg in algorithms.iter().filter(|&&a| a != Algorithm::Exact) {
            let (result, ms) = timed(|| match alg {
                Algorithm::BottomUp => bottom_up(inst, solver),
                Algorithm::TopDown => top_down(inst, solver),
                _ => combined(inst, solver).map(|r| r.solution().clone()),
            });
            let mut rec = ExperimentRecord {
                algorithm: alg,
                subsolver: solver.name().to_string(),
                runtime_ms: ms,
                ..base.clone()
            };
            match result {
                Ok(sol) => {
                    let (cost, status, solution) = accept(sol);
                    rec.cost = cost;
                    rec.status = status;
                    rec.solution = solution;
                }
                Err(e) => rec.status = status_of(&e),
            }
            rows.push(rec);
        }

        let denominator = if large_graph_mode {
            let cost_of = |alg| {
                rows.iter()
                    .find(|r: &&ExperimentRecord| r.algorithm == alg)
                    .and_then(|r| r.cost)
            };
            let (bu, td) = match (cost_of(Algorithm::BottomUp), cost_of(Algorithm::TopDown)) {
                (Some(bu), Some(td)) => (Some(bu), Some(td)),
                _ => match combined(inst, solver) {
                    Ok(r) => (Some(r.bottom_up_cost), Some(r.top_down_cost)),
                    Err(_) => (None, None),
                },
            };
            bu.zip(td).map(|(a, b)| (a.min(b), Denominator::MinBuTd))
        } else {
            opt.map(|o| (o, Denominator::Optimum))
        };
        if let Some((d, kind)) = denominator {
            for rec in &mut rows {
                if kind == Denominator::Optimum {
                    rec.opt_cost = Some(d);
                }
                if let Some(c) = rec.cost {
                    rec.ratio = Some(c / d);
                    rec.ratio_denominator = Some(kind);
                }
            }
        }
        records.extend(rows);
    }

    if let Some(rec) = records.first_mut().filter(|r| r.algorithm == Algorithm::Exact) {
        if let Some(c) = rec.cost {
            rec.opt_cost = Some(c);
            rec.ratio = Some(1.0);
            rec.ratio_denominator = Some(Denominator::Optimum);
        }
    }
    records
}

fn failed_records(
    task: &Task,
    n: usize,
    algorithms: &[Algorithm],
    subsolvers: &[SubsetSolver],
    large_graph_mode: bool,
) -> Vec<ExperimentRecord> {
    let mut out = Vec::new();
    let blank = |algorithm, subsolver: &str| ExperimentRecord {
        family: task.family.clone(),
        n,
        m: 0,
        levels: task.levels,
        t: task.stretch,
        seed: task.seed,
        algorithm,
        subsolver: subsolver.to_string(),
        cost: None,
        opt_cost: None,
        ratio: None,
        ratio_denominator: None,
        runtime_ms: 0.0,
        status: Status::Infeasible,
        solution: None,
    };
    if algorithms.contains(&Algorithm::Exact) && !large_graph_mode {
        out.push(blank(Algorithm::Exact, "none"));
    }
    for s in subsolvers {
        for &a in algorithms.iter().filter(|&&a| a != Algorithm::Exact) {
            out.push(blank(a, s.name()));
        }
    }
    out
}

/// Runs the whole grid. Instance failures become records with status
/// `infeasible`; only an invalid config is an error.
pub fn run_suite(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    config.validate()?;
    let algorithms = config.parsed_algorithms()?;
    let subsolvers = config.parsed_subsolvers()?;
    let tasks = tasks(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let run = |task: &Task| -> Vec<ExperimentRecord> {
        let loaded = match &task.source {
            Source::Spec(spec) => spec.generate(),
            Source::File(path) => read_instance(path),
        };
        match loaded {
            Ok(inst) => run_instance(
                &inst,
                &task.family,
                task.seed,
                &algorithms,
                &subsolvers,
                config.large_graph_mode,
                config.node_limit,
            ),
            Err(_) => {
                let n = match &task.source {
                    Source::Spec(spec) => spec.n,
                    Source::File(_) => 0,
                };
                failed_records(task, n, &algorithms, &subsolvers, config.large_graph_mode)
            }
        }
    };
    let per_task: Vec<Vec<ExperimentRecord>> =
        pool.install(|| tasks.par_iter().map(run).collect());
    Ok(per_task.into_iter().flatten().collect())
}

pub fn write_records_csv(out: impl Write, records: &[ExperimentRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        w.write_record(r.csv_fields())?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub parameter: String,
    pub value: String,
    pub algorithm: Algorithm,
    pub subsolver: String,
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Ratio summaries of the `ok` records, grouped by each of family, n,
/// levels and t in turn.
pub fn aggregate(records: &[ExperimentRecord]) -> Vec<AggregateRow> {
    type Key = (String, Algorithm, String);
    type Field = fn(&ExperimentRecord) -> String;
    let params: [(&str, Field); 4] = [
        ("family", |r| r.family.clone()),
        ("n", |r| r.n.to_string()),
        ("levels", |r| r.levels.to_string()),
        ("t", |r| r.t.to_string()),
    ];
    let mut out = Vec::new();
    for (name, value_of) in params {
        // first-seen order keeps output stable and grid-shaped
        let mut groups: Vec<(Key, Vec<f64>)> = Vec::new();
        for r in records.iter().filter(|r| r.status == Status::Ok) {
            let Some(ratio) = r.ratio else { continue };
            let key = (value_of(r), r.algorithm, r.subsolver.clone());
            match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, v)) => v.push(ratio),
                None => groups.push((key, vec![ratio])),
            }
        }
        for ((value, algorithm, subsolver), mut ratios) in groups {
            ratios.sort_by(f64::total_cmp);
            out.push(AggregateRow {
                parameter: name.to_string(),
                value,
                algorithm,
                subsolver,
                count: ratios.len(),
                min: ratios[0],
                q1: quantile(&ratios, 0.25),
                median: quantile(&ratios, 0.5),
                q3: quantile(&ratios, 0.75),
                max: ratios[ratios.len() - 1],
            });
        }
    }
    out
}

pub fn write_aggregate_csv(out: impl Write, rows: &[AggregateRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(AGGREGATE_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.parameter.clone(),
            r.value.clone(),
            r.algorithm.name().to_string(),
            r.subsolver.clone(),
            r.count.to_string(),
            r.min.to_string(),
            r.q1.to_string(),
            r.median.to_string(),
            r.q3.to_string(),
            r.max.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the suite and writes `records.csv` and `aggregate.csv` into `dir`.
pub fn run_suite_to_dir(
    config: &ExperimentConfig,
    dir: impl AsRef<Path>,
) -> Result<Vec<ExperimentRecord>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let records = run_suite(config)?;
    write_records_csv(std::fs::File::create(dir.join("records.csv"))?, &records)?;
    write_aggregate_csv(
        std::fs::File::create(dir.join("aggregate.csv"))?,
        &aggregate(&records),
    )?;
    Ok(records)
}
