//! `mlspan`: generate instances, run the heuristics and the exact solver,
//! verify solutions, write LP models and run experiment grids.
//!
//! Failures print one line `mlspan: error[<kind>]: <message>` to stderr.
//! Exit codes: 0 success, 1 invalid solution (`verify`), 2 usage,
//! 3 bad input, 4 infeasible instance, 5 anything else.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use mlspan_core::format::{read_instance, read_solution, serialize_instance_with_comments};
use mlspan_core::harness::run_suite_to_dir;
use mlspan_core::ilp::{apply_fixings, solve_exact_with_limit};
use mlspan_core::mlgs::DEFAULT_NODE_LIMIT;
use mlspan_core::{
    bottom_up, build_mlgs_model, build_pairwise_model, combined, emit_lp_text, reduce_instance,
    serialize_solution, solution_cost, top_down, validate_mlgs, Error, ExperimentConfig, Family,
    GeneratorSpec, MlgsInstance, PairSet, SubsetSolver,
};

#[derive(Parser)]
#[command(name = "mlspan", version, about = "Multi-level graph spanners")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance.
    Generate {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        /// Erdős–Rényi density: p = (1 + eps) ln n / n.
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        /// Watts–Strogatz lattice degree (even).
        #[arg(long = "K", alias = "k", default_value_t = 6)]
        k: usize,
        /// Watts–Strogatz rewiring probability.
        #[arg(long, default_value_t = 0.2)]
        beta: f64,
        #[arg(long)]
        levels: usize,
        #[arg(long)]
        stretch: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run bottom-up, top-down or their minimum; prints the cost.
    Heuristic {
        #[arg(long, value_enum)]
        algo: AlgoArg,
        #[arg(long, value_enum, default_value_t = SubsolverArg::Heuristic)]
        subsolver: SubsolverArg,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: u64,
        instance: PathBuf,
        /// Where to write the graded solution (default: `<instance>.sol`).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve to optimality; prints the optimum or "unsolved".
    Exact {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: u64,
        /// Also write the optimal graded solution.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a graded solution; exit status 0 iff it is feasible.
    Verify { instance: PathBuf, solution: PathBuf },
    /// Write the flow ILP in LP format.
    EmitLp {
        instance: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Apply the shortest-path reductions first and write `<output>.fixings`.
        #[arg(long)]
        reduce: bool,
        /// Single-level pairwise model over the level-1 terminal pairs.
        #[arg(long)]
        pairwise: bool,
    },
    /// Run an experiment grid; writes records.csv and aggregate.csv.
    Experiment {
        config: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(alias = "erdos_renyi")]
    Er,
    #[value(alias = "watts_strogatz")]
    Ws,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Bu,
    Td,
    Min,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubsolverArg {
    Heuristic,
    Exact,
}

/// A run that completed but whose answer is negative.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Rejected(String);

fn load(path: &Path) -> anyhow::Result<MlgsInstance> {
    read_instance(path).with_context(|| format!("{}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate {
            family,
            n,
            eps,
            k,
            beta,
            levels,
            stretch,
            seed,
            output,
        } => {
            let family = match family {
                FamilyArg::Er => Family::ErdosRenyi { eps },
                FamilyArg::Ws => Family::WattsStrogatz { k, beta },
            };
            let spec = GeneratorSpec {
                family,
                n,
                levels,
                stretch,
                seed,
            };
            let inst = spec.generate()?;
            std::fs::write(&output, serialize_instance_with_comments(&inst, &spec.header()))
                .with_context(|| format!("{}", output.display()))?;
            println!(
                "wrote {} (n={} m={})",
                output.display(),
                inst.graph().vertex_count(),
                inst.graph().edge_count()
            );
        }
        Command::Heuristic {
            algo,
            subsolver,
            node_limit,
            instance,
            output,
        } => {
            let inst = load(&instance)?;
            let solver = match subsolver {
                SubsolverArg::Heuristic => SubsetSolver::Heuristic,
                SubsolverArg::Exact => SubsetSolver::Exact { node_limit },
            };
            let sol = match algo {
                AlgoArg::Bu => bottom_up(&inst, solver)?,
                AlgoArg::Td => top_down(&inst, solver)?,
                AlgoArg::Min => combined(&inst, solver)?.solution().clone(),
            };
            let output = output.unwrap_or_else(|| with_suffix(&instance, ".sol"));
            std::fs::write(&output, serialize_solution(inst.graph(), &sol))
                .with_context(|| format!("{}", output.display()))?;
            println!("cost {}", solution_cost(&inst, &sol)?);
        }
        Command::Exact {
            instance,
            node_limit,
            output,
        } => {
            let inst = load(&instance)?;
            match solve_exact_with_limit(&inst, node_limit) {
                Ok(exact) => {
                    if let Some(output) = output {
                        std::fs::write(&output, serialize_solution(inst.graph(), &exact.solution))
                            .with_context(|| format!("{}", output.display()))?;
                    }
                    println!("optimum {}", exact.objective);
                }
                Err(Error::NodeLimit(_)) => println!("unsolved"),
                Err(e) => return Err(e.into()),
            }
        }
        Command::Verify { instance, solution } => {
            let inst = load(&instance)?;
            let sol = read_solution(&solution, inst.graph())
                .with_context(|| format!("{}", solution.display()))?;
            sol.check(&inst)?;
            let violations = validate_mlgs(&inst, &sol);
            if !violations.is_empty() {
                for v in &violations {
                    println!("{v}");
                }
                return Err(Rejected(format!("{} stretch violations", violations.len())).into());
            }
            println!("ok cost {}", solution_cost(&inst, &sol)?);
        }
        Command::EmitLp {
            instance,
            output,
            reduce,
            pairwise,
        } => {
            let inst = load(&instance)?;
            let pairs = PairSet::all_pairs(inst.terminals(1));
            let reduction = if reduce {
                let r = reduce_instance(inst.graph(), &pairs, inst.stretch())?;
                if r.is_infeasible() {
                    return Err(Error::Infeasible("reductions fix an arc both ways".into()).into());
                }
                Some(r)
            } else {
                None
            };
            let mut model = match (&reduction, pairwise) {
                (Some(r), true) => build_pairwise_model(&r.graph, &pairs, inst.stretch())?,
                (None, true) => build_pairwise_model(inst.graph(), &pairs, inst.stretch())?,
                (Some(r), false) => build_mlgs_model(&MlgsInstance::new(
                    r.graph.clone(),
                    inst.terminal_levels().to_vec(),
                    inst.stretch(),
                )?)?,
                (None, false) => build_mlgs_model(&inst)?,
            };
            if let Some(r) = &reduction {
                apply_fixings(&mut model, &r.fixings);
                let sidecar = with_suffix(&output, ".fixings");
                std::fs::write(&sidecar, r.fixings.to_text())
                    .with_context(|| format!("{}", sidecar.display()))?;
            }
            std::fs::write(&output, emit_lp_text(&model))
                .with_context(|| format!("{}", output.display()))?;
            println!(
                "wrote {} ({} variables, {} constraints)",
                output.display(),
                model.variable_count(),
                model.constraints.len()
            );
        }
        Command::Experiment { config, output } => {
            let cfg = ExperimentConfig::load(&config)
                .with_context(|| format!("{}", config.display()))?;
            let records = run_suite_to_dir(&cfg, &output)?;
            println!("{} records written to {}", records.len(), output.display());
        }
    }
    Ok(())
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn classify(e: &anyhow::Error) -> (&'static str, u8) {
    if e.downcast_ref::<Rejected>().is_some() {
        return ("invalid-solution", 1);
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Parse(_)) => ("parse", 3),
        Some(Error::Io(_)) => ("io", 3),
        Some(Error::InvalidArgument(_) | Error::InvalidStretch(_) | Error::Degenerate(_)) => {
            ("invalid-argument", 3)
        }
        Some(
            Error::InvalidVertex { .. } | Error::UnknownEdge { .. } | Error::UnknownEdgeId(_),
        ) => ("invalid-input", 3),
        Some(Error::Infeasible(_) | Error::NoPath { .. }) => ("infeasible", 4),
        Some(Error::NodeLimit(_)) => ("unsolved", 5),
        _ => ("internal", 5),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, code) = classify(&e);
            let message = format!("{e:#}").replace('\n', " ");
            eprintln!("mlspan: error[{kind}]: {message}");
            ExitCode::from(code)
        }
    }
}
