//! Multi-level graph spanners.
//!
//! Given a weighted graph, nested terminal sets `T_1 ⊇ T_2 ⊇ ... ⊇ T_l` and
//! a stretch factor `t`, find per-edge grades `y_e` in `0..=l` of minimum
//! total `sum(c_e * y_e)` such that for every level `i`, the edges graded at
//! least `i` keep every pair of `T_i` within `t` times its distance in the
//! graph.
//!
//! - [`graph`]: graphs, shortest paths, stretch checks
//! - [`spanner`]: greedy spanner, shortest-path preserver, subsetwise heuristic
//! - [`mlgs`]: instances, graded solutions, bottom-up / top-down / combined
//! - [`ilp`]: flow formulations, reductions, LP output, exact solvers
//! - [`generators`]: seeded random instances
//! - [`harness`]: experiment grid runner and CSV output
//! - [`format`]: instance and solution text formats

pub mod error;
pub mod fixtures;
pub mod format;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod ilp;
pub mod mlgs;
pub mod spanner;

pub use error::{Error, ParseError, Result};
pub use format::{parse_instance, parse_solution, serialize_instance, serialize_solution};
pub use generators::{erdos_renyi, sample_nested_terminals, watts_strogatz, Family, GeneratorSpec};
pub use graph::{
    all_pairs_distances, shortest_path, single_source_distances, stretch_violations,
    DistanceMatrix, EdgeId, EdgeSet, Path, StretchViolation, WeightedGraph,
};
pub use harness::{run_suite, Algorithm, ExperimentConfig, ExperimentRecord, Status};
pub use ilp::{
    brute_force_oracle, build_mlgs_model, build_pairwise_model, emit_lp_text, reduce_instance,
    solve_exact, ExactSolution, Fixings, IlpModel,
};
pub use mlgs::{
    bottom_up, combined, level_costs, solution_cost, top_down, validate_mlgs, Choice,
    CombinedResult, GradedSubgraph, LevelViolation, MlgsInstance, SubsetSolver,
};
pub use spanner::{
    greedy_spanner, path_union_preserver, subsetwise_spanner, terminal_complete_graph, PairSet,
};
