//! Flow-based integer programs, size reductions, LP output and exact solvers.

pub mod build;
pub mod exact;
pub mod lp;
pub mod model;
pub mod model_search;
pub mod oracle;
pub mod reduce;

pub use build::{build_mlgs_model, build_pairwise_model};
pub use exact::{min_subsetwise_spanner, solve_exact, solve_exact_with_limit, ExactSolution};
pub use lp::emit_lp_text;
pub use model::{Constraint, IlpModel, ModelKind, Sense, VarId, VarKind, Variable};
pub use model_search::{exhaustive_optimum, ModelOptimum};
pub use oracle::{brute_force_oracle, ORACLE_CAP};
pub use reduce::{apply_fixings, reduce_instance, ArcKey, Fixings, Reduction};
