//! Finite array models: evaluation, axiom and metric checks, bounded model search, lifting of
//! ground models, and interpolant checking.

pub mod brute;
pub mod check;
pub mod lift;
pub mod model;

pub use brute::{brute_force_check, completeness_chain, Bounds, BruteReport, BruteVerdict};
pub use check::{check_interpolant, CheckOptions, CheckReport, Condition};
pub use lift::model_from_ground;
pub use model::{check_axioms, check_metric, check_metric_on, diff, diff_k, read, write, ArrayValue, FiniteArrayModel, Value};
