//! The problem format, printing, and the command-line driver.

pub mod cli;
pub mod parse;
pub mod print;
pub mod sexp;

pub use cli::{run_cli, CliConfig, Mode};
pub use parse::{parse_formula, parse_interpolation, parse_problem, parse_term, InterpolationProblem, Problem};
pub use print::{print_formula, print_model, print_term};
pub use sexp::{parse_sexps, Pos, Sexp};
