//! The command-line driver: reads problem files, runs the engine and prints the answer.

use std::io::Write;
use std::path::PathBuf;

use super::parse::{check_theory, parse_formula, parse_interpolation, parse_problem};
use super::print::{print_formula, print_model};
use crate::error::{Error, Result};
use crate::interpolate::{ard_interpolate, InterpolationConfig, InterpolationOutcome};
use crate::kernel::{Formula, IndexTheory, TermStore};
use crate::oracle::{brute_force_check, check_axioms, check_interpolant, check_metric, Bounds, BruteVerdict, CheckOptions};
use crate::solver::{decide_with, DecideOptions, Decision};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Sat { input: PathBuf },
    Interpolate { a: PathBuf, b: PathBuf },
    Check { a: PathBuf, b: PathBuf, interpolant: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliConfig {
    pub mode: Mode,
    /// Overrides the theory set in the input files.
    pub index_theory: Option<IndexTheory>,
    /// Largest instantiation level tried under difference logic.
    pub budget: usize,
    /// Verify answers with the model checker and bounded model search.
    pub check_answers: bool,
    pub bounds: Bounds,
    /// Expand disjunctions up front when deciding satisfiability.
    pub dnf: bool,
    /// Print repeated subterms of interpolants with `let`.
    pub share: bool,
}

impl CliConfig {
    pub fn new(mode: Mode) -> Self {
        CliConfig {
            mode,
            index_theory: None,
            budget: InterpolationConfig::default().budget,
            check_answers: false,
            bounds: Bounds::default(),
            dnf: false,
            share: false,
        }
    }
}

/// Exit code of a definitive answer.
pub const EXIT_OK: i32 = 0;
/// Exit code of a check that found the interpolant invalid.
pub const EXIT_INVALID: i32 = 1;
/// Exit code of input, I/O and internal errors.
pub const EXIT_ERROR: i32 = 2;
/// Exit code of an `unknown` answer.
pub const EXIT_UNKNOWN: i32 = 3;

/// Runs one command, writing the answer to `out` and diagnostics to `err`.
pub fn run_cli(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run(config, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn run(config: &CliConfig, out: &mut dyn Write) -> Result<i32> {
    let mut store = TermStore::new();
    match &config.mode {
        Mode::Sat { input } => {
            let problem = parse_problem(&mut store, &read(input)?)?;
            let theory = config.index_theory.unwrap_or(problem.theory());
            let f = problem.formula();
            check_theory(&store, theory, &f)?;
            let opts = DecideOptions { theory, dnf: config.dnf };
            match decide_with(&mut store, opts, &f)? {
                Decision::Sat(m) => {
                    if config.check_answers {
                        check_axioms(&m).map_err(Error::Internal)?;
                        check_metric(&m).map_err(Error::Internal)?;
                    }
                    writeln!(out, "sat")?;
                    writeln!(out, "{}", print_model(&store, &m))?;
                }
                Decision::Unsat => {
                    if config.check_answers {
                        let r = brute_force_check(&mut store, theory, &f, config.bounds)?;
                        if let BruteVerdict::Sat(_) = r.verdict {
                            return Err(Error::internal("bounded search found a model of an unsat input"));
                        }
                    }
                    writeln!(out, "unsat")?;
                }
            }
            Ok(EXIT_OK)
        }
        Mode::Interpolate { a, b } => {
            let p = parse_interpolation(&mut store, &read(a)?, &read(b)?)?;
            let theory = config.index_theory.unwrap_or(p.a.theory());
            let (fa, fb) = (p.a.formula(), p.b.formula());
            check_theory(&store, theory, &Formula::and([fa.clone(), fb.clone()]))?;
            let cfg = InterpolationConfig {
                theory,
                budget: config.budget,
            };
            match ard_interpolate(&mut store, &fa, &fb, cfg)? {
                InterpolationOutcome::Sat(m) => {
                    writeln!(out, "sat")?;
                    writeln!(out, "{}", print_model(&store, &m))?;
                    Ok(EXIT_OK)
                }
                InterpolationOutcome::Unknown { reached } => {
                    writeln!(out, "unknown")?;
                    writeln!(out, "(reached {reached})")?;
                    Ok(EXIT_UNKNOWN)
                }
                InterpolationOutcome::Interpolant(th) => {
                    writeln!(out, "unsat")?;
                    writeln!(out, "{}", print_formula(&mut store, &th.formula, config.share))?;
                    if !config.check_answers {
                        return Ok(EXIT_OK);
                    }
                    let opts = CheckOptions {
                        theory,
                        brute: Some(config.bounds),
                    };
                    let report = check_interpolant(&mut store, &fa, &fb, &th.formula, opts)?;
                    write!(out, "{report}")?;
                    Ok(if report.all_pass() { EXIT_OK } else { EXIT_INVALID })
                }
            }
        }
        Mode::Check { a, b, interpolant } => {
            let p = parse_interpolation(&mut store, &read(a)?, &read(b)?)?;
            let theory = config.index_theory.unwrap_or(p.a.theory());
            let theta = parse_formula(&mut store, &read(interpolant)?)?;
            let (fa, fb) = (p.a.formula(), p.b.formula());
            check_theory(&store, theory, &Formula::and([fa.clone(), fb.clone(), theta.clone()]))?;
            let opts = CheckOptions {
                theory,
                brute: config.check_answers.then_some(config.bounds),
            };
            let report = check_interpolant(&mut store, &fa, &fb, &theta, opts)?;
            write!(out, "{report}")?;
            Ok(if report.all_pass() { EXIT_OK } else { EXIT_INVALID })
        }
    }
}
