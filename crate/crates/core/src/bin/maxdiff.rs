use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use maxdiff::frontend::{run_cli, CliConfig, Mode};
use maxdiff::kernel::IndexTheory;
use maxdiff::oracle::Bounds;

/// Satisfiability and interpolation for arrays with maxdiff.
#[derive(Parser)]
#[command(version)]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Index theory, overriding the one set in the input (TO or IDL).
    #[arg(long, global = true)]
    index_theory: Option<IndexTheory>,
    /// Largest instantiation level tried under IDL.
    #[arg(long, global = true, default_value_t = 8)]
    budget: usize,
    /// Verify answers with the model checker and bounded model search.
    #[arg(long, global = true)]
    check_answers: bool,
    /// Largest index chain for bounded model search; 0 means the completeness threshold.
    #[arg(long, global = true, default_value_t = 5)]
    max_chain: usize,
    /// Largest number of element tokens for bounded model search; 0 means exhaustive.
    #[arg(long, global = true, default_value_t = 4)]
    max_elems: u32,
    /// Expand disjunctions up front when deciding satisfiability.
    #[arg(long, global = true)]
    dnf: bool,
    /// Bind repeated subterms of interpolants with let.
    #[arg(long, global = true)]
    share: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability of a problem file.
    Sat { input: PathBuf },
    /// Compute an interpolant of the assertions of two files.
    Interpolate { a: PathBuf, b: PathBuf },
    /// Check a candidate interpolant against two files.
    Check { a: PathBuf, b: PathBuf, interpolant: PathBuf },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mode = match args.command {
        Command::Sat { input } => Mode::Sat { input },
        Command::Interpolate { a, b } => Mode::Interpolate { a, b },
        Command::Check { a, b, interpolant } => Mode::Check { a, b, interpolant },
    };
    let config = CliConfig {
        index_theory: args.index_theory,
        budget: args.budget,
        check_answers: args.check_answers,
        bounds: Bounds {
            max_chain: (args.max_chain > 0).then_some(args.max_chain),
            max_elems: (args.max_elems > 0).then_some(args.max_elems),
        },
        dnf: args.dnf,
        share: args.share,
        ..CliConfig::new(mode)
    };
    let code = run_cli(&config, &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code as u8)
}
