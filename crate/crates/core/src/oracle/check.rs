//! Checking the interpolant conditions: `A ∧ ¬θ` and `θ ∧ B` unsatisfiable, and `θ` only
//! mentions symbols common to `A` and `B`.

use std::collections::BTreeSet;

use super::brute::{brute_force_check, Bounds, BruteVerdict};
use super::model::FiniteArrayModel;
use crate::error::Result;
use crate::kernel::{Formula, IndexTheory, TermStore};
use crate::solver::{decide, Decision};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    pub theory: IndexTheory,
    /// Cross-check both unsatisfiability verdicts by bounded model search.
    pub brute: Option<Bounds>,
}

/// The verdict on one unsatisfiability condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub name: &'static str,
    pub holds: bool,
    /// A model of the formula that should be unsatisfiable.
    pub counterexample: Option<FiniteArrayModel>,
    /// `Some(agrees)` when the bounded search ran.
    pub brute_agrees: Option<bool>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub a_implies: Condition,
    pub b_refutes: Condition,
    /// Symbols of the interpolant that are not common to both sides.
    pub foreign_symbols: Vec<String>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.a_implies.holds
            && self.b_refutes.holds
            && self.foreign_symbols.is_empty()
            && self.a_implies.brute_agrees != Some(false)
            && self.b_refutes.brute_agrees != Some(false)
    }
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in [&self.a_implies, &self.b_refutes] {
            write!(f, "{}: {}", c.name, if c.holds { "pass" } else { "FAIL" })?;
            match c.brute_agrees {
                Some(true) => write!(f, " (bounded search agrees)")?,
                Some(false) => write!(f, " (bounded search DISAGREES)")?,
                None => {}
            }
            writeln!(f)?;
            for w in &c.warnings {
                writeln!(f, "  warning: {w}")?;
            }
        }
        if self.foreign_symbols.is_empty() {
            writeln!(f, "symbols: pass")
        } else {
            writeln!(f, "symbols: FAIL ({})", self.foreign_symbols.join(", "))
        }
    }
}

fn condition(store: &mut TermStore, opts: CheckOptions, name: &'static str, f: &Formula) -> Result<Condition> {
    let d = decide(store, opts.theory, f)?;
    let holds = !d.is_sat();
    let mut out = Condition {
        name,
        holds,
        counterexample: match d {
            Decision::Sat(m) => Some(m),
            Decision::Unsat => None,
        },
        brute_agrees: None,
        warnings: Vec::new(),
    };
    if let Some(bounds) = opts.brute {
        let r = brute_force_check(store, opts.theory, f, bounds)?;
        let agrees = match r.verdict {
            BruteVerdict::Sat(_) => !holds,
            BruteVerdict::UnsatWithinBounds => holds || !r.is_complete(),
        };
        out.brute_agrees = Some(agrees);
        out.warnings = r.warnings;
    }
    Ok(out)
}

/// Runs all three checks for `θ` as an interpolant of `(A, B)`.
pub fn check_interpolant(
    store: &mut TermStore,
    a: &Formula,
    b: &Formula,
    theta: &Formula,
    opts: CheckOptions,
) -> Result<CheckReport> {
    let a_not_theta = Formula::and([a.clone(), Formula::not(theta.clone())]);
    let theta_b = Formula::and([theta.clone(), b.clone()]);
    let a_implies = condition(store, opts, "A implies interpolant", &a_not_theta)?;
    let b_refutes = condition(store, opts, "interpolant and B inconsistent", &theta_b)?;
    let common: BTreeSet<_> = a
        .free_symbols(store)
        .intersection(&b.free_symbols(store))
        .copied()
        .collect();
    let foreign_symbols = theta
        .free_symbols(store)
        .difference(&common)
        .map(|v| store.var_name(*v).to_string())
        .collect();
    Ok(CheckReport {
        a_implies,
        b_refutes,
        foreign_symbols,
    })
}
