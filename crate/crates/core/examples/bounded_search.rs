//! Searches for finite models directly from the array semantics and compares the verdict
//! with the decision procedure.

use maxdiff::frontend::{parse_problem, print_model};
use maxdiff::kernel::{IndexTheory, TermStore};
use maxdiff::oracle::{brute_force_check, check_metric, Bounds, BruteVerdict};
use maxdiff::solver::decide;

const HEADER: &str = "(declare-const a Array) (declare-const b Array) (declare-const c Array) (declare-const i Index)";

fn main() -> maxdiff::Result<()> {
    for last in ["(= (diff a c) i)", "(not (= (diff a c) i))"] {
        let mut store = TermStore::new();
        let text = format!("{HEADER} (assert (= (diff a b) i)) (assert (< (diff b c) i)) (assert {last})");
        let f = parse_problem(&mut store, &text)?.formula();
        let report = brute_force_check(&mut store, IndexTheory::TotalOrder, &f, Bounds::default())?;
        println!("chain {} elems {} complete {}", report.chain, report.elems, report.is_complete());
        match &report.verdict {
            BruteVerdict::Sat(m) => {
                println!("sat\n{}", print_model(&store, m));
                println!("metric laws: {:?}", check_metric(m));
            }
            BruteVerdict::UnsatWithinBounds => println!("unsat within bounds"),
        }
        let d = decide(&mut store, IndexTheory::TotalOrder, &f)?;
        println!("decision procedure: {}\n", if d.is_sat() { "sat" } else { "unsat" });
    }
    Ok(())
}
