//! Decides a few formulas and prints a model for each satisfiable one.

use maxdiff::frontend::{parse_problem, print_model};
use maxdiff::kernel::TermStore;
use maxdiff::solver::{decide, Decision};

const PROBLEMS: &[&str] = &[
    include_str!("../fixtures/four_atoms.ard"),
    "(declare-const a Array) (declare-const b Array) (declare-const i Index)
     (assert (= (diff a b) i)) (assert (< 0 i)) (assert (= (rd a i) (rd b i)))",
    "(set-index-theory IDL) (declare-const i Index) (declare-const j Index)
     (assert (< i j)) (assert (< j (S i)))",
];

fn main() -> maxdiff::Result<()> {
    for text in PROBLEMS {
        let mut store = TermStore::new();
        let problem = parse_problem(&mut store, text)?;
        match decide(&mut store, problem.theory(), &problem.formula())? {
            Decision::Sat(m) => println!("sat\n{}", print_model(&store, &m)),
            Decision::Unsat => println!("unsat"),
        }
    }
    Ok(())
}
