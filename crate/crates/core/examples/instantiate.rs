//! Shows the separated pair of a formula and the clauses its 0-instantiation adds.

use maxdiff::frontend::{parse_problem, print_formula};
use maxdiff::instantiate::{instantiate, simplify_units};
use maxdiff::kernel::{Formula, IndexTheory, TermStore};
use maxdiff::preprocess::preprocess;

fn main() -> maxdiff::Result<()> {
    let mut store = TermStore::new();
    let problem = parse_problem(&mut store, include_str!("../fixtures/four_atoms.ard"))?;
    let pair = preprocess(&mut store, &problem.formula())?;
    println!("definitions:");
    for atom in &pair.phi1 {
        let l = atom.to_literal(&mut store);
        println!("  {}", print_formula(&mut store, &Formula::Lit(l), false));
    }
    let inst = instantiate(&mut store, &pair, 0, IndexTheory::TotalOrder);
    let clauses: Vec<_> = inst.phi2.iter().map(|e| e.formula.literals()).collect();
    println!("ground clauses after unit simplification:");
    for c in simplify_units(&clauses) {
        println!("  {}", print_formula(&mut store, &Formula::clause(c), false));
    }
    Ok(())
}
