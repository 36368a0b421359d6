//! Parses a formula with `let` and iterated diffs, then prints it back with sharing.

use maxdiff::frontend::{parse_formula, print_formula};
use maxdiff::kernel::{Formula, Literal, Sort, TermStore};

fn main() -> maxdiff::Result<()> {
    let mut store = TermStore::new();
    for (name, sort) in [("a", Sort::Array), ("b", Sort::Array), ("i", Sort::Index)] {
        store.declare(name, sort)?;
    }
    let f = parse_formula(&mut store, "(let ((d (diff a b))) (=> (< 0 d) (not (= (rd a d) (rd b d)))))")?;
    println!("{}", print_formula(&mut store, &f, false));
    let (a, b, i) = (store.lookup("a").unwrap(), store.lookup("b").unwrap(), store.lookup("i").unwrap());
    let (a, b, i) = (store.var_term(a), store.var_term(b), store.var_term(i));
    let d3 = store.diff_k(3, a, b);
    let g = Formula::Lit(Literal::eq(&store, i, d3));
    println!("{}", print_formula(&mut store, &g, true));
    Ok(())
}
