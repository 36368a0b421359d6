//! Checks a hand-written loop invariant as an interpolant under difference logic.

use maxdiff::frontend::{parse_formula, parse_interpolation};
use maxdiff::kernel::TermStore;
use maxdiff::oracle::{check_interpolant, CheckOptions};

fn main() -> maxdiff::Result<()> {
    let mut store = TermStore::new();
    let p = parse_interpolation(
        &mut store,
        include_str!("../fixtures/strcpy_a.ard"),
        include_str!("../fixtures/strcpy_b.ard"),
    )?;
    let inv = parse_formula(&mut store, include_str!("../fixtures/strcpy_inv.ard"))?;
    let opts = CheckOptions {
        theory: p.a.theory(),
        brute: None,
    };
    let report = check_interpolant(&mut store, &p.a.formula(), &p.b.formula(), &inv, opts)?;
    print!("{report}");
    Ok(())
}
