//! Interpolants of negative order cycles: each maximal run of `A` edges collapses into one
//! bound between its endpoints.

use crate::error::{Error, Result};
use crate::kernel::{Formula, IndexTheory, Literal, TermId, TermStore};
use crate::toeuf::{Color, CycleEdge};

/// The conjunction of the summary constraints of the maximal `A` paths of a negative cycle,
/// `false` if every edge is from `A` and `true` if every edge is from `B`.
pub fn to_interpolate(store: &mut TermStore, theory: IndexTheory, cycle: &[(CycleEdge, Color)]) -> Result<Formula> {
    let total: i64 = cycle.iter().map(|(e, _)| e.weight).sum();
    if cycle.is_empty() || total >= 0 {
        return Err(Error::internal("order interpolation needs a negative cycle"));
    }
    if cycle.iter().all(|(_, c)| *c == Color::A) {
        return Ok(Formula::False);
    }
    if cycle.iter().all(|(_, c)| *c == Color::B) {
        return Ok(Formula::True);
    }
    let n = cycle.len();
    let start = (0..n)
        .find(|&p| cycle[p].1 == Color::A && cycle[(p + n - 1) % n].1 == Color::B)
        .expect("a mixed cycle has an A run");
    let mut parts = Vec::new();
    let mut p = 0;
    while p < n {
        let (first, color) = &cycle[(start + p) % n];
        if *color == Color::B {
            p += 1;
            continue;
        }
        let mut weight = 0;
        let mut last = first.to;
        while p < n && cycle[(start + p) % n].1 == Color::A {
            let e = &cycle[(start + p) % n].0;
            weight += e.weight;
            last = e.to;
            p += 1;
        }
        parts.push(Formula::Lit(summary(store, theory, first.from, last, weight)?));
    }
    Ok(Formula::and(parts))
}

/// The literal for `0 <= y - x + c`, weakened to `<=`/`<` under total orders.
pub fn summary(store: &mut TermStore, theory: IndexTheory, x: TermId, y: TermId, c: i64) -> Result<Literal> {
    Ok(match (theory, c) {
        (_, 0) => Literal::le(x, y),
        (IndexTheory::TotalOrder, c) if c < 0 => Literal::lt(x, y),
        (IndexTheory::TotalOrder, _) => {
            return Err(Error::internal("positive path weight under a total order"));
        }
        (IndexTheory::DifferenceLogic, -1) => Literal::lt(x, y),
        (IndexTheory::DifferenceLogic, c) => Literal::le(store.shift(x, -c), y),
    })
}
