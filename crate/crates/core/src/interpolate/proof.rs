//! Interpolants of refutation trees: one per leaf, combined with `or` over splits of `A`
//! disjunctions and `and` over splits of `B` disjunctions.

use std::collections::BTreeSet;

use super::exchange::{combine_interpolants, euf_interpolate, Language};
use super::summary::to_interpolate;
use crate::error::{Error, Result};
use crate::kernel::{Formula, IndexTheory, Literal, TermStore, VarId};
use crate::toeuf::{Color, Proof, Skeleton, SplitColor};

/// How a leaf interpolant was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LeafMethod {
    /// One side alone was inconsistent.
    Trivial,
    /// Summaries of the `A` paths of a negative order cycle.
    OrderSummary,
    /// Equalities through shared terms for a congruence conflict.
    Congruence,
    /// Order and equality facts exchanged between the sides.
    Exchange,
}

impl std::fmt::Display for LeafMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LeafMethod::Trivial => "trivial",
            LeafMethod::OrderSummary => "order-summary",
            LeafMethod::Congruence => "congruence",
            LeafMethod::Exchange => "exchange",
        })
    }
}

/// The interpolant of one inconsistent set of colored literals, `None` when the exchange
/// stops without a conflict under difference logic.
pub fn leaf_interpolant(
    store: &mut TermStore,
    theory: IndexTheory,
    lits: &[(Literal, Color)],
    skeleton: &Skeleton,
    common: &BTreeSet<VarId>,
) -> Result<Option<(Formula, LeafMethod)>> {
    let side = |c: Color| -> Vec<Literal> { lits.iter().filter(|(_, k)| *k == c).map(|(l, _)| *l).collect() };
    let (a, b) = (side(Color::A), side(Color::B));
    if b.is_empty() {
        return Ok(Some((Formula::False, LeafMethod::Trivial)));
    }
    if a.is_empty() {
        return Ok(Some((Formula::True, LeafMethod::Trivial)));
    }
    if let (true, Skeleton::Cycle(edges)) = (skeleton.is_pure_cycle(), skeleton) {
        let colored: Vec<_> = edges
            .iter()
            .map(|e| (e.clone(), lits[e.lit.expect("pure cycles have literal edges")].1))
            .collect();
        return Ok(Some((to_interpolate(store, theory, &colored)?, LeafMethod::OrderSummary)));
    }
    if matches!(skeleton, Skeleton::Congruence { .. }) && lits.iter().all(|(l, _)| !l.atom.is_order()) {
        return Ok(Some((euf_interpolate(store, theory, &a, &b, common)?, LeafMethod::Congruence)));
    }
    match combine_interpolants(store, theory, &a, &b, common, Language::Full)? {
        Some(f) => Ok(Some((f, LeafMethod::Exchange))),
        None if theory == IndexTheory::DifferenceLogic => Ok(None),
        None => Err(Error::internal("fact exchange saturated without a conflict")),
    }
}

/// Combines leaf interpolants along the tree; `None` if some leaf has none or a split mixes
/// symbols local to both sides.
pub fn interpolate_proof(
    store: &mut TermStore,
    theory: IndexTheory,
    proof: &Proof,
    common: &BTreeSet<VarId>,
    methods: &mut Vec<LeafMethod>,
) -> Result<Option<Formula>> {
    match proof {
        Proof::Leaf { lits, skeleton } => Ok(leaf_interpolant(store, theory, lits, skeleton, common)?.map(|(f, m)| {
            methods.push(m);
            f
        })),
        Proof::Split { color, children, .. } => {
            let side = match color {
                SplitColor::Side(c) => *c,
                SplitColor::Mixed => return Ok(None),
            };
            let mut parts = Vec::new();
            for c in children {
                match interpolate_proof(store, theory, c, common, methods)? {
                    Some(f) => parts.push(f),
                    None => return Ok(None),
                }
            }
            Ok(Some(match side {
                Color::A => Formula::or(parts),
                Color::B => Formula::and(parts),
            }))
        }
    }
}
