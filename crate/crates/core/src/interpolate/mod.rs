//! Quantifier-free interpolation for arrays with maxdiff.

pub mod ard;
pub mod exchange;
pub mod proof;
pub mod summary;

pub use ard::{
    ard_interpolate, run_loop, unname_diffs, DiffName, Interpolant, InterpolationConfig, InterpolationOutcome,
    LoopState,
};
pub use exchange::{combine_interpolants, euf_interpolate, Language, Vocabulary};
pub use proof::{interpolate_proof, leaf_interpolant, LeafMethod};
pub use summary::{summary, to_interpolate};

use std::collections::BTreeSet;

use crate::kernel::{Literal, TermStore, VarId};

/// The side of a literal: local to `A`, local to `B`, or over common symbols only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LiteralColor {
    A,
    B,
    Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColoredLiteral {
    pub literal: Literal,
    pub color: LiteralColor,
}

impl ColoredLiteral {
    /// Colors a literal given the common symbols and the side it was asserted on.
    pub fn new(store: &TermStore, literal: Literal, common: &BTreeSet<VarId>, asserted: LiteralColor) -> Self {
        let mut vars = BTreeSet::new();
        for t in literal.atom.terms() {
            store.collect_vars(t, &mut vars);
        }
        let color = if vars.is_subset(common) { LiteralColor::Common } else { asserted };
        ColoredLiteral { literal, color }
    }
}
