//! Sorts, interned terms, literals, formulas and flattening.

mod flatten;
mod formula;
mod term;

pub use flatten::{flatten, flatten_formula, is_flat, Flattened};
pub use formula::{expand_diffs, Atom, Formula, Literal};
pub use term::{Op, Sort, TermId, TermStore, VarId, VarInfo, RESERVED_PREFIX};

/// The theory of indexes: plain total orders, or integer difference logic with `S`/`P`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum IndexTheory {
    #[default]
    TotalOrder,
    DifferenceLogic,
}

impl IndexTheory {
    pub fn name(self) -> &'static str {
        match self {
            IndexTheory::TotalOrder => "TO",
            IndexTheory::DifferenceLogic => "IDL",
        }
    }
}

impl std::str::FromStr for IndexTheory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "TO" | "to" => Ok(IndexTheory::TotalOrder),
            "IDL" | "idl" => Ok(IndexTheory::DifferenceLogic),
            other => Err(format!("unknown index theory `{other}` (expected TO or IDL)")),
        }
    }
}
