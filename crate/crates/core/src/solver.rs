//! The decision procedure: preprocessing into a separated pair, 0-instantiation, ground
//! solving, and lifting of ground models to array models.

use crate::error::{Error, Result};
use crate::instantiate::instantiate;
use crate::kernel::{Formula, IndexTheory, Sort, TermStore};
use crate::oracle::{model_from_ground, ArrayValue, FiniteArrayModel};
use crate::preprocess::{preprocess, preprocess_dnf, SeparatedPair};
use crate::toeuf::{search, Color, Ownership, SearchOutcome};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Sat(FiniteArrayModel),
    Unsat,
}

impl Decision {
    pub fn is_sat(&self) -> bool {
        matches!(self, Decision::Sat(_))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecideOptions {
    pub theory: IndexTheory,
    /// Expand the Boolean structure into disjunctive normal form up front instead of
    /// splitting disjunctions lazily.
    pub dnf: bool,
}

pub fn decide(store: &mut TermStore, theory: IndexTheory, f: &Formula) -> Result<Decision> {
    decide_with(store, DecideOptions { theory, dnf: false }, f)
}

/// Decides satisfiability of a quantifier-free formula. A returned model is checked against
/// the input; a mismatch is reported as an internal error.
pub fn decide_with(store: &mut TermStore, opts: DecideOptions, f: &Formula) -> Result<Decision> {
    let pairs = if opts.dnf {
        preprocess_dnf(store, f)?
    } else {
        vec![preprocess(store, f)?]
    };
    for pair in pairs {
        if let Some(mut m) = decide_pair(store, opts.theory, &pair)? {
            for v in f.free_symbols(store) {
                match store.var_info(v).sort {
                    Sort::Index => {
                        m.index.entry(v).or_insert(0);
                    }
                    Sort::Elem => {
                        m.elem.entry(v).or_insert(0);
                    }
                    Sort::Array => {
                        m.arrays.entry(v).or_insert_with(ArrayValue::new);
                    }
                }
            }
            if !m.evaluate(store, f)? {
                return Err(Error::internal("the constructed model does not satisfy the input"));
            }
            return Ok(Decision::Sat(m));
        }
    }
    Ok(Decision::Unsat)
}

/// The ground formulas of the 0-instantiation of a pair.
pub fn ground_formulas(store: &mut TermStore, theory: IndexTheory, pair: &SeparatedPair) -> Vec<Formula> {
    instantiate(store, pair, 0, theory)
        .phi2
        .into_iter()
        .map(|e| e.formula)
        .collect()
}

/// Satisfiability of one separated pair, with a lifted model when satisfiable.
pub fn decide_pair(store: &mut TermStore, theory: IndexTheory, pair: &SeparatedPair) -> Result<Option<FiniteArrayModel>> {
    let inst = instantiate(store, pair, 0, theory);
    let items: Vec<(Formula, Color)> = inst.phi2.iter().map(|e| (e.formula.clone(), Color::A)).collect();
    match search(store, theory, &items, &Ownership::default())? {
        SearchOutcome::Sat(gm) => Ok(Some(model_from_ground(store, &inst, &gm)?)),
        SearchOutcome::Unsat(_) => Ok(None),
    }
}
