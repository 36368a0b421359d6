//! Lifting a ground model of an instantiated separated pair to a finite array model.

use std::collections::BTreeSet;

use super::model::{ArrayValue, FiniteArrayModel};
use crate::error::{Error, Result};
use crate::kernel::{Sort, TermStore};
use crate::preprocess::SeparatedPair;
use crate::toeuf::GroundModel;

/// The minimal functional model: indexes take their ground values, each array is read off its
/// ground read table and is `bot` everywhere else. The result is checked against the pair; a
/// failure is reported as an internal error.
pub fn model_from_ground(store: &mut TermStore, pair: &SeparatedPair, gm: &GroundModel) -> Result<FiniteArrayModel> {
    let mut m = FiniteArrayModel::trivial();
    let mut chain: BTreeSet<i64> = BTreeSet::from([0]);
    let mut top = 0;
    for t in pair.subterms(store) {
        let Some(v) = store.var_of(t) else { continue };
        match store.sort(t) {
            Sort::Index => {
                let x = gm.index.get(&t).copied().unwrap_or(0);
                chain.insert(x);
                m.index.insert(v, x);
            }
            Sort::Elem => {
                let e = gm.elem.get(&t).copied().unwrap_or(0);
                top = top.max(e);
                m.elem.insert(v, e);
            }
            Sort::Array => {
                let table: ArrayValue = gm
                    .tables
                    .range((t, i64::MIN)..=(t, i64::MAX))
                    .filter(|(&(_, i), &e)| i >= 0 && e != 0)
                    .map(|(&(_, i), &e)| (i, e))
                    .collect();
                chain.extend(table.keys().copied());
                top = top.max(table.values().copied().max().unwrap_or(0));
                m.arrays.insert(v, table);
            }
        }
    }
    m.chain = chain.into_iter().collect();
    m.elems = top + 1;
    let f = pair.to_formula(store);
    if !m.evaluate(store, &f)? {
        return Err(Error::internal("the ground model does not lift to an array model of the pair"));
    }
    Ok(m)
}
