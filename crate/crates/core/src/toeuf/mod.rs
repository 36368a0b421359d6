//! Ground solving for total orders (or difference logic) combined with uninterpreted
//! functions, where each read `rd(a, i)` is the application of a function `f_a` to `i`.

pub mod cc;
pub mod ground;
pub mod order;
pub mod search;

pub use cc::{CongruenceState, LitId, Reason};
pub use ground::{solve, CycleEdge, GroundModel, GroundOutcome, Skeleton, UnsatCore};
pub use order::{OrderEdge, OrderGraph};
pub use search::{search, search_with, Color, Ownership, Proof, SearchOutcome, SplitColor};

use crate::error::Result;
use crate::kernel::{Formula, IndexTheory, Literal, TermId, TermStore};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroundVerdict {
    Sat(GroundModel),
    Unsat(UnsatCore),
}

impl GroundVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, GroundVerdict::Sat(_))
    }
}

/// Decides a conjunction of ground literals. Under difference logic the order splits are
/// carried out internally; the core is then the union of the cores of all branches.
pub fn check_ground(store: &mut TermStore, theory: IndexTheory, lits: &[Literal]) -> Result<GroundVerdict> {
    check_ground_with(store, theory, lits, &[])
}

/// Like [`check_ground`], with additional terms a returned model must cover.
pub fn check_ground_with(
    store: &mut TermStore,
    theory: IndexTheory,
    lits: &[Literal],
    extra: &[TermId],
) -> Result<GroundVerdict> {
    match solve(store, theory, lits, extra)? {
        GroundOutcome::Sat(m) => return Ok(GroundVerdict::Sat(m)),
        GroundOutcome::Unsat(core) => return Ok(GroundVerdict::Unsat(core)),
        GroundOutcome::Split(..) => {}
    }
    let items: Vec<(Formula, Color)> = lits.iter().map(|l| (Formula::Lit(*l), Color::A)).collect();
    match search_with(store, theory, &items, &Ownership::default(), extra)? {
        SearchOutcome::Sat(m) => Ok(GroundVerdict::Sat(m)),
        SearchOutcome::Unsat(proof) => {
            let used = proof.core();
            let mut ids: Vec<LitId> = lits
                .iter()
                .enumerate()
                .filter(|(_, l)| used.iter().any(|(u, _)| u == *l))
                .map(|(i, _)| i)
                .collect();
            ids.dedup();
            let skeleton = first_leaf(&proof, lits);
            Ok(GroundVerdict::Unsat(UnsatCore { lits: ids, skeleton }))
        }
    }
}

/// Whether a conjunction of ground formulas is satisfiable.
pub fn is_satisfiable(store: &mut TermStore, theory: IndexTheory, formulas: &[Formula]) -> Result<bool> {
    let items: Vec<(Formula, Color)> = formulas.iter().map(|f| (f.clone(), Color::A)).collect();
    Ok(matches!(
        search(store, theory, &items, &Ownership::default())?,
        SearchOutcome::Sat(_)
    ))
}

/// The skeleton of the leftmost leaf, with literal ids pointing into `input`. Leaf literals
/// that are not inputs come from internal splits and keep no id.
fn first_leaf(p: &Proof, input: &[Literal]) -> Skeleton {
    match p {
        Proof::Leaf { skeleton, lits } => {
            let global = |k: LitId| input.iter().position(|l| *l == lits[k].0);
            match skeleton {
                Skeleton::Congruence { diseq } => Skeleton::Congruence {
                    diseq: global(*diseq).expect("disequalities come from the input"),
                },
                Skeleton::Cycle(edges) => Skeleton::Cycle(
                    edges
                        .iter()
                        .map(|e| CycleEdge {
                            lit: e.lit.and_then(global),
                            ..e.clone()
                        })
                        .collect(),
                ),
            }
        }
        Proof::Split { children, .. } => first_leaf(&children[0], input),
    }
}
