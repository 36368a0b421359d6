//! The interpolation loop: name iterated diffs of common arrays in both formulas until the
//! instantiated ground parts become jointly inconsistent, interpolate those, and replace the
//! names by the diff terms they stand for.

use std::collections::{BTreeSet, HashMap};

use super::proof::{interpolate_proof, LeafMethod};
use crate::error::{Error, Result};
use crate::instantiate::instantiate;
use crate::kernel::{flatten_formula, Flattened, Formula, IndexTheory, Literal, Sort, TermId, TermStore, VarId};
use crate::oracle::FiniteArrayModel;
use crate::preprocess::{rewrite_array_equalities, separate, SeparatedPair};
use crate::solver::{decide, Decision};
use crate::toeuf::{search, Color, Ownership, SearchOutcome};

/// A name `k` introduced for `diff_n(c1, c2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiffName {
    pub c1: TermId,
    pub c2: TermId,
    pub n: u32,
    pub k: TermId,
}

/// Bookkeeping of one interpolation query.
#[derive(Clone, Debug)]
pub struct LoopState {
    pub theory: IndexTheory,
    a: Flattened,
    b: Flattened,
    /// Symbols occurring in both input formulas.
    pub common: BTreeSet<VarId>,
    pub names: Vec<DiffName>,
    /// Number of completed loop iterations.
    pub iterations: usize,
    /// Common array variables, sorted by name.
    pub arrays: Vec<TermId>,
    /// Unordered pairs of common arrays in selection order.
    pub pairs: Vec<(TermId, TermId)>,
    /// The pair chosen at each iteration.
    pub trace: Vec<(TermId, TermId)>,
    /// Index variables of the input formulas.
    pub index_vars: usize,
}

impl LoopState {
    pub fn new(store: &mut TermStore, theory: IndexTheory, a: &Formula, b: &Formula) -> Self {
        let (sa, sb) = (a.free_symbols(store), b.free_symbols(store));
        let common: BTreeSet<VarId> = sa.intersection(&sb).copied().collect();
        let mut arrays: Vec<TermId> = common
            .iter()
            .filter(|&&v| store.var_info(v).sort == Sort::Array)
            .map(|&v| store.var_term(v))
            .collect();
        arrays.sort_by(|&x, &y| var_name(store, x).cmp(var_name(store, y)));
        let mut pairs = Vec::new();
        for (n, &x) in arrays.iter().enumerate() {
            for &y in &arrays[n + 1..] {
                pairs.push((x, y));
            }
        }
        let index_vars = sa.union(&sb).filter(|&&v| store.var_info(v).sort == Sort::Index).count();
        LoopState {
            theory,
            a: prepare(store, a),
            b: prepare(store, b),
            common,
            names: Vec::new(),
            iterations: 0,
            arrays,
            pairs,
            trace: Vec::new(),
            index_vars,
        }
    }

    /// Number of common array variables.
    pub fn m(&self) -> usize {
        self.arrays.len()
    }

    /// The iteration bound for total orders, `(m^2 - m)/2 * (n + 1)`.
    pub fn bound(&self) -> usize {
        let m = self.m();
        (m * m - m) / 2 * (self.index_vars + 1)
    }

    /// The instantiation level: `0` under total orders, the iteration count otherwise.
    pub fn level(&self) -> usize {
        match self.theory {
            IndexTheory::TotalOrder => 0,
            IndexTheory::DifferenceLogic => self.iterations,
        }
    }

    /// Common symbols together with the diff names.
    pub fn shared(&self, store: &TermStore) -> BTreeSet<VarId> {
        let mut out = self.common.clone();
        out.extend(self.names.iter().filter_map(|d| store.var_of(d.k)));
        out
    }

    fn named(&self, store: &mut TermStore, side: &Flattened) -> Vec<Literal> {
        let mut top = side.top.clone();
        for d in &self.names {
            let t = store.diff_k(d.n, d.c1, d.c2);
            top.push(Literal::eq(store, d.k, t));
        }
        top
    }

    /// Both sides as instantiated separated pairs.
    pub fn pairs(&self, store: &mut TermStore) -> Result<(SeparatedPair, SeparatedPair)> {
        let mut out = Vec::new();
        for side in [&self.a, &self.b] {
            let top = self.named(store, side);
            let pair = separate(store, &top, &side.nested)?;
            out.push(instantiate(store, &pair, self.level(), self.theory));
        }
        let b = out.pop().unwrap();
        Ok((out.pop().unwrap(), b))
    }

    /// Decides the joint ground part, coloring every formula by its side.
    pub fn ground(&self, store: &mut TermStore) -> Result<SearchOutcome> {
        let (pa, pb) = self.pairs(store)?;
        let shared = self.shared(store);
        let mut owners = Ownership {
            a: pa.symbols(store),
            b: pb.symbols(store),
        };
        owners.a.extend(&shared);
        owners.b.extend(&shared);
        let items: Vec<(Formula, Color)> = pa
            .phi2
            .iter()
            .map(|e| (e.formula.clone(), Color::A))
            .chain(pb.phi2.iter().map(|e| (e.formula.clone(), Color::B)))
            .collect();
        search(store, self.theory, &items, &owners)
    }

    /// Names the next iterated diff of the next pair in round-robin order and counts the
    /// iteration. Without two common arrays only the counter moves.
    pub fn step(&mut self, store: &mut TermStore) {
        self.iterations += 1;
        if self.pairs.is_empty() {
            return;
        }
        let (c1, c2) = self.pairs[self.trace.len() % self.pairs.len()];
        self.trace.push((c1, c2));
        let n = self.names.iter().filter(|d| (d.c1, d.c2) == (c1, c2)).count() as u32 + 1;
        let k = store.fresh_var(Sort::Index, "k");
        self.names.push(DiffName { c1, c2, n, k });
    }
}

fn var_name(store: &TermStore, t: TermId) -> &str {
    store.var_name(store.var_of(t).expect("common arrays are variables"))
}

fn prepare(store: &mut TermStore, f: &Formula) -> Flattened {
    let nnf = f.nnf();
    let mut flat = flatten_formula(store, &nnf);
    rewrite_array_equalities(store, &mut flat);
    flat
}

/// Replaces each diff name by its defining term, unfolded into plain `diff`.
pub fn unname_diffs(store: &mut TermStore, f: &Formula, names: &[DiffName]) -> Formula {
    let mut map = HashMap::new();
    for d in names {
        let (_, diffs) = store.diff_chain(d.c1, d.c2, d.n as usize);
        map.insert(d.k, diffs[d.n as usize - 1]);
    }
    let mut mapped = HashMap::new();
    let mut terms = Vec::new();
    f.visit_literals(&mut |l| terms.extend(l.atom.terms()));
    for t in terms {
        let r = store.substitute(t, &map);
        mapped.insert(t, r);
    }
    f.map_terms(store, &mut |t| mapped[&t])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InterpolationConfig {
    pub theory: IndexTheory,
    /// Largest instantiation level tried under difference logic.
    pub budget: usize,
}

impl Default for InterpolationConfig {
    fn default() -> Self {
        InterpolationConfig {
            theory: IndexTheory::TotalOrder,
            budget: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpolant {
    /// The interpolant over the common symbols.
    pub formula: Formula,
    /// The same formula before diff names were replaced.
    pub named: Formula,
    pub names: Vec<DiffName>,
    /// How each leaf of the ground refutation was interpolated.
    pub methods: Vec<LeafMethod>,
    pub iterations: usize,
    pub trace: Vec<(TermId, TermId)>,
}

impl Interpolant {
    fn constant(formula: Formula) -> Self {
        Interpolant {
            named: formula.clone(),
            formula,
            names: Vec::new(),
            methods: vec![LeafMethod::Trivial],
            iterations: 0,
            trace: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InterpolationOutcome {
    Interpolant(Interpolant),
    /// The two formulas are jointly satisfiable.
    Sat(FiniteArrayModel),
    /// Difference logic only: no interpolant within the budget; `reached` is the last level.
    Unknown { reached: usize },
}

/// Computes an interpolant of `a` and `b`, or a model of their conjunction.
pub fn ard_interpolate(
    store: &mut TermStore,
    a: &Formula,
    b: &Formula,
    config: InterpolationConfig,
) -> Result<InterpolationOutcome> {
    let theory = config.theory;
    if let Decision::Sat(m) = decide(store, theory, &Formula::and([a.clone(), b.clone()]))? {
        return Ok(InterpolationOutcome::Sat(m));
    }
    if !decide(store, theory, a)?.is_sat() {
        return Ok(InterpolationOutcome::Interpolant(Interpolant::constant(Formula::False)));
    }
    if !decide(store, theory, b)?.is_sat() {
        return Ok(InterpolationOutcome::Interpolant(Interpolant::constant(Formula::True)));
    }
    let mut state = LoopState::new(store, theory, a, b);
    run_loop(store, &mut state, config)
}

/// Runs the loop from the given state until the ground parts are inconsistent.
pub fn run_loop(store: &mut TermStore, state: &mut LoopState, config: InterpolationConfig) -> Result<InterpolationOutcome> {
    loop {
        match state.ground(store)? {
            SearchOutcome::Unsat(proof) => {
                let shared = state.shared(store);
                let mut methods = Vec::new();
                let Some(named) = interpolate_proof(store, state.theory, &proof, &shared, &mut methods)? else {
                    return Ok(InterpolationOutcome::Unknown { reached: state.level() });
                };
                let formula = unname_diffs(store, &named, &state.names);
                return Ok(InterpolationOutcome::Interpolant(Interpolant {
                    formula,
                    named,
                    names: state.names.clone(),
                    methods,
                    iterations: state.iterations,
                    trace: state.trace.clone(),
                }));
            }
            SearchOutcome::Sat(_) => match state.theory {
                IndexTheory::TotalOrder if state.iterations >= state.bound() => {
                    return Err(Error::internal(format!(
                        "loop bound {} reached with consistent ground parts",
                        state.bound()
                    )));
                }
                IndexTheory::DifferenceLogic if state.level() >= config.budget => {
                    return Ok(InterpolationOutcome::Unknown { reached: state.level() });
                }
                _ => state.step(store),
            },
        }
    }
}
