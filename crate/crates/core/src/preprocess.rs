//! Reduction of quantifier-free input to separated pairs: array equalities are eliminated,
//! definitional array facts are split from ground index/element facts.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::kernel::{flatten_formula, Atom, Flattened, Formula, Literal, Op, Sort, TermId, TermStore};

/// A definitional array fact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phi1Atom {
    /// `a = wr(b, i, e)`
    Write {
        a: TermId,
        b: TermId,
        i: TermId,
        e: TermId,
    },
    /// `diff_k(a, b) = i`
    Diff { k: u32, a: TermId, b: TermId, i: TermId },
}

impl Phi1Atom {
    pub fn to_literal(&self, store: &mut TermStore) -> Literal {
        match *self {
            Phi1Atom::Write { a, b, i, e } => {
                let w = store.wr(b, i, e);
                Literal::eq(store, a, w)
            }
            Phi1Atom::Diff { k, a, b, i } => {
                let d = store.diff_k(k, a, b);
                Literal::eq(store, i, d)
            }
        }
    }
}

/// Where a ground formula of a separated pair comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Input,
    /// Equates two names given to the same chain position.
    ChainMerge,
    /// `i >= 0 -> rd(a, i) = e` for the write atom at this position of `phi1`.
    WriteGround(usize),
    /// An instance of `h != i -> rd(a, h) = rd(b, h)` for the write atom at this position.
    WriteInstance(usize),
    /// A ground chain clause for the ordered array pair.
    ChainGround(TermId, TermId),
    /// An instance of the chain's universal clause.
    ChainInstance(TermId, TermId),
    /// An instance of `rd(eps, h) = bot`.
    EpsAxiom,
    /// An instance of `h < 0 -> rd(a, h) = bot`.
    NegativeAxiom(TermId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phi2Entry {
    pub formula: Formula,
    pub origin: Origin,
}

/// Definitional array facts (`phi1`) and ground facts over indexes and reads (`phi2`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SeparatedPair {
    pub phi1: Vec<Phi1Atom>,
    pub phi2: Vec<Phi2Entry>,
}

impl SeparatedPair {
    /// Diff chains grouped by ordered array pair; entry `l-1` names `diff_l`.
    pub fn chains(&self) -> BTreeMap<(TermId, TermId), Vec<TermId>> {
        let mut out: BTreeMap<(TermId, TermId), BTreeMap<u32, TermId>> = BTreeMap::new();
        for atom in &self.phi1 {
            if let Phi1Atom::Diff { k, a, b, i } = *atom {
                out.entry((a, b)).or_default().entry(k).or_insert(i);
            }
        }
        out.into_iter()
            .map(|(key, levels)| (key, levels.into_values().collect()))
            .collect()
    }

    pub fn writes(&self) -> impl Iterator<Item = (usize, TermId, TermId, TermId, TermId)> + '_ {
        self.phi1.iter().enumerate().filter_map(|(n, atom)| match *atom {
            Phi1Atom::Write { a, b, i, e } => Some((n, a, b, i, e)),
            Phi1Atom::Diff { .. } => None,
        })
    }

    /// All terms of the pair, subterms included.
    pub fn subterms(&self, store: &mut TermStore) -> Vec<TermId> {
        let mut out = Vec::new();
        for atom in self.phi1.clone() {
            let l = atom.to_literal(store);
            for t in l.atom.terms() {
                store.collect_subterms(t, &mut out);
            }
        }
        for entry in &self.phi2 {
            out.extend(entry.formula.subterms(store));
        }
        let mut seen = std::collections::HashSet::new();
        out.retain(|t| seen.insert(*t));
        out
    }

    /// Variables of the given sort occurring anywhere in the pair, as terms.
    pub fn vars_of_sort(&self, store: &mut TermStore, sort: Sort) -> BTreeSet<TermId> {
        self.subterms(store)
            .into_iter()
            .filter(|&t| store.var_of(t).is_some() && store.sort(t) == sort)
            .collect()
    }

    /// Free variables of the pair.
    pub fn symbols(&self, store: &mut TermStore) -> BTreeSet<crate::kernel::VarId> {
        self.subterms(store)
            .into_iter()
            .filter_map(|t| store.var_of(t))
            .collect()
    }

    pub fn to_formula(&self, store: &mut TermStore) -> Formula {
        let mut parts: Vec<Formula> = self
            .phi1
            .iter()
            .map(|a| Formula::Lit(a.to_literal(store)))
            .collect();
        parts.extend(self.phi2.iter().map(|e| e.formula.clone()));
        Formula::and(parts)
    }

    /// Checks prefix closure of chains and the grammar of `phi2`.
    pub fn check_well_formed(&self, store: &TermStore) -> Result<()> {
        let mut levels: HashMap<(TermId, TermId), BTreeSet<u32>> = HashMap::new();
        for atom in &self.phi1 {
            if let Phi1Atom::Diff { k, a, b, .. } = *atom {
                levels.entry((a, b)).or_default().insert(k);
            }
        }
        for ((a, b), ks) in &levels {
            let max = *ks.iter().max().unwrap();
            if ks.len() as u32 != max {
                return Err(Error::internal(format!(
                    "diff chain for ({a:?}, {b:?}) is not prefix closed"
                )));
            }
        }
        for entry in &self.phi2 {
            let mut ok = true;
            entry
                .formula
                .visit_literals(&mut |l| ok &= is_phi2_literal(store, l));
            if !ok {
                return Err(Error::internal("phi2 formula outside the ground grammar"));
            }
        }
        Ok(())
    }
}

fn is_index_term(store: &TermStore, t: TermId) -> bool {
    store.sort(t) == Sort::Index
        && match store.op(t) {
            Op::Var(_) | Op::Zero => true,
            Op::Succ | Op::Pred => is_index_term(store, store.args(t)[0]),
            _ => false,
        }
}

fn is_elem_term(store: &TermStore, t: TermId) -> bool {
    match store.op(t) {
        Op::Var(_) | Op::Bot => store.sort(t) == Sort::Elem,
        Op::Rd => {
            let [a, i] = [store.args(t)[0], store.args(t)[1]];
            store.is_atomic(a) && is_index_term(store, i)
        }
        _ => false,
    }
}

/// Literals allowed in `phi2`: index-theory atoms and equalities between reads and elements.
pub fn is_phi2_literal(store: &TermStore, l: &Literal) -> bool {
    let [s, t] = l.atom.terms();
    match store.sort(s) {
        Sort::Index => is_index_term(store, s) && is_index_term(store, t),
        Sort::Elem => matches!(l.atom, Atom::Eq(..)) && is_elem_term(store, s) && is_elem_term(store, t),
        Sort::Array => false,
    }
}

/// Replaces equalities between array terms by index and read facts:
/// `a = b` becomes `diff(a,b) = 0 ∧ rd(a,0) = rd(b,0)`; `a != b` becomes
/// `diff(a,b) = k ∧ (0 < k ∨ rd(a,0) != rd(b,0))` with `k` fresh.
/// Top-level positive equalities use the constant `0` in place of `k`.
pub fn rewrite_array_equalities(store: &mut TermStore, flat: &mut Flattened) {
    let mut names: HashMap<(TermId, TermId), TermId> = HashMap::new();
    let mut new_top = Vec::new();
    let mut extra_nested = Vec::new();
    let zero = store.zero();
    let top = std::mem::take(&mut flat.top);
    for lit in top {
        match array_eq(store, &lit) {
            Some((a, b)) if lit.positive => {
                let d = store.diff(a, b);
                new_top.push(Literal::eq(store, zero, d));
                let (ra, rb) = (store.rd(a, zero), store.rd(b, zero));
                new_top.push(Literal::eq(store, ra, rb));
            }
            Some((a, b)) => {
                let k = diff_name(store, &mut names, flat, &mut new_top, a, b);
                extra_nested.push(negative_array_eq(store, a, b, k));
            }
            None => new_top.push(lit),
        }
    }
    let nested = std::mem::take(&mut flat.nested);
    let mut rewritten = Vec::new();
    for f in nested {
        rewritten.push(rewrite_nested(store, &mut names, flat, &mut new_top, &f));
    }
    rewritten.extend(extra_nested);
    flat.top = new_top;
    flat.nested = rewritten;
}

fn array_eq(store: &TermStore, lit: &Literal) -> Option<(TermId, TermId)> {
    match lit.atom {
        Atom::Eq(a, b) if store.sort(a) == Sort::Array && store.is_atomic(b) => Some((a, b)),
        _ => None,
    }
}

fn diff_name(
    store: &mut TermStore,
    names: &mut HashMap<(TermId, TermId), TermId>,
    flat: &mut Flattened,
    top: &mut Vec<Literal>,
    a: TermId,
    b: TermId,
) -> TermId {
    if let Some(&k) = names.get(&(a, b)) {
        return k;
    }
    let k = store.fresh_var(Sort::Index, "k");
    let d = store.diff(a, b);
    top.push(Literal::eq(store, k, d));
    flat.fresh.push(k);
    names.insert((a, b), k);
    k
}

fn negative_array_eq(store: &mut TermStore, a: TermId, b: TermId, k: TermId) -> Formula {
    let zero = store.zero();
    let (ra, rb) = (store.rd(a, zero), store.rd(b, zero));
    Formula::Or(vec![
        Formula::Lit(Literal::lt(zero, k)),
        Formula::Lit(Literal::ne(store, ra, rb)),
    ])
}

fn rewrite_nested(
    store: &mut TermStore,
    names: &mut HashMap<(TermId, TermId), TermId>,
    flat: &mut Flattened,
    top: &mut Vec<Literal>,
    f: &Formula,
) -> Formula {
    match f {
        Formula::Lit(lit) => match array_eq(store, lit) {
            Some((a, b)) => {
                let k = diff_name(store, names, flat, top, a, b);
                if lit.positive {
                    let zero = store.zero();
                    let (ra, rb) = (store.rd(a, zero), store.rd(b, zero));
                    Formula::And(vec![
                        Formula::Lit(Literal::eq(store, k, zero)),
                        Formula::Lit(Literal::eq(store, ra, rb)),
                    ])
                } else {
                    negative_array_eq(store, a, b, k)
                }
            }
            None => f.clone(),
        },
        Formula::Not(g) => Formula::not(rewrite_nested(store, names, flat, top, g)),
        Formula::And(gs) => Formula::And(
            gs.iter()
                .map(|g| rewrite_nested(store, names, flat, top, g))
                .collect(),
        ),
        Formula::Or(gs) => Formula::Or(
            gs.iter()
                .map(|g| rewrite_nested(store, names, flat, top, g))
                .collect(),
        ),
        Formula::True | Formula::False => f.clone(),
    }
}

/// Disjunctive normal form by distribution: the formula is equivalent to the disjunction
/// of the returned conjunctions. Expects negation normal form.
pub fn split_disjunctions(f: &Formula) -> Vec<Vec<Literal>> {
    match f {
        Formula::True => vec![vec![]],
        Formula::False => vec![],
        Formula::Lit(l) => vec![vec![*l]],
        Formula::Not(g) => split_disjunctions(&g.nnf_negated()),
        Formula::Or(gs) => gs.iter().flat_map(split_disjunctions).collect(),
        Formula::And(gs) => {
            let mut acc: Vec<Vec<Literal>> = vec![vec![]];
            for g in gs {
                let parts = split_disjunctions(g);
                let mut next = Vec::with_capacity(acc.len() * parts.len());
                for prefix in &acc {
                    for p in &parts {
                        let mut c = prefix.clone();
                        for l in p {
                            if !c.contains(l) {
                                c.push(*l);
                            }
                        }
                        next.push(c);
                    }
                }
                acc = next;
            }
            acc
        }
    }
}

impl Formula {
    fn nnf_negated(&self) -> Formula {
        Formula::Not(Box::new(self.clone())).nnf()
    }
}

/// Splits a conjunction of flat literals into definitional and ground facts.
pub fn to_separated_pair(store: &mut TermStore, conj: &[Literal]) -> Result<SeparatedPair> {
    separate(store, conj, &[])
}

/// Builds a separated pair from top-level flat literals and nested ground formulas.
/// Gaps in a diff chain are padded with fresh names; a second name for an existing chain
/// position is equated with the first in `phi2`.
pub fn separate(store: &mut TermStore, top: &[Literal], nested: &[Formula]) -> Result<SeparatedPair> {
    let mut pair = SeparatedPair::default();
    let mut chain_levels: BTreeMap<(TermId, TermId), BTreeMap<u32, TermId>> = BTreeMap::new();
    let mut chain_order: Vec<(TermId, TermId)> = Vec::new();
    let mut seen_phi2 = std::collections::HashSet::new();
    let mut push_phi2 = |pair: &mut SeparatedPair, formula: Formula, origin: Origin| {
        if seen_phi2.insert(formula.clone()) {
            pair.phi2.push(Phi2Entry { formula, origin });
        }
    };
    for lit in top {
        if let Some(atom) = phi1_atom(store, lit) {
            match atom {
                Phi1Atom::Write { .. } => {
                    if !pair.phi1.contains(&atom) {
                        pair.phi1.push(atom);
                    }
                }
                Phi1Atom::Diff { k, a, b, i } => {
                    if !chain_levels.contains_key(&(a, b)) {
                        chain_order.push((a, b));
                    }
                    let levels = chain_levels.entry((a, b)).or_default();
                    match levels.get(&k) {
                        Some(&first) if first != i => {
                            let eq = Formula::Lit(Literal::eq(store, first, i));
                            push_phi2(&mut pair, eq, Origin::ChainMerge);
                        }
                        Some(_) => {}
                        None => {
                            levels.insert(k, i);
                        }
                    }
                }
            }
            continue;
        }
        if !is_phi2_literal(store, lit) {
            return Err(Error::internal(format!(
                "literal {lit:?} fits neither part of a separated pair"
            )));
        }
        push_phi2(&mut pair, Formula::Lit(*lit), Origin::Input);
    }
    for f in nested {
        let mut ok = true;
        f.visit_literals(&mut |l| ok &= is_phi2_literal(store, l));
        if !ok {
            return Err(Error::internal(format!(
                "nested formula {f:?} contains a non-ground literal"
            )));
        }
        match f {
            Formula::True => {}
            f => push_phi2(&mut pair, f.clone(), Origin::Input),
        }
    }
    for (a, b) in chain_order {
        let levels = &chain_levels[&(a, b)];
        let max = *levels.keys().max().unwrap();
        for k in 1..=max {
            let i = match levels.get(&k) {
                Some(&i) => i,
                None => store.fresh_var(Sort::Index, "k"),
            };
            pair.phi1.push(Phi1Atom::Diff { k, a, b, i });
        }
    }
    Ok(pair)
}

fn phi1_atom(store: &TermStore, lit: &Literal) -> Option<Phi1Atom> {
    if !lit.positive {
        return None;
    }
    let Atom::Eq(x, t) = lit.atom else {
        return None;
    };
    if !store.is_atomic(x) {
        return None;
    }
    let args = store.args(t);
    match store.op(t) {
        Op::Wr if store.is_atomic(args[0]) && store.is_atomic(args[1]) && store.is_atomic(args[2]) => {
            Some(Phi1Atom::Write {
                a: x,
                b: args[0],
                i: args[1],
                e: args[2],
            })
        }
        Op::Diff(k) if store.is_atomic(args[0]) && store.is_atomic(args[1]) => Some(Phi1Atom::Diff {
            k,
            a: args[0],
            b: args[1],
            i: x,
        }),
        _ => None,
    }
}

/// Flattening, array-equality elimination and separation of a whole formula. Disjunctions
/// stay in `phi2`, where the ground search splits them lazily.
pub fn preprocess(store: &mut TermStore, f: &Formula) -> Result<SeparatedPair> {
    let nnf = f.nnf();
    let mut flat = flatten_formula(store, &nnf);
    rewrite_array_equalities(store, &mut flat);
    separate(store, &flat.top, &flat.nested)
}

/// Like [`preprocess`], but expands the Boolean structure into disjunctive normal form and
/// returns one separated pair per disjunct.
pub fn preprocess_dnf(store: &mut TermStore, f: &Formula) -> Result<Vec<SeparatedPair>> {
    let nnf = f.nnf();
    let mut flat = flatten_formula(store, &nnf);
    rewrite_array_equalities(store, &mut flat);
    let body = flat.to_formula();
    split_disjunctions(&body)
        .into_iter()
        .map(|conj| to_separated_pair(store, &conj))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Fx {
        s: TermStore,
        a: TermId,
        b: TermId,
        i: TermId,
        e: TermId,
    }

    fn fx() -> Fx {
        let mut s = TermStore::new();
        let a = s.declare("a", Sort::Array).unwrap();
        let b = s.declare("b", Sort::Array).unwrap();
        let i = s.declare("i", Sort::Index).unwrap();
        let e = s.declare("e", Sort::Elem).unwrap();
        Fx {
            a: s.var_term(a),
            b: s.var_term(b),
            i: s.var_term(i),
            e: s.var_term(e),
            s,
        }
    }

    #[test]
    fn positive_array_equality() {
        let Fx { mut s, a, b, .. } = fx();
        let mut flat = Flattened {
            top: vec![Literal::eq(&s, a, b)],
            ..Default::default()
        };
        rewrite_array_equalities(&mut s, &mut flat);
        let z = s.zero();
        let d = s.diff(a, b);
        let (ra, rb) = (s.rd(a, z), s.rd(b, z));
        assert_eq!(flat.top, vec![Literal::eq(&s, z, d), Literal::eq(&s, ra, rb)]);
        assert!(flat.nested.is_empty());
    }

    #[test]
    fn negative_array_equality() {
        let Fx { mut s, a, b, .. } = fx();
        let mut flat = Flattened {
            top: vec![Literal::ne(&s, a, b)],
            ..Default::default()
        };
        rewrite_array_equalities(&mut s, &mut flat);
        assert_eq!(flat.fresh.len(), 1);
        let k = flat.fresh[0];
        let d = s.diff(a, b);
        assert_eq!(flat.top, vec![Literal::eq(&s, k, d)]);
        let z = s.zero();
        let (ra, rb) = (s.rd(a, z), s.rd(b, z));
        assert_eq!(
            flat.nested,
            vec![Formula::Or(vec![
                Formula::Lit(Literal::lt(z, k)),
                Formula::Lit(Literal::ne(&s, ra, rb)),
            ])]
        );
    }

    #[test]
    fn reflexive_array_equality() {
        let Fx { mut s, a, .. } = fx();
        let mut flat = Flattened {
            top: vec![Literal::eq(&s, a, a)],
            ..Default::default()
        };
        rewrite_array_equalities(&mut s, &mut flat);
        let z = s.zero();
        let d = s.diff(a, a);
        let ra = s.rd(a, z);
        assert_eq!(flat.top, vec![Literal::eq(&s, z, d), Literal::eq(&s, ra, ra)]);
    }

    #[test]
    fn split_distributes() {
        let Fx { s, i, .. } = fx();
        let z = s.zero();
        let p = Literal::le(i, z);
        let q = Literal::lt(z, i);
        let r = Literal::eq(&s, i, z);
        let f = Formula::And(vec![
            Formula::Or(vec![Formula::Lit(p), Formula::Lit(q)]),
            Formula::Lit(r),
        ]);
        assert_eq!(split_disjunctions(&f), vec![vec![p, r], vec![q, r]]);
        assert_eq!(split_disjunctions(&Formula::Lit(p)), vec![vec![p]]);
    }

    #[test]
    fn separation_routes_atoms() {
        let Fx { mut s, a, b, i, e } = fx();
        let j = s.declare("j", Sort::Index).unwrap();
        let j = s.var_term(j);
        let e2 = s.declare("e2", Sort::Elem).unwrap();
        let e2 = s.var_term(e2);
        let w = s.wr(b, i, e);
        let r = s.rd(a, j);
        let lits = [Literal::eq(&s, a, w), Literal::eq(&s, e2, r)];
        let pair = to_separated_pair(&mut s, &lits).unwrap();
        assert_eq!(pair.phi1, vec![Phi1Atom::Write { a, b, i, e }]);
        assert_eq!(pair.phi2.len(), 1);
        assert_eq!(pair.phi2[0].formula, Formula::Lit(lits[1]));
        assert_eq!(to_separated_pair(&mut s, &[]).unwrap(), SeparatedPair::default());
    }

    #[test]
    fn chain_gaps_are_padded() {
        let Fx { mut s, a, b, i, .. } = fx();
        let d3 = s.diff_k(3, a, b);
        let lit = Literal::eq(&s, i, d3);
        let pair = to_separated_pair(&mut s, &[lit]).unwrap();
        assert_eq!(pair.phi1.len(), 3);
        pair.check_well_formed(&s).unwrap();
        let chains = pair.chains();
        assert_eq!(chains[&(a, b)][2], i);
    }

    #[test]
    fn duplicate_chain_names_are_merged() {
        let Fx { mut s, a, b, i, .. } = fx();
        let j = s.declare("j", Sort::Index).unwrap();
        let j = s.var_term(j);
        let d = s.diff(a, b);
        let lits = [Literal::eq(&s, i, d), Literal::eq(&s, j, d)];
        let pair = to_separated_pair(&mut s, &lits).unwrap();
        assert_eq!(pair.phi1.len(), 1);
        assert_eq!(pair.phi2[0].formula, Formula::Lit(Literal::eq(&s, i, j)));
        assert_eq!(pair.phi2[0].origin, Origin::ChainMerge);
    }

    #[test]
    fn non_flat_literal_is_rejected() {
        let Fx { mut s, a, b, .. } = fx();
        let lit = Literal::ne(&s, a, b);
        assert!(matches!(
            to_separated_pair(&mut s, &[lit]),
            Err(Error::Internal(_))
        ));
    }
}
