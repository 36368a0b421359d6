//! Iterated-diff clauses, universal templates and their instantiation over index terms.

use std::collections::{BTreeSet, HashSet};

use crate::kernel::{Atom, Formula, IndexTheory, Literal, Sort, TermId, TermStore};
use crate::preprocess::{Origin, Phi2Entry, SeparatedPair};

/// A universally quantified clause `∀h. clause(h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub hole: TermId,
    pub clause: Vec<Literal>,
    pub origin: Origin,
}

impl Template {
    /// The instance at `t`, with syntactically false literals removed; `None` when the
    /// instance is a tautology.
    pub fn instance(&self, store: &mut TermStore, t: TermId) -> Option<Vec<Literal>> {
        let map = std::collections::HashMap::from([(self.hole, t)]);
        let lits: Vec<Literal> = self
            .clause
            .iter()
            .map(|l| {
                let [x, y] = l.atom.terms();
                let (x, y) = (store.substitute(x, &map), store.substitute(y, &map));
                Literal {
                    atom: l.atom.with_terms(store, x, y),
                    positive: l.positive,
                }
            })
            .collect();
        simplify_clause(lits)
    }
}

/// Drops syntactically false literals; `None` if some literal is syntactically true.
pub fn simplify_clause(lits: Vec<Literal>) -> Option<Vec<Literal>> {
    let mut out = Vec::with_capacity(lits.len());
    for l in lits {
        match l.trivial_value() {
            Some(true) => return None,
            Some(false) => {}
            None => {
                if !out.contains(&l) {
                    out.push(l);
                }
            }
        }
    }
    Some(out)
}

/// `(b_1..b_l, diff_1(a,b)..diff_l(a,b))`, every `diff_k` unfolded into plain `diff`.
pub fn diff_chain_terms(store: &mut TermStore, a: TermId, b: TermId, l: usize) -> (Vec<TermId>, Vec<TermId>) {
    store.diff_chain(a, b, l)
}

/// Clauses characterizing `diff_1(a,b) = k_1, ..., diff_l(a,b) = k_l`:
/// the ground part says the names decrease to `0`, strictly unless they reach `0`, and mark
/// disagreements; the template says `a` and `b` agree above `k_l` except at `k_1..k_{l-1}`.
pub fn diff_chain_clauses(
    store: &mut TermStore,
    a: TermId,
    b: TermId,
    ks: &[TermId],
) -> (Vec<Vec<Literal>>, Template) {
    assert!(!ks.is_empty(), "a diff chain has at least one level");
    let zero = store.zero();
    let l = ks.len();
    let mut ground = Vec::new();
    for j in 0..l - 1 {
        ground.push(vec![Literal::le(ks[j + 1], ks[j])]);
    }
    ground.push(vec![Literal::le(zero, ks[l - 1])]);
    for j in 0..l - 1 {
        let (ra, rb) = (store.rd(a, ks[j]), store.rd(b, ks[j]));
        ground.push(vec![
            Literal::neg(Atom::Lt(ks[j + 1], ks[j])),
            Literal::ne(store, ra, rb),
        ]);
    }
    for j in 0..l - 1 {
        ground.push(vec![
            Literal::ne(store, ks[j], ks[j + 1]),
            Literal::eq(store, ks[j], zero),
        ]);
    }
    for &k in ks {
        let (ra, rb) = (store.rd(a, k), store.rd(b, k));
        ground.push(vec![Literal::ne(store, ra, rb), Literal::eq(store, k, zero)]);
    }
    let ground = ground.into_iter().filter_map(simplify_clause).collect();
    let h = store.hole();
    let (ra, rb) = (store.rd(a, h), store.rd(b, h));
    let mut clause = vec![Literal::neg(Atom::Lt(ks[l - 1], h)), Literal::eq(store, ra, rb)];
    for &k in &ks[..l - 1] {
        clause.push(Literal::eq(store, h, k));
    }
    let template = Template {
        hole: h,
        clause,
        origin: Origin::ChainInstance(a, b),
    };
    (ground, template)
}

/// Clauses characterizing `a = wr(b, i, e)`: `i >= 0 -> rd(a,i) = e` and
/// `∀h. h != i -> rd(a,h) = rd(b,h)`.
pub fn write_clauses(
    store: &mut TermStore,
    a: TermId,
    b: TermId,
    i: TermId,
    e: TermId,
    atom: usize,
) -> (Vec<Literal>, Template) {
    let zero = store.zero();
    let ra = store.rd(a, i);
    let ground = vec![Literal::neg(Atom::Le(zero, i)), Literal::eq(store, ra, e)];
    let h = store.hole();
    let (rah, rbh) = (store.rd(a, h), store.rd(b, h));
    let template = Template {
        hole: h,
        clause: vec![Literal::eq(store, h, i), Literal::eq(store, rah, rbh)],
        origin: Origin::WriteInstance(atom),
    };
    (ground, template)
}

/// Every template and ground clause generated by a pair's `phi1` and by the array axioms.
pub fn templates(store: &mut TermStore, pair: &SeparatedPair) -> (Vec<(Vec<Literal>, Origin)>, Vec<Template>) {
    let mut ground = Vec::new();
    let mut temps = Vec::new();
    for (n, a, b, i, e) in pair.writes().collect::<Vec<_>>() {
        let (g, t) = write_clauses(store, a, b, i, e, n);
        if let Some(g) = simplify_clause(g) {
            ground.push((g, Origin::WriteGround(n)));
        }
        temps.push(t);
    }
    for ((a, b), ks) in pair.chains() {
        let (g, t) = diff_chain_clauses(store, a, b, &ks);
        ground.extend(g.into_iter().map(|c| (c, Origin::ChainGround(a, b))));
        temps.push(t);
    }
    let h = store.hole();
    let (eps, bot, zero) = (store.eps(), store.bot(), store.zero());
    let reps = store.rd(eps, h);
    temps.push(Template {
        hole: h,
        clause: vec![Literal::eq(store, reps, bot)],
        origin: Origin::EpsAxiom,
    });
    for a in pair.vars_of_sort(store, Sort::Array) {
        let ra = store.rd(a, h);
        temps.push(Template {
            hole: h,
            clause: vec![Literal::neg(Atom::Lt(h, zero)), Literal::eq(store, ra, bot)],
            origin: Origin::NegativeAxiom(a),
        });
    }
    (ground, temps)
}

/// Index terms of complexity at most `n` over the pair's index variables and `0`.
/// Under total orders these are just the variables and `0`; under difference logic the
/// towers `S^m(x)`, `P^m(x)` for `m <= n` are added.
pub fn instance_terms(store: &mut TermStore, pair: &SeparatedPair, n: usize, theory: IndexTheory) -> Vec<TermId> {
    let mut base: Vec<TermId> = vec![store.zero()];
    base.extend(pair.vars_of_sort(store, Sort::Index));
    let mut out = base.clone();
    if theory == IndexTheory::DifferenceLogic {
        for &x in &base {
            for m in 1..=n as i64 {
                out.push(store.shift(x, m));
                out.push(store.shift(x, -m));
            }
        }
    }
    let mut seen = HashSet::new();
    out.retain(|t| seen.insert(*t));
    out
}

/// The `n`-instantiation of a pair: `phi1` is unchanged and `phi2` is closed under the
/// ground clauses of `phi1` and all instances of the templates over [`instance_terms`].
pub fn instantiate(store: &mut TermStore, pair: &SeparatedPair, n: usize, theory: IndexTheory) -> SeparatedPair {
    let terms = instance_terms(store, pair, n, theory);
    instantiate_over(store, pair, &terms)
}

/// Instantiation over an explicit set of index terms.
pub fn instantiate_over(store: &mut TermStore, pair: &SeparatedPair, terms: &[TermId]) -> SeparatedPair {
    let (ground, temps) = templates(store, pair);
    let mut out = pair.clone();
    let mut seen: HashSet<Formula> = out.phi2.iter().map(|e| e.formula.clone()).collect();
    let mut push = |out: &mut SeparatedPair, clause: Vec<Literal>, origin: Origin| {
        let f = Formula::clause(clause);
        if seen.insert(f.clone()) {
            out.phi2.push(Phi2Entry { formula: f, origin });
        }
    };
    for (clause, origin) in ground {
        push(&mut out, clause, origin);
    }
    for t in &temps {
        for &x in terms {
            if let Some(clause) = t.instance(store, x) {
                push(&mut out, clause, t.origin);
            }
        }
    }
    out
}

/// Unit simplification over clauses: clauses containing a unit literal are dropped and
/// literals contradicting a unit are removed, until nothing changes. Order literals are
/// compared after rewriting negations by totality.
pub fn simplify_units(clauses: &[Vec<Literal>]) -> Vec<Vec<Literal>> {
    let mut cur: Vec<Vec<Literal>> = clauses
        .iter()
        .map(|c| c.iter().map(|l| l.order_normal()).collect())
        .collect();
    loop {
        let units: BTreeSet<Literal> = cur.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
        let mut changed = false;
        let mut next = Vec::new();
        for c in &cur {
            if c.len() > 1 && c.iter().any(|l| units.contains(l)) {
                changed = true;
                continue;
            }
            let kept: Vec<Literal> = c
                .iter()
                .copied()
                .filter(|l| c.len() == 1 || !units.contains(&l.negate().order_normal()))
                .collect();
            changed |= kept.len() != c.len();
            if !next.contains(&kept) {
                next.push(kept);
            } else {
                changed = true;
            }
        }
        cur = next;
        if !changed {
            return cur;
        }
    }
}
