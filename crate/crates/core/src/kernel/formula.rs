use std::collections::BTreeSet;

use super::term::{Op, Sort, TermId, TermStore, VarId};

/// Atomic predicates. `Lt(i, j)` abbreviates `i <= j ∧ i != j` but is kept as its own atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Eq(TermId, TermId),
    Le(TermId, TermId),
    Lt(TermId, TermId),
}

impl Atom {
    /// Canonical equality: atomic terms on the left, ties broken by term id.
    pub fn eq(store: &TermStore, s: TermId, t: TermId) -> Atom {
        let key = |x: TermId| (!store.is_atomic(x), x);
        if key(s) <= key(t) {
            Atom::Eq(s, t)
        } else {
            Atom::Eq(t, s)
        }
    }

    pub fn terms(&self) -> [TermId; 2] {
        match *self {
            Atom::Eq(s, t) | Atom::Le(s, t) | Atom::Lt(s, t) => [s, t],
        }
    }

    pub fn is_order(&self) -> bool {
        !matches!(self, Atom::Eq(..))
    }

    /// Rebuilds the atom over new arguments, re-canonicalizing equalities.
    pub fn with_terms(&self, store: &TermStore, s: TermId, t: TermId) -> Atom {
        match self {
            Atom::Eq(..) => Atom::eq(store, s, t),
            Atom::Le(..) => Atom::Le(s, t),
            Atom::Lt(..) => Atom::Lt(s, t),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            atom,
            positive: true,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            atom,
            positive: false,
        }
    }

    pub fn eq(store: &TermStore, s: TermId, t: TermId) -> Self {
        Literal::pos(Atom::eq(store, s, t))
    }

    pub fn ne(store: &TermStore, s: TermId, t: TermId) -> Self {
        Literal::neg(Atom::eq(store, s, t))
    }

    pub fn le(s: TermId, t: TermId) -> Self {
        Literal::pos(Atom::Le(s, t))
    }

    pub fn lt(s: TermId, t: TermId) -> Self {
        Literal::pos(Atom::Lt(s, t))
    }

    pub fn negate(self) -> Self {
        Literal {
            atom: self.atom,
            positive: !self.positive,
        }
    }

    /// Rewrites negated order atoms using totality: `¬(x<=y)` is `y<x`, `¬(x<y)` is `y<=x`.
    pub fn order_normal(self) -> Self {
        match (self.atom, self.positive) {
            (Atom::Le(s, t), false) => Literal::lt(t, s),
            (Atom::Lt(s, t), false) => Literal::le(t, s),
            _ => self,
        }
    }

    /// `Some(v)` when the literal is syntactically valid or unsatisfiable.
    pub fn trivial_value(&self) -> Option<bool> {
        let [s, t] = self.atom.terms();
        if s != t {
            return None;
        }
        let holds = match self.atom {
            Atom::Eq(..) | Atom::Le(..) => true,
            Atom::Lt(..) => false,
        };
        Some(holds == self.positive)
    }

    pub fn map_terms(&self, store: &TermStore, f: &mut impl FnMut(TermId) -> TermId) -> Self {
        let [s, t] = self.atom.terms();
        Literal {
            atom: self.atom.with_terms(store, f(s), f(t)),
            positive: self.positive,
        }
    }

    pub fn sort(&self, store: &TermStore) -> Sort {
        store.sort(self.atom.terms()[0])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Lit(Literal),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl From<Literal> for Formula {
    fn from(l: Literal) -> Self {
        Formula::Lit(l)
    }
}

impl Formula {
    /// Conjunction with constant folding, flattening and duplicate removal.
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out: Vec<Formula> = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => {
                    for q in inner {
                        if !out.contains(&q) {
                            out.push(q);
                        }
                    }
                }
                p => {
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Disjunction with constant folding, flattening and duplicate removal.
    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out: Vec<Formula> = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => {
                    for q in inner {
                        if !out.contains(&q) {
                            out.push(q);
                        }
                    }
                }
                p => {
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    /// Negation pushed one level: literals flip, constants swap, double negation cancels.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Lit(l) => Formula::Lit(l.negate()),
            Formula::Not(g) => *g,
            g => Formula::Not(Box::new(g)),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or([Formula::not(a), b])
    }

    pub fn clause(lits: impl IntoIterator<Item = Literal>) -> Formula {
        Formula::or(lits.into_iter().map(Formula::Lit))
    }

    pub fn conj(lits: impl IntoIterator<Item = Literal>) -> Formula {
        Formula::and(lits.into_iter().map(Formula::Lit))
    }

    /// Negation normal form: `Not` only survives inside literals.
    pub fn nnf(&self) -> Formula {
        self.nnf_polarity(true)
    }

    fn nnf_polarity(&self, positive: bool) -> Formula {
        match self {
            Formula::True => {
                if positive {
                    Formula::True
                } else {
                    Formula::False
                }
            }
            Formula::False => {
                if positive {
                    Formula::False
                } else {
                    Formula::True
                }
            }
            Formula::Lit(l) => Formula::Lit(if positive { *l } else { l.negate() }),
            Formula::Not(g) => g.nnf_polarity(!positive),
            Formula::And(gs) => {
                let parts = gs.iter().map(|g| g.nnf_polarity(positive));
                if positive {
                    Formula::and(parts)
                } else {
                    Formula::or(parts)
                }
            }
            Formula::Or(gs) => {
                let parts = gs.iter().map(|g| g.nnf_polarity(positive));
                if positive {
                    Formula::or(parts)
                } else {
                    Formula::and(parts)
                }
            }
        }
    }

    /// Every literal occurrence, left to right.
    pub fn literals(&self) -> Vec<Literal> {
        let mut out = Vec::new();
        self.visit_literals(&mut |l| out.push(*l));
        out
    }

    pub fn visit_literals(&self, f: &mut impl FnMut(&Literal)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Lit(l) => f(l),
            Formula::Not(g) => g.visit_literals(f),
            Formula::And(gs) | Formula::Or(gs) => {
                for g in gs {
                    g.visit_literals(f);
                }
            }
        }
    }

    /// Applies `f` to both arguments of every atom, keeping the connective structure verbatim.
    pub fn map_terms(&self, store: &TermStore, f: &mut impl FnMut(TermId) -> TermId) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Lit(l) => Formula::Lit(l.map_terms(store, f)),
            Formula::Not(g) => Formula::Not(Box::new(g.map_terms(store, f))),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.map_terms(store, f)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.map_terms(store, f)).collect()),
        }
    }

    /// Free variables; the theory constants `0`, `eps` and `bot` are not symbols.
    pub fn free_symbols(&self, store: &TermStore) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.visit_literals(&mut |l| {
            for t in l.atom.terms() {
                store.collect_vars(t, &mut out);
            }
        });
        out
    }

    /// Every term occurring in the formula, subterms included, without duplicates.
    pub fn subterms(&self, store: &TermStore) -> Vec<TermId> {
        let mut all = Vec::new();
        self.visit_literals(&mut |l| {
            for t in l.atom.terms() {
                store.collect_subterms(t, &mut all);
            }
        });
        let mut seen = std::collections::HashSet::new();
        all.retain(|t| seen.insert(*t));
        all
    }

    /// Evaluates the formula given a value for each literal; unknown literals make it unknown
    /// unless the connectives decide it anyway (Kleene semantics).
    pub fn eval3(&self, f: &mut impl FnMut(&Literal) -> Option<bool>) -> Option<bool> {
        match self {
            Formula::True => Some(true),
            Formula::False => Some(false),
            Formula::Lit(l) => f(l),
            Formula::Not(g) => g.eval3(f).map(|v| !v),
            Formula::And(gs) => {
                let mut all = Some(true);
                for g in gs {
                    match g.eval3(f) {
                        Some(false) => return Some(false),
                        None => all = None,
                        Some(true) => {}
                    }
                }
                all
            }
            Formula::Or(gs) => {
                let mut any = Some(false);
                for g in gs {
                    match g.eval3(f) {
                        Some(true) => return Some(true),
                        None => any = None,
                        Some(false) => {}
                    }
                }
                any
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Lit(_) => 1,
            Formula::Not(g) => 1 + g.size(),
            Formula::And(gs) | Formula::Or(gs) => 1 + gs.iter().map(Formula::size).sum::<usize>(),
        }
    }
}

/// Replaces every `diff_k` with `k > 1` by its unfolding into `rd`, `wr` and `diff`.
pub fn expand_diffs(store: &mut TermStore, f: &Formula) -> Formula {
    let mut cache = std::collections::HashMap::new();
    let mut go = |t: TermId| expand_term(store, t, &mut cache);
    let mut out_lits = Vec::new();
    f.visit_literals(&mut |l| out_lits.push(*l));
    let mut mapped = std::collections::HashMap::new();
    for l in out_lits {
        let [s, t] = l.atom.terms();
        mapped.insert(s, go(s));
        mapped.insert(t, go(t));
    }
    f.map_terms(store, &mut |t| mapped[&t])
}

fn expand_term(
    store: &mut TermStore,
    t: TermId,
    cache: &mut std::collections::HashMap<TermId, TermId>,
) -> TermId {
    if let Some(&r) = cache.get(&t) {
        return r;
    }
    let args: Vec<TermId> = store.args(t).to_vec();
    let new_args: Vec<TermId> = args.iter().map(|&a| expand_term(store, a, cache)).collect();
    let r = match store.op(t) {
        Op::Diff(k) if k > 1 => {
            let (_, diffs) = store.diff_chain(new_args[0], new_args[1], k as usize);
            diffs[k as usize - 1]
        }
        op if new_args != args => store.intern(op, &new_args).expect("expansion preserves sorts"),
        _ => t,
    };
    cache.insert(t, r);
    r
}

impl TermStore {
    /// The iterated-diff unfolding: `b_1 = b`, `b_{k+1} = wr(b_k, diff_k, rd(a, diff_k))`,
    /// `diff_k = diff(a, b_k)`. Returns `(b_1..b_l, diff_1..diff_l)` built from plain `diff`.
    pub fn diff_chain(&mut self, a: TermId, b: TermId, l: usize) -> (Vec<TermId>, Vec<TermId>) {
        let mut bs = Vec::with_capacity(l);
        let mut ds = Vec::with_capacity(l);
        let mut cur = b;
        for _ in 0..l {
            bs.push(cur);
            let d = self.diff(a, cur);
            ds.push(d);
            let r = self.rd(a, d);
            cur = self.wr(cur, d, r);
        }
        (bs, ds)
    }
}
