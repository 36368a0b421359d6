//! One round of ground solving for a conjunction of literals: congruence closure and the
//! order graph exchange equalities until a conflict, a model, or (under difference logic)
//! a needed case split.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use petgraph::algo::toposort;
use petgraph::graph::DiGraph;

use super::cc::{CongruenceState, LitId, Reason};
use super::order::OrderGraph;
use crate::error::{Error, Result};
use crate::kernel::{Atom, IndexTheory, Literal, Op, Sort, TermId, TermStore};

/// An edge of a negative cycle: `0 <= to - from + weight`. `lit` is `None` for the
/// built-in edges linking `S(x)`/`P(x)` to `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleEdge {
    pub from: TermId,
    pub to: TermId,
    pub weight: i64,
    pub lit: Option<LitId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Skeleton {
    /// A disequality whose sides were merged.
    Congruence { diseq: LitId },
    /// A negative cycle of order constraints, in path order.
    Cycle(Vec<CycleEdge>),
}

impl Skeleton {
    /// A cycle built only from input literals whose consecutive edges meet in the same term,
    /// so no equality reasoning was needed to close it.
    pub fn is_pure_cycle(&self) -> bool {
        match self {
            Skeleton::Cycle(edges) => {
                edges.iter().all(|e| e.lit.is_some())
                    && edges
                        .iter()
                        .zip(edges.iter().cycle().skip(1))
                        .all(|(a, b)| a.to == b.from)
            }
            Skeleton::Congruence { .. } => false,
        }
    }
}

/// An unsatisfiable subset of the input literals together with the shape of the conflict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnsatCore {
    pub lits: Vec<LitId>,
    pub skeleton: Skeleton,
}

/// Integer values for index terms, tokens for element terms (`0` is `bot`), and the read
/// tables `(array, index value) -> token`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundModel {
    pub index: HashMap<TermId, i64>,
    pub elem: HashMap<TermId, u32>,
    pub tables: BTreeMap<(TermId, i64), u32>,
}

impl GroundModel {
    /// The value of a literal whose terms the model covers.
    pub fn eval_lit(&self, store: &TermStore, lit: &Literal) -> Option<bool> {
        let [s, t] = lit.atom.terms();
        let v = match (lit.atom, store.sort(s)) {
            (Atom::Eq(..), Sort::Elem) => self.elem_value(store, s)? == self.elem_value(store, t)?,
            (Atom::Eq(..), Sort::Index) => self.index_value(store, s)? == self.index_value(store, t)?,
            (Atom::Le(..), _) => self.index_value(store, s)? <= self.index_value(store, t)?,
            (Atom::Lt(..), _) => self.index_value(store, s)? < self.index_value(store, t)?,
            _ => return None,
        };
        Some(v == lit.positive)
    }

    pub fn index_value(&self, store: &TermStore, t: TermId) -> Option<i64> {
        if let Some(&v) = self.index.get(&t) {
            return Some(v);
        }
        match store.op(t) {
            Op::Zero => Some(0),
            Op::Succ => Some(self.index_value(store, store.args(t)[0])? + 1),
            Op::Pred => Some(self.index_value(store, store.args(t)[0])? - 1),
            _ => None,
        }
    }

    pub fn elem_value(&self, store: &TermStore, t: TermId) -> Option<u32> {
        if let Some(&v) = self.elem.get(&t) {
            return Some(v);
        }
        match store.op(t) {
            Op::Bot => Some(0),
            Op::Rd => {
                let [a, i] = [store.args(t)[0], store.args(t)[1]];
                let iv = self.index_value(store, i)?;
                if store.op(a) == Op::Eps || iv < 0 {
                    return Some(0);
                }
                self.tables.get(&(a, iv)).copied()
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroundOutcome {
    Sat(GroundModel),
    Unsat(UnsatCore),
    /// Difference logic only: the two index terms got equal values without being equal,
    /// and the model depends on it. The caller should split on `x < y`, `y < x`, `x = y`.
    Split(TermId, TermId),
}

#[derive(Clone, Copy, Debug)]
struct OrderFact {
    from: TermId,
    to: TermId,
    weight: i64,
    lit: Option<LitId>,
}

struct Solver<'a> {
    store: &'a TermStore,
    theory: IndexTheory,
    cc: CongruenceState,
    facts: Vec<OrderFact>,
}

/// Decides a conjunction of ground literals over index terms, element terms and reads of
/// array variables. `extra` terms are registered so the model covers them.
pub fn solve(
    store: &TermStore,
    theory: IndexTheory,
    lits: &[Literal],
    extra: &[TermId],
) -> Result<GroundOutcome> {
    let mut s = Solver {
        store,
        theory,
        cc: CongruenceState::new(),
        facts: Vec::new(),
    };
    s.cc.add_term(store, store.zero());
    s.cc.add_term(store, store.bot());
    for (id, lit) in lits.iter().enumerate() {
        s.add_literal(id, lit)?;
    }
    for &t in extra {
        s.register(t)?;
    }
    s.add_structural_edges();
    s.run()
}

impl Solver<'_> {
    fn register(&mut self, t: TermId) -> Result<usize> {
        let store = self.store;
        let ok = match store.op(t) {
            Op::Var(_) | Op::Zero | Op::Bot => store.sort(t) != Sort::Array,
            Op::Rd => store.is_atomic(store.args(t)[0]) && {
                self.register(store.args(t)[1])?;
                true
            },
            Op::Succ | Op::Pred => {
                self.register(store.args(t)[0])?;
                true
            }
            _ => false,
        };
        if !ok {
            return Err(Error::internal(format!(
                "term `{}` is outside the ground fragment",
                store.op(t).name()
            )));
        }
        Ok(self.cc.add_term(store, t))
    }

    fn add_literal(&mut self, id: LitId, lit: &Literal) -> Result<()> {
        let [s, t] = lit.atom.terms();
        let (ns, nt) = (self.register(s)?, self.register(t)?);
        match (lit.atom, lit.positive) {
            (Atom::Eq(..), true) => self.cc.assert_eq(ns, nt, Reason::Lit(id)),
            (Atom::Eq(..), false) => self.cc.assert_ne(ns, nt, id),
            (Atom::Le(..), true) => self.push_fact(s, t, 0, Some(id)),
            (Atom::Lt(..), true) => self.push_fact(s, t, -1, Some(id)),
            (Atom::Le(..), false) => self.push_fact(t, s, -1, Some(id)),
            (Atom::Lt(..), false) => self.push_fact(t, s, 0, Some(id)),
        }
        Ok(())
    }

    fn push_fact(&mut self, from: TermId, to: TermId, weight: i64, lit: Option<LitId>) {
        self.facts.push(OrderFact {
            from,
            to,
            weight,
            lit,
        });
    }

    fn add_structural_edges(&mut self) {
        for n in 0..self.cc.len() {
            let t = self.cc.term(n);
            match self.store.op(t) {
                Op::Succ => {
                    let x = self.store.args(t)[0];
                    self.push_fact(x, t, -1, None);
                    self.push_fact(t, x, 1, None);
                }
                Op::Pred => {
                    let x = self.store.args(t)[0];
                    self.push_fact(t, x, -1, None);
                    self.push_fact(x, t, 1, None);
                }
                _ => {}
            }
        }
    }

    fn node(&self, t: TermId) -> usize {
        self.cc.node(t).expect("order fact terms are registered")
    }

    /// Index classes as graph nodes: `(rep -> graph node, graph node -> rep)`.
    fn index_classes(&self) -> (HashMap<usize, usize>, Vec<usize>) {
        let mut of_rep = HashMap::new();
        let mut reps = Vec::new();
        for n in 0..self.cc.len() {
            if self.store.sort(self.cc.term(n)) != Sort::Index {
                continue;
            }
            let r = self.cc.find(n);
            of_rep.entry(r).or_insert_with(|| {
                reps.push(r);
                reps.len() - 1
            });
        }
        (of_rep, reps)
    }

    fn build_graph(&self, of_rep: &HashMap<usize, usize>, size: usize) -> OrderGraph<usize> {
        let mut g = OrderGraph::new(size);
        for (k, f) in self.facts.iter().enumerate() {
            let u = of_rep[&self.cc.find(self.node(f.from))];
            let v = of_rep[&self.cc.find(self.node(f.to))];
            g.add_edge(u, v, f.weight, k);
        }
        g
    }

    /// Literals behind a closed walk of facts, including the equalities at its joints.
    fn explain_walk(&self, facts: &[usize], out: &mut BTreeSet<LitId>) {
        for (pos, &k) in facts.iter().enumerate() {
            let f = self.facts[k];
            out.extend(f.lit);
            let next = self.facts[facts[(pos + 1) % facts.len()]];
            out.extend(self.cc.explain(self.node(f.to), self.node(next.from)));
        }
    }

    fn run(&mut self) -> Result<GroundOutcome> {
        loop {
            if let Err(mut lits) = self.cc.propagate() {
                let diseq = self
                    .cc
                    .diseqs()
                    .iter()
                    .find(|(a, b, _)| self.cc.same(*a, *b))
                    .map(|d| d.2)
                    .expect("a congruence conflict comes from a disequality");
                lits.sort_unstable();
                return Ok(GroundOutcome::Unsat(UnsatCore {
                    lits,
                    skeleton: Skeleton::Congruence { diseq },
                }));
            }
            let (of_rep, reps) = self.index_classes();
            let g = self.build_graph(&of_rep, reps.len());
            let dist = match g.potentials() {
                Ok(d) => d,
                Err(cycle) => {
                    let facts: Vec<usize> = cycle.iter().map(|&e| g.edges()[e].label).collect();
                    let mut lits = BTreeSet::new();
                    self.explain_walk(&facts, &mut lits);
                    let edges = facts
                        .iter()
                        .map(|&k| {
                            let f = self.facts[k];
                            CycleEdge {
                                from: f.from,
                                to: f.to,
                                weight: f.weight,
                                lit: f.lit,
                            }
                        })
                        .collect();
                    return Ok(GroundOutcome::Unsat(UnsatCore {
                        lits: lits.into_iter().collect(),
                        skeleton: Skeleton::Cycle(edges),
                    }));
                }
            };
            if !self.merge_zero_cycles(&g, &dist, &reps) {
                return Ok(self.model(&g, &dist, &of_rep, &reps));
            }
        }
    }

    /// Merges index classes forced equal by zero-weight cycles; true if anything merged.
    fn merge_zero_cycles(&mut self, g: &OrderGraph<usize>, dist: &[i64], reps: &[usize]) -> bool {
        let mut merged = false;
        for comp in g.tight_components(dist) {
            let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
            for &v in &comp {
                let key = match self.theory {
                    IndexTheory::TotalOrder => 0,
                    IndexTheory::DifferenceLogic => dist[v],
                };
                groups.entry(key).or_default().push(v);
            }
            for members in groups.values() {
                let u = members[0];
                for &v in &members[1..] {
                    let there = g.tight_path(dist, u, v).expect("tight component is strongly connected");
                    let back = g.tight_path(dist, v, u).expect("tight component is strongly connected");
                    let walk: Vec<usize> = there
                        .iter()
                        .chain(back.iter())
                        .map(|&e| g.edges()[e].label)
                        .collect();
                    let mut lits = BTreeSet::new();
                    self.explain_walk(&walk, &mut lits);
                    let at_v = self.node(self.facts[walk[there.len() - 1]].to);
                    let at_u = self.node(self.facts[walk[walk.len() - 1]].to);
                    lits.extend(self.cc.explain(reps[u], at_u));
                    lits.extend(self.cc.explain(reps[v], at_v));
                    self.cc
                        .assert_eq(reps[u], reps[v], Reason::Derived(lits.into_iter().collect()));
                    merged = true;
                }
            }
        }
        merged
    }

    fn model(
        &self,
        g: &OrderGraph<usize>,
        dist: &[i64],
        of_rep: &HashMap<usize, usize>,
        reps: &[usize],
    ) -> GroundOutcome {
        let values: Vec<i64> = match self.theory {
            IndexTheory::TotalOrder => {
                let mut dg: DiGraph<(), ()> = DiGraph::new();
                let ids: Vec<_> = (0..reps.len()).map(|_| dg.add_node(())).collect();
                for e in g.edges() {
                    if e.from != e.to {
                        dg.add_edge(ids[e.from], ids[e.to], ());
                    }
                }
                let order = toposort(&dg, None).expect("no cycles remain after merging");
                let mut rank = vec![0i64; reps.len()];
                for (r, n) in order.into_iter().enumerate() {
                    rank[n.index()] = r as i64;
                }
                rank
            }
            IndexTheory::DifferenceLogic => dist.iter().map(|d| -d).collect(),
        };
        let zero = of_rep[&self.cc.find(self.node(self.store.zero()))];
        let shift = values[zero];
        let value_of = |n: usize| values[of_rep[&self.cc.find(n)]] - shift;

        if self.theory == IndexTheory::DifferenceLogic {
            if let Some((x, y)) = self.needed_split(&value_of) {
                return GroundOutcome::Split(x, y);
            }
        }

        let mut model = GroundModel::default();
        let bot_rep = self.cc.find(self.node(self.store.bot()));
        let mut tokens: HashMap<usize, u32> = HashMap::from([(bot_rep, 0)]);
        for n in 0..self.cc.len() {
            let t = self.cc.term(n);
            match self.store.sort(t) {
                Sort::Index => {
                    model.index.insert(t, value_of(n));
                }
                Sort::Elem => {
                    let next = tokens.len() as u32;
                    let tok = *tokens.entry(self.cc.find(n)).or_insert(next);
                    model.elem.insert(t, tok);
                }
                Sort::Array => {}
            }
        }
        for n in 0..self.cc.len() {
            if let Some((a, i)) = self.cc.app(n) {
                let iv = value_of(i);
                if iv >= 0 && self.store.op(a) != Op::Eps {
                    model.tables.insert((a, iv), model.elem[&self.cc.term(n)]);
                }
            }
        }
        GroundOutcome::Sat(model)
    }

    /// Two distinct index classes sharing a value matter when a disequality separates them or
    /// when reads of one array at them disagree.
    fn needed_split(&self, value_of: &impl Fn(usize) -> i64) -> Option<(TermId, TermId)> {
        for &(a, b, _) in self.cc.diseqs() {
            if self.store.sort(self.cc.term(a)) == Sort::Index
                && !self.cc.same(a, b)
                && value_of(a) == value_of(b)
            {
                return Some((self.cc.label(a), self.cc.label(b)));
            }
        }
        let mut seen: HashMap<(TermId, i64), usize> = HashMap::new();
        for n in 0..self.cc.len() {
            let Some((arr, i)) = self.cc.app(n) else { continue };
            let key = (arr, value_of(i));
            match seen.get(&key) {
                Some(&m) if !self.cc.same(m, n) => {
                    let j = self.cc.app(m).unwrap().1;
                    return Some((self.cc.label(j), self.cc.label(i)));
                }
                Some(_) => {}
                None => {
                    seen.insert(key, n);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(s: &mut TermStore, name: &str) -> TermId {
        let v = s.declare(name, Sort::Index).unwrap();
        s.var_term(v)
    }

    #[test]
    fn antisymmetry_with_congruence_is_unsat() {
        let mut s = TermStore::new();
        let (i, j) = (idx(&mut s, "i"), idx(&mut s, "j"));
        let a = s.declare("a", Sort::Array).unwrap();
        let a = s.var_term(a);
        let (ri, rj) = (s.rd(a, i), s.rd(a, j));
        let lits = [Literal::le(i, j), Literal::le(j, i), Literal::ne(&s, ri, rj)];
        match solve(&s, IndexTheory::TotalOrder, &lits, &[]).unwrap() {
            GroundOutcome::Unsat(core) => assert_eq!(core.lits, vec![0, 1, 2]),
            other => panic!("expected unsat, got {other:?}"),
        }
    }

    #[test]
    fn strict_order_model() {
        let mut s = TermStore::new();
        let (i, j) = (idx(&mut s, "i"), idx(&mut s, "j"));
        let z = s.zero();
        let lits = [Literal::lt(i, j), Literal::eq(&s, i, z)];
        match solve(&s, IndexTheory::TotalOrder, &lits, &[]).unwrap() {
            GroundOutcome::Sat(m) => {
                assert_eq!(m.index[&i], 0);
                assert_eq!(m.index[&j], 1);
            }
            other => panic!("expected sat, got {other:?}"),
        }
    }

    #[test]
    fn strict_cycle_is_pure() {
        let mut s = TermStore::new();
        let (i, j) = (idx(&mut s, "i"), idx(&mut s, "j"));
        let lits = [Literal::lt(i, j), Literal::lt(j, i)];
        match solve(&s, IndexTheory::TotalOrder, &lits, &[]).unwrap() {
            GroundOutcome::Unsat(core) => {
                assert!(core.skeleton.is_pure_cycle());
                assert_eq!(core.lits, vec![0, 1]);
            }
            other => panic!("expected unsat, got {other:?}"),
        }
    }

    #[test]
    fn successor_gap_needs_split() {
        let mut s = TermStore::new();
        let (x, y) = (idx(&mut s, "x"), idx(&mut s, "y"));
        let sx = s.succ(x);
        let lits = [Literal::le(x, y), Literal::le(y, sx), Literal::ne(&s, x, y)];
        match solve(&s, IndexTheory::DifferenceLogic, &lits, &[]).unwrap() {
            GroundOutcome::Sat(m) => assert_eq!(m.index[&y], m.index[&x] + 1),
            GroundOutcome::Split(..) => {}
            other => panic!("unexpected {other:?}"),
        }
        let lits = [Literal::lt(x, y), Literal::lt(y, sx)];
        assert!(matches!(
            solve(&s, IndexTheory::DifferenceLogic, &lits, &[]).unwrap(),
            GroundOutcome::Unsat(_)
        ));
    }
}
