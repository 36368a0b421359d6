use std::collections::HashMap;

use super::formula::{Atom, Formula, Literal};
use super::term::{Sort, TermId, TermStore};

/// Result of flattening a formula in negation normal form.
#[derive(Clone, Debug, Default)]
pub struct Flattened {
    /// Top-level flat equalities `x = t`, each a conjunct of the result.
    pub top: Vec<Literal>,
    /// The remaining Boolean structure, over flat literals only.
    pub nested: Vec<Formula>,
    /// Variables introduced by abstraction, in creation order.
    pub fresh: Vec<TermId>,
}

impl Flattened {
    pub fn to_formula(&self) -> Formula {
        Formula::and(
            self.top
                .iter()
                .map(|l| Formula::Lit(*l))
                .chain(self.nested.iter().cloned()),
        )
    }
}

/// `x = t` with `c(t) <= 1` and atomic arguments, or `x != y`, or an order atom over atomic terms.
pub fn is_flat(store: &TermStore, lit: &Literal) -> bool {
    let [s, t] = lit.atom.terms();
    match (lit.atom, lit.positive) {
        (Atom::Eq(..), true) => {
            store.is_atomic(s) && store.args(t).iter().all(|&a| store.is_atomic(a))
        }
        _ => store.is_atomic(s) && store.is_atomic(t),
    }
}

struct Flattener<'a> {
    store: &'a mut TermStore,
    memo: HashMap<TermId, TermId>,
    out: Flattened,
}

impl Flattener<'_> {
    /// Replaces `t` by a variable, emitting one definition per distinct compound subterm.
    fn abstract_term(&mut self, t: TermId) -> TermId {
        if self.store.is_atomic(t) {
            return t;
        }
        let shallow = self.shallow(t);
        if let Some(&x) = self.memo.get(&shallow) {
            return x;
        }
        let x = self.store.fresh_var(self.store.sort(shallow), "");
        self.memo.insert(shallow, x);
        self.out.fresh.push(x);
        self.out.top.push(Literal::eq(self.store, x, shallow));
        x
    }

    /// Keeps the head of `t` and abstracts its arguments.
    fn shallow(&mut self, t: TermId) -> TermId {
        if self.store.is_atomic(t) {
            return t;
        }
        let op = self.store.op(t);
        let args: Vec<TermId> = self.store.args(t).to_vec();
        let flat: Vec<TermId> = args.iter().map(|&a| self.abstract_term(a)).collect();
        self.store.intern(op, &flat).expect("flattening preserves sorts")
    }

    fn top_literal(&mut self, lit: &Literal) -> Literal {
        match (lit.atom, lit.positive) {
            (Atom::Eq(s, t), true) => {
                let (s_atomic, t_atomic) = (self.store.is_atomic(s), self.store.is_atomic(t));
                match (s_atomic, t_atomic) {
                    (true, true) => *lit,
                    (true, false) => {
                        let t = self.shallow(t);
                        Literal::eq(self.store, s, t)
                    }
                    (false, true) => {
                        let s = self.shallow(s);
                        Literal::eq(self.store, t, s)
                    }
                    (false, false) => {
                        let x = self.abstract_term(s);
                        let t = self.shallow(t);
                        Literal::eq(self.store, x, t)
                    }
                }
            }
            _ => self.nested_literal(lit),
        }
    }

    fn nested_literal(&mut self, lit: &Literal) -> Literal {
        let [s, t] = lit.atom.terms();
        let keep_head = lit.positive
            && matches!(lit.atom, Atom::Eq(..))
            && self.store.sort(s) != Sort::Array;
        if keep_head {
            let (s_atomic, t_atomic) = (self.store.is_atomic(s), self.store.is_atomic(t));
            let (x, u) = match (s_atomic, t_atomic) {
                (true, _) => (s, t),
                (false, true) => (t, s),
                (false, false) => (self.abstract_term(s), t),
            };
            let u = if matches!(self.store.op(u), super::term::Op::Diff(_)) {
                self.abstract_term(u)
            } else {
                self.shallow(u)
            };
            Literal::eq(self.store, x, u)
        } else {
            let s = self.abstract_term(s);
            let t = self.abstract_term(t);
            Literal {
                atom: lit.atom.with_terms(self.store, s, t),
                positive: lit.positive,
            }
        }
    }

    fn nested(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Lit(l) => Formula::Lit(self.nested_literal(l)),
            Formula::Not(g) => Formula::not(self.nested(g)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| self.nested(g)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.nested(g)).collect()),
        }
    }
}

/// Flattens a formula in negation normal form by abstracting compound subterms with fresh
/// variables. Positive top-level equalities keep one function symbol on their right-hand side;
/// everywhere else only elements and successor terms keep their head, and `diff` is always
/// lifted to a top-level definition.
pub fn flatten_formula(store: &mut TermStore, f: &Formula) -> Flattened {
    let mut fl = Flattener {
        store,
        memo: HashMap::new(),
        out: Flattened::default(),
    };
    let conjuncts: Vec<&Formula> = match f {
        Formula::And(gs) => gs.iter().collect(),
        g => vec![g],
    };
    for c in conjuncts {
        match c {
            Formula::Lit(l) => {
                let l = fl.top_literal(l);
                fl.out.top.push(l);
            }
            Formula::True => {}
            g => {
                let g = fl.nested(g);
                fl.out.nested.push(g);
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    fl.out.top.retain(|l| seen.insert(*l));
    fl.out
}

/// Flattens a conjunction of literals; returns the flat literals and the fresh variables.
pub fn flatten(store: &mut TermStore, lits: &[Literal]) -> (Vec<Literal>, Vec<TermId>) {
    let f = Formula::And(lits.iter().map(|l| Formula::Lit(*l)).collect());
    let out = flatten_formula(store, &f);
    (out.top, out.fresh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::term::Op;

    #[test]
    fn abstracts_nested_write() {
        let mut s = TermStore::new();
        let a = s.declare("a", Sort::Array).unwrap();
        let i = s.declare("i", Sort::Index).unwrap();
        let j = s.declare("j", Sort::Index).unwrap();
        let e = s.declare("e", Sort::Elem).unwrap();
        let e2 = s.declare("e2", Sort::Elem).unwrap();
        let (a, i, j, e, e2) = (
            s.var_term(a),
            s.var_term(i),
            s.var_term(j),
            s.var_term(e),
            s.var_term(e2),
        );
        let w = s.wr(a, i, e);
        let r = s.rd(w, j);
        let lit = Literal::eq(&s, r, e2);
        let (flat, fresh) = flatten(&mut s, &[lit]);
        assert_eq!(fresh.len(), 1);
        let b = fresh[0];
        let def = s.wr(a, i, e);
        let rb = s.rd(b, j);
        assert!(flat.contains(&Literal::eq(&s, b, def)));
        assert!(flat.contains(&Literal::eq(&s, e2, rb)));
        assert!(flat.iter().all(|l| is_flat(&s, l)));
    }

    #[test]
    fn flat_input_is_unchanged() {
        let mut s = TermStore::new();
        let a = s.declare("a", Sort::Array).unwrap();
        let b = s.declare("b", Sort::Array).unwrap();
        let i = s.declare("i", Sort::Index).unwrap();
        let e = s.declare("e", Sort::Elem).unwrap();
        let (a, b, i, e) = (s.var_term(a), s.var_term(b), s.var_term(i), s.var_term(e));
        let w = s.wr(b, i, e);
        let lit = Literal::eq(&s, a, w);
        let (flat, fresh) = flatten(&mut s, &[lit]);
        assert_eq!(flat, vec![lit]);
        assert!(fresh.is_empty());
        let d = s.diff(a, b);
        let lit = Literal::eq(&s, d, i);
        let (flat, _) = flatten(&mut s, &[lit]);
        assert_eq!(s.op(flat[0].atom.terms()[1]), Op::Diff(1));
    }

    #[test]
    fn nested_diff_becomes_definition() {
        let mut s = TermStore::new();
        let a = s.declare("a", Sort::Array).unwrap();
        let b = s.declare("b", Sort::Array).unwrap();
        let i = s.declare("i", Sort::Index).unwrap();
        let (a, b, i) = (s.var_term(a), s.var_term(b), s.var_term(i));
        let d = s.diff(a, b);
        let f = Formula::Or(vec![
            Formula::Lit(Literal::lt(i, d)),
            Formula::Lit(Literal::eq(&s, i, d)),
        ]);
        let out = flatten_formula(&mut s, &f);
        assert_eq!(out.fresh.len(), 1);
        assert_eq!(out.top.len(), 1);
        let k = out.fresh[0];
        assert_eq!(
            out.nested[0],
            Formula::Or(vec![
                Formula::Lit(Literal::lt(i, k)),
                Formula::Lit(Literal::eq(&s, i, k)),
            ])
        );
    }
}
