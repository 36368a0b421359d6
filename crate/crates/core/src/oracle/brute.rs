//! Bounded model search: index chains, element tokens and array tables are enumerated
//! directly from the array semantics, with three-valued evaluation to prune partial models.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::model::{ArrayValue, FiniteArrayModel};
use crate::error::Result;
use crate::kernel::{expand_diffs, Atom, Formula, IndexTheory, Literal, Op, Sort, TermId, TermStore, VarId};

/// Search limits. `None` means the completeness threshold for the formula.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Bounds {
    pub max_chain: Option<usize>,
    pub max_elems: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteVerdict {
    Sat(FiniteArrayModel),
    /// No model exists within the searched bounds.
    UnsatWithinBounds,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteReport {
    pub verdict: BruteVerdict,
    pub chain: usize,
    pub elems: u32,
    /// Non-empty when the bounds are below the completeness threshold, or when indexes are
    /// integers (the search then only covers a window).
    pub warnings: Vec<String>,
}

impl BruteReport {
    pub fn is_sat(&self) -> bool {
        matches!(self.verdict, BruteVerdict::Sat(_))
    }

    /// True when an unsat verdict is conclusive.
    pub fn is_complete(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// The chain length that suffices for total orders: `0`, one index per index variable,
/// per array equality and per compound index subterm.
pub fn completeness_chain(store: &mut TermStore, f: &Formula) -> usize {
    let f = expand_diffs(store, f);
    let mut vars = 0;
    let mut compound = BTreeSet::new();
    for t in f.subterms(store) {
        if store.sort(t) != Sort::Index {
            continue;
        }
        match store.op(t) {
            Op::Var(_) => vars += 1,
            Op::Zero => {}
            _ => {
                compound.insert(t);
            }
        }
    }
    let mut array_eqs = BTreeSet::new();
    f.visit_literals(&mut |l| {
        if let Atom::Eq(s, _) = l.atom {
            if store.sort(s) == Sort::Array {
                array_eqs.insert(l.atom);
            }
        }
    });
    1 + vars + array_eqs.len() + compound.len()
}

/// Searches for a model of `f`. For total orders and bounds at or above the completeness
/// threshold an unsat verdict is conclusive; for difference logic the indexes range over a
/// window of integers around `0` and unsat verdicts are only advisory.
pub fn brute_force_check(store: &mut TermStore, theory: IndexTheory, f: &Formula, bounds: Bounds) -> Result<BruteReport> {
    let f = expand_diffs(store, &f.nnf());
    let needed = completeness_chain(store, &f);
    let chain = bounds.max_chain.unwrap_or(needed).max(1);
    let mut warnings = Vec::new();
    if chain < needed {
        warnings.push(format!("chain bound {chain} is below the completeness threshold {needed}"));
    }
    let syms = f.free_symbols(store);
    let of_sort = |s: Sort| -> Vec<VarId> {
        syms.iter()
            .copied()
            .filter(|&v| store.var_info(v).sort == s)
            .collect()
    };
    let (idx_vars, elem_vars, arr_vars) = (of_sort(Sort::Index), of_sort(Sort::Elem), of_sort(Sort::Array));

    let chains: Vec<Vec<i64>> = match theory {
        IndexTheory::TotalOrder => (0..=idx_vars.len().min(chain - 1))
            .map(|neg| (-(neg as i64)..(chain - neg) as i64).collect())
            .collect(),
        IndexTheory::DifferenceLogic => {
            warnings.push("integer indexes: only a window of values is searched".into());
            let w = chain as i64;
            vec![(-w..=w).collect()]
        }
    };
    let max_cells = chains
        .iter()
        .map(|c| c.iter().filter(|&&v| v >= 0).count())
        .max()
        .unwrap_or(1)
        * arr_vars.len();
    let exhaustive = 1 + elem_vars.len() as u32 + max_cells as u32;
    let elems = bounds.max_elems.unwrap_or(exhaustive).max(1);
    if elems < exhaustive {
        warnings.push(format!(
            "element bound {elems} is below the exhaustive bound {exhaustive}; an unsat verdict may be spurious"
        ));
    }

    let reads: Vec<TermId> = f
        .subterms(store)
        .into_iter()
        .filter(|&t| store.op(t) == Op::Rd)
        .collect();
    for ch in &chains {
        let mut search = Search {
            store,
            f: &f,
            theory,
            chain: ch.clone(),
            positions: ch.iter().copied().filter(|&v| v >= 0).rev().collect(),
            idx_vars: &idx_vars,
            elem_vars: &elem_vars,
            arr_vars: &arr_vars,
            idx: HashMap::new(),
            elem: HashMap::new(),
            cells: HashMap::new(),
            cap: elems,
            reads: reads.clone(),
            order: Vec::new(),
        };
        if let Some(m) = search.run()? {
            return Ok(BruteReport {
                verdict: BruteVerdict::Sat(m),
                chain,
                elems,
                warnings,
            });
        }
    }
    Ok(BruteReport {
        verdict: BruteVerdict::UnsatWithinBounds,
        chain,
        elems,
        warnings,
    })
}

struct Search<'a> {
    store: &'a TermStore,
    f: &'a Formula,
    theory: IndexTheory,
    chain: Vec<i64>,
    /// Nonnegative chain values, greatest first.
    positions: Vec<i64>,
    idx_vars: &'a [VarId],
    elem_vars: &'a [VarId],
    arr_vars: &'a [VarId],
    idx: HashMap<VarId, i64>,
    elem: HashMap<VarId, u32>,
    cells: HashMap<(VarId, i64), u32>,
    cap: u32,
    reads: Vec<TermId>,
    /// Cells in the order they are filled, fixed once all indexes are assigned.
    order: Vec<(VarId, i64)>,
}

impl Search<'_> {
    fn run(&mut self) -> Result<Option<FiniteArrayModel>> {
        self.assign_index(0)
    }

    fn status(&self) -> Option<bool> {
        let p = Partial { s: self };
        self.f.eval3(&mut |l| p.literal(l))
    }

    fn assign_index(&mut self, k: usize) -> Result<Option<FiniteArrayModel>> {
        if k == self.idx_vars.len() {
            if self.theory == IndexTheory::TotalOrder {
                let used: BTreeSet<i64> = self.idx.values().copied().filter(|&v| v < 0).collect();
                if used.len() != self.chain.iter().filter(|&&v| v < 0).count() {
                    return Ok(None);
                }
            }
            self.order = self.cell_order();
            return self.assign_slot(0, 0);
        }
        let v = self.idx_vars[k];
        for x in self.chain.clone() {
            self.idx.insert(v, x);
            if self.status() != Some(false) {
                if let Some(m) = self.assign_index(k + 1)? {
                    return Ok(Some(m));
                }
            }
        }
        self.idx.remove(&v);
        Ok(None)
    }

    /// Cells read directly by the formula first, then the rest from the top of the chain
    /// down, interleaving arrays.
    fn cell_order(&self) -> Vec<(VarId, i64)> {
        let p = Partial { s: self };
        let mut order: Vec<(VarId, i64)> = Vec::new();
        for &t in &self.reads {
            let args = self.store.args(t);
            if let Some(&[q]) = p.index(args[1]).as_deref() {
                if let Some(c) = p.base_cell(args[0], q) {
                    if !order.contains(&c) {
                        order.push(c);
                    }
                }
            }
        }
        for &q in &self.positions {
            for &a in self.arr_vars {
                if !order.contains(&(a, q)) {
                    order.push((a, q));
                }
            }
        }
        order
    }

    /// Slots are the element variables, then the cells in `order`. Tokens follow restricted growth: a slot may reuse a token or take
    /// the next unused one.
    fn assign_slot(&mut self, k: usize, used: u32) -> Result<Option<FiniteArrayModel>> {
        match self.status() {
            Some(false) => return Ok(None),
            Some(true) => return Ok(Some(self.model(used))),
            None => {}
        }
        let ne = self.elem_vars.len();
        if k == ne + self.order.len() {
            return Ok(None);
        }
        let top = (used + 1).min(self.cap - 1);
        for tok in 0..=top {
            let next_used = used.max(tok);
            if k < ne {
                self.elem.insert(self.elem_vars[k], tok);
            } else {
                self.cells.insert(self.order[k - ne], tok);
            }
            if let Some(m) = self.assign_slot(k + 1, next_used)? {
                return Ok(Some(m));
            }
        }
        if k < ne {
            self.elem.remove(&self.elem_vars[k]);
        } else {
            self.cells.remove(&self.order[k - ne]);
        }
        Ok(None)
    }

    fn model(&self, used: u32) -> FiniteArrayModel {
        let mut arrays: BTreeMap<VarId, ArrayValue> = self.arr_vars.iter().map(|&a| (a, ArrayValue::new())).collect();
        for (&(a, p), &tok) in &self.cells {
            if tok != 0 {
                arrays.get_mut(&a).unwrap().insert(p, tok);
            }
        }
        FiniteArrayModel {
            chain: self.chain.clone(),
            elems: used + 1,
            index: self.idx.iter().map(|(v, x)| (*v, *x)).collect(),
            elem: self
                .elem_vars
                .iter()
                .map(|v| (*v, self.elem.get(v).copied().unwrap_or(0)))
                .collect(),
            arrays,
        }
    }
}

/// Three-valued evaluation over a partial assignment. Index terms evaluate to the set of
/// their possible values, elements to a token when determined.
struct Partial<'a, 'b> {
    s: &'a Search<'b>,
}

impl Partial<'_, '_> {
    fn store(&self) -> &TermStore {
        self.s.store
    }

    fn index(&self, t: TermId) -> Option<Vec<i64>> {
        let st = self.store();
        match st.op(t) {
            Op::Var(v) => self.s.idx.get(&v).map(|&x| vec![x]),
            Op::Zero => Some(vec![0]),
            Op::Succ => Some(self.index(st.args(t)[0])?.into_iter().map(|x| x + 1).collect()),
            Op::Pred => Some(self.index(st.args(t)[0])?.into_iter().map(|x| x - 1).collect()),
            Op::Diff(_) => self.diff(st.args(t)[0], st.args(t)[1]),
            _ => None,
        }
    }

    fn elem(&self, t: TermId) -> Option<Val> {
        let st = self.store();
        match st.op(t) {
            Op::Var(v) => Some(self.s.elem.get(&v).map_or(Val::Var(v), |&x| Val::Tok(x))),
            Op::Bot => Some(Val::Tok(0)),
            Op::Rd => {
                let ps = self.index(st.args(t)[1])?;
                agree(ps.into_iter().map(|p| self.read(st.args(t)[0], p)))
            }
            _ => None,
        }
    }

    /// The cell of an array variable that a read of `a` at `p` lands on, when the writes
    /// above it are determined and miss `p`.
    fn base_cell(&self, a: TermId, p: i64) -> Option<(VarId, i64)> {
        let st = self.store();
        match st.op(a) {
            Op::Var(v) => (p >= 0 && self.s.chain.binary_search(&p).is_ok()).then_some((v, p)),
            Op::Wr => match self.index(st.args(a)[1])?.as_slice() {
                &[q] if q != p => self.base_cell(st.args(a)[0], p),
                _ => None,
            },
            _ => None,
        }
    }

    fn read(&self, a: TermId, p: i64) -> Option<Val> {
        if p < 0 {
            return Some(Val::Tok(0));
        }
        let st = self.store();
        match st.op(a) {
            Op::Var(v) => {
                if self.s.chain.binary_search(&p).is_err() {
                    return Some(Val::Tok(0));
                }
                Some(self.s.cells.get(&(v, p)).map_or(Val::Cell(v, p), |&x| Val::Tok(x)))
            }
            Op::Eps => Some(Val::Tok(0)),
            Op::Wr => {
                let args = st.args(a);
                let is = self.index(args[1])?;
                agree(is.into_iter().map(|q| {
                    if q == p {
                        self.elem(args[2])
                    } else {
                        self.read(args[0], p)
                    }
                }))
            }
            _ => None,
        }
    }

    /// Nonnegative indexes where the array may be different from `bot`.
    fn support(&self, a: TermId, out: &mut BTreeSet<i64>) -> Option<()> {
        let st = self.store();
        match st.op(a) {
            Op::Var(_) => out.extend(self.s.positions.iter().copied()),
            Op::Wr => {
                out.extend(self.index(st.args(a)[1])?.into_iter().filter(|&x| x >= 0));
                self.support(st.args(a)[0], out)?;
            }
            _ => {}
        }
        Some(())
    }

    fn diff(&self, a: TermId, b: TermId) -> Option<Vec<i64>> {
        if a == b {
            return Some(vec![0]);
        }
        let mut pos = BTreeSet::new();
        self.support(a, &mut pos)?;
        self.support(b, &mut pos)?;
        let mut out = Vec::new();
        for &p in pos.iter().rev().filter(|&&p| p > 0) {
            match same(self.read(a, p), self.read(b, p)) {
                Some(false) => {
                    out.push(p);
                    out.sort_unstable();
                    return Some(out);
                }
                Some(true) => {}
                None => out.push(p),
            }
        }
        out.push(0);
        out.sort_unstable();
        Some(out)
    }

    fn arrays_equal(&self, a: TermId, b: TermId) -> Option<bool> {
        let mut pos = BTreeSet::new();
        self.support(a, &mut pos)?;
        self.support(b, &mut pos)?;
        let mut known = true;
        for p in pos {
            match same(self.read(a, p), self.read(b, p)) {
                Some(false) => return Some(false),
                Some(true) => {}
                None => known = false,
            }
        }
        known.then_some(true)
    }

    fn literal(&self, l: &Literal) -> Option<bool> {
        let [s, t] = l.atom.terms();
        let st = self.store();
        let v = match (l.atom, st.sort(s)) {
            (Atom::Eq(..) | Atom::Le(..), _) if s == t => true,
            (Atom::Lt(..), _) if s == t => false,
            (Atom::Eq(..), Sort::Array) => self.arrays_equal(s, t)?,
            (Atom::Eq(..), Sort::Elem) => same(self.elem(s), self.elem(t))?,
            (Atom::Eq(..), Sort::Index) => {
                let (x, y) = (self.index(s)?, self.index(t)?);
                if x.len() == 1 && y.len() == 1 {
                    x[0] == y[0]
                } else if x.iter().all(|v| !y.contains(v)) {
                    false
                } else {
                    return None;
                }
            }
            (Atom::Le(..), _) => {
                let (x, y) = (self.index(s)?, self.index(t)?);
                if x[x.len() - 1] <= y[0] {
                    true
                } else if x[0] > y[y.len() - 1] {
                    false
                } else {
                    return None;
                }
            }
            (Atom::Lt(..), _) => {
                let (x, y) = (self.index(s)?, self.index(t)?);
                if x[x.len() - 1] < y[0] {
                    true
                } else if x[0] >= y[y.len() - 1] {
                    false
                } else {
                    return None;
                }
            }
        };
        Some(v == l.positive)
    }
}

/// A partially evaluated element: a token, or an element variable or array cell not yet
/// assigned.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Val {
    Tok(u32),
    Var(VarId),
    Cell(VarId, i64),
}

/// Whether two partial values are equal, when that is already determined.
fn same(x: Option<Val>, y: Option<Val>) -> Option<bool> {
    match (x?, y?) {
        (Val::Tok(a), Val::Tok(b)) => Some(a == b),
        (a, b) if a == b => Some(true),
        _ => None,
    }
}

/// The common value of all candidates, if every candidate is known and they agree.
fn agree(mut it: impl Iterator<Item = Option<Val>>) -> Option<Val> {
    let first = it.next()??;
    for x in it {
        if x? != first {
            return None;
        }
    }
    Some(first)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(s: &mut TermStore) -> (TermId, TermId, TermId, TermId, TermId) {
        let mut v = |n: &str, so| {
            let x = s.declare(n, so).unwrap();
            s.var_term(x)
        };
        (
            v("a", Sort::Array),
            v("b", Sort::Array),
            v("i", Sort::Index),
            v("j", Sort::Index),
            v("e", Sort::Elem),
        )
    }

    #[test]
    fn diff_positive_forces_disagreement() {
        let mut s = TermStore::new();
        let (a, b, i, _, _) = vars(&mut s);
        let d = s.diff(a, b);
        let (ra, rb) = (s.rd(a, i), s.rd(b, i));
        let z = s.zero();
        let f = Formula::conj([Literal::eq(&s, d, i), Literal::lt(z, i), Literal::eq(&s, ra, rb)]);
        let r = brute_force_check(&mut s, IndexTheory::TotalOrder, &f, Bounds::default()).unwrap();
        assert_eq!(r.verdict, BruteVerdict::UnsatWithinBounds);
        assert!(r.is_complete());
    }

    #[test]
    fn read_over_write() {
        let mut s = TermStore::new();
        let (a, b, i, _, e) = vars(&mut s);
        let w = s.wr(b, i, e);
        let r = s.rd(a, i);
        let z = s.zero();
        let f = Formula::conj([Literal::eq(&s, a, w), Literal::le(z, i), Literal::ne(&s, r, e)]);
        let r = brute_force_check(&mut s, IndexTheory::TotalOrder, &f, Bounds::default()).unwrap();
        assert_eq!(r.verdict, BruteVerdict::UnsatWithinBounds);
    }

    #[test]
    fn two_index_witness() {
        let mut s = TermStore::new();
        let (a, _, i, j, _) = vars(&mut s);
        let (ri, rj) = (s.rd(a, i), s.rd(a, j));
        let f = Formula::conj([Literal::lt(i, j), Literal::ne(&s, ri, rj)]);
        let r = brute_force_check(&mut s, IndexTheory::TotalOrder, &f, Bounds::default()).unwrap();
        let BruteVerdict::Sat(m) = r.verdict else { panic!("expected a model") };
        assert!(m.evaluate(&s, &f).unwrap());
    }
}
