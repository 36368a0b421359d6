//! Finite functional models of arrays with maxdiff and direct evaluation of formulas in them.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::kernel::{Atom, Formula, Literal, Op, Sort, TermId, TermStore, VarId};

/// An array value: its entries different from `bot`, all at nonnegative indexes.
pub type ArrayValue = BTreeMap<i64, u32>;

/// Element token `0` is `bot`. Index values are integers; the chain lists the indexes the
/// model is built on and always contains `0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteArrayModel {
    pub chain: Vec<i64>,
    pub elems: u32,
    pub index: BTreeMap<VarId, i64>,
    pub elem: BTreeMap<VarId, u32>,
    pub arrays: BTreeMap<VarId, ArrayValue>,
}

/// The value of an evaluated term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Index(i64),
    Elem(u32),
    Array(ArrayValue),
}

impl FiniteArrayModel {
    /// The model on chain `{0}` with only `bot`.
    pub fn trivial() -> Self {
        FiniteArrayModel {
            chain: vec![0],
            elems: 1,
            ..Default::default()
        }
    }

    pub fn eval_term(&self, store: &TermStore, t: TermId) -> Result<Value> {
        let args = store.args(t);
        Ok(match store.op(t) {
            Op::Var(v) => match store.sort(t) {
                Sort::Index => Value::Index(*self.index.get(&v).ok_or_else(|| unassigned(store, v))?),
                Sort::Elem => Value::Elem(*self.elem.get(&v).ok_or_else(|| unassigned(store, v))?),
                Sort::Array => Value::Array(self.arrays.get(&v).ok_or_else(|| unassigned(store, v))?.clone()),
            },
            Op::Zero => Value::Index(0),
            Op::Eps => Value::Array(ArrayValue::new()),
            Op::Bot => Value::Elem(0),
            Op::Rd => {
                let a = self.array(store, args[0])?;
                let i = self.index_of(store, args[1])?;
                Value::Elem(read(&a, i))
            }
            Op::Wr => {
                let a = self.array(store, args[0])?;
                let i = self.index_of(store, args[1])?;
                let e = self.elem_of(store, args[2])?;
                Value::Array(write(a, i, e))
            }
            Op::Diff(k) => {
                let a = self.array(store, args[0])?;
                let b = self.array(store, args[1])?;
                Value::Index(diff_k(&a, b, k))
            }
            Op::Succ => Value::Index(self.index_of(store, args[0])? + 1),
            Op::Pred => Value::Index(self.index_of(store, args[0])? - 1),
        })
    }

    pub fn index_of(&self, store: &TermStore, t: TermId) -> Result<i64> {
        match self.eval_term(store, t)? {
            Value::Index(v) => Ok(v),
            _ => Err(Error::internal("expected an index value")),
        }
    }

    pub fn elem_of(&self, store: &TermStore, t: TermId) -> Result<u32> {
        match self.eval_term(store, t)? {
            Value::Elem(v) => Ok(v),
            _ => Err(Error::internal("expected an element value")),
        }
    }

    pub fn array(&self, store: &TermStore, t: TermId) -> Result<ArrayValue> {
        match self.eval_term(store, t)? {
            Value::Array(v) => Ok(v),
            _ => Err(Error::internal("expected an array value")),
        }
    }

    pub fn eval_literal(&self, store: &TermStore, l: &Literal) -> Result<bool> {
        let [s, t] = l.atom.terms();
        let v = match l.atom {
            Atom::Eq(..) => self.eval_term(store, s)? == self.eval_term(store, t)?,
            Atom::Le(..) => self.index_of(store, s)? <= self.index_of(store, t)?,
            Atom::Lt(..) => self.index_of(store, s)? < self.index_of(store, t)?,
        };
        Ok(v == l.positive)
    }

    /// Standard two-valued evaluation; fails on unassigned symbols.
    pub fn evaluate(&self, store: &TermStore, f: &Formula) -> Result<bool> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Lit(l) => self.eval_literal(store, l)?,
            Formula::Not(g) => !self.evaluate(store, g)?,
            Formula::And(gs) => {
                for g in gs {
                    if !self.evaluate(store, g)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(gs) => {
                for g in gs {
                    if self.evaluate(store, g)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    /// The arrays of the model together with `eps`.
    pub fn all_arrays(&self) -> Vec<ArrayValue> {
        let mut out = vec![ArrayValue::new()];
        out.extend(self.arrays.values().cloned());
        out
    }

    /// Keeps only the symbols in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<VarId>) -> Self {
        FiniteArrayModel {
            chain: self.chain.clone(),
            elems: self.elems,
            index: self.index.iter().filter(|(v, _)| keep.contains(v)).map(|(v, x)| (*v, *x)).collect(),
            elem: self.elem.iter().filter(|(v, _)| keep.contains(v)).map(|(v, x)| (*v, *x)).collect(),
            arrays: self
                .arrays
                .iter()
                .filter(|(v, _)| keep.contains(v))
                .map(|(v, x)| (*v, x.clone()))
                .collect(),
        }
    }
}

fn unassigned(store: &TermStore, v: VarId) -> Error {
    Error::Unassigned(store.var_name(v).to_string())
}

pub fn read(a: &ArrayValue, i: i64) -> u32 {
    if i < 0 {
        0
    } else {
        a.get(&i).copied().unwrap_or(0)
    }
}

/// Point update; writes at negative indexes have no effect.
pub fn write(mut a: ArrayValue, i: i64, e: u32) -> ArrayValue {
    if i >= 0 {
        if e == 0 {
            a.remove(&i);
        } else {
            a.insert(i, e);
        }
    }
    a
}

/// The greatest index where the arrays differ, `0` if they are equal.
pub fn diff(a: &ArrayValue, b: &ArrayValue) -> i64 {
    let keys: BTreeSet<i64> = a.keys().chain(b.keys()).copied().collect();
    keys.into_iter()
        .rev()
        .find(|&k| a.get(&k) != b.get(&k))
        .unwrap_or(0)
}

/// The iterated maxdiff `diff_k(a, b)`.
pub fn diff_k(a: &ArrayValue, mut b: ArrayValue, k: u32) -> i64 {
    let mut d = diff(a, &b);
    for _ in 1..k {
        b = write(b, d, read(a, d));
        d = diff(a, &b);
    }
    d
}

/// Checks the array axioms on every array of the model (and `eps`), every chain index and
/// every element token; returns a description of the first violation.
pub fn check_axioms(m: &FiniteArrayModel) -> std::result::Result<(), String> {
    let arrays = m.all_arrays();
    let mut idx: Vec<i64> = m.chain.clone();
    idx.push(m.chain.first().copied().unwrap_or(0) - 1);
    for (n, y) in arrays.iter().enumerate() {
        if y.keys().any(|&k| k < 0) || y.values().any(|&e| e == 0 || e >= m.elems.max(1)) {
            return Err(format!("array {n} has an entry outside the positive support"));
        }
        for &i in &idx {
            if i < 0 && read(y, i) != 0 {
                return Err(format!("array {n} is not bot at negative index {i}"));
            }
            for e in 0..m.elems.max(1) {
                let w = write(y.clone(), i, e);
                if i >= 0 && read(&w, i) != e {
                    return Err(format!("read over write fails for array {n} at {i}"));
                }
                for &j in &idx {
                    if j != i && read(&w, j) != read(y, j) {
                        return Err(format!("write at {i} changes array {n} at {j}"));
                    }
                }
            }
        }
        if diff(y, y) != 0 {
            return Err(format!("diff of array {n} with itself is not 0"));
        }
        for x in &arrays {
            let d = diff(x, y);
            if x != y && read(x, d) == read(y, d) {
                return Err(format!("arrays differ but agree at their diff {d}"));
            }
            if idx.iter().any(|&i| i > d && read(x, i) != read(y, i)) {
                return Err(format!("arrays differ above their diff {d}"));
            }
        }
    }
    if arrays[0].values().any(|_| true) {
        return Err("eps is not constantly bot".into());
    }
    Ok(())
}

/// Checks the pseudo-metric laws of `diff` over all arrays of the model and `eps`:
/// nonnegativity, symmetry, and `max(diff(x,y), diff(y,z)) >= diff(x,z)`.
pub fn check_metric(m: &FiniteArrayModel) -> std::result::Result<(), String> {
    check_metric_on(&m.all_arrays())
}

pub fn check_metric_on(arrays: &[ArrayValue]) -> std::result::Result<(), String> {
    for x in arrays {
        for y in arrays {
            let d = diff(x, y);
            if d < 0 {
                return Err(format!("negative diff {d}"));
            }
            if d != diff(y, x) {
                return Err("diff is not symmetric".into());
            }
            for z in arrays {
                if d.max(diff(y, z)) < diff(x, z) {
                    return Err("diff violates the strong triangle law".into());
                }
            }
        }
    }
    Ok(())
}
