use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Prefix reserved for names minted by the engine. User symbols may not start with it.
pub const RESERVED_PREFIX: char = '%';

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Index,
    Elem,
    Array,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Index => "Index",
            Sort::Elem => "Elem",
            Sort::Array => "Array",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Head symbol of a term.
///
/// `Diff(k)` is the iterated maxdiff `diff_k`; `Diff(1)` is plain `diff`.
/// `Succ` and `Pred` only occur when indexes are integers (difference logic).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Var(VarId),
    Zero,
    Eps,
    Bot,
    Rd,
    Wr,
    Diff(u32),
    Succ,
    Pred,
}

impl Op {
    pub fn name(&self) -> String {
        match self {
            Op::Var(v) => format!("var#{}", v.0),
            Op::Zero => "0".into(),
            Op::Eps => "eps".into(),
            Op::Bot => "bot".into(),
            Op::Rd => "rd".into(),
            Op::Wr => "wr".into(),
            Op::Diff(1) => "diff".into(),
            Op::Diff(k) => format!("diff_{k}"),
            Op::Succ => "S".into(),
            Op::Pred => "P".into(),
        }
    }

    /// Argument sorts and result sort; `None` for variables, whose sort is declared.
    fn signature(&self) -> Option<(&'static [Sort], Sort)> {
        use Sort::*;
        Some(match self {
            Op::Var(_) => return None,
            Op::Zero => (&[], Index),
            Op::Eps => (&[], Array),
            Op::Bot => (&[], Elem),
            Op::Rd => (&[Array, Index], Elem),
            Op::Wr => (&[Array, Index, Elem], Array),
            Op::Diff(_) => (&[Array, Array], Index),
            Op::Succ | Op::Pred => (&[Index], Index),
        })
    }

    /// Whether this head counts towards term complexity.
    pub fn is_function(&self) -> bool {
        matches!(self, Op::Rd | Op::Wr | Op::Diff(_) | Op::Succ | Op::Pred)
    }
}

#[derive(Clone, Debug)]
struct Node {
    op: Op,
    args: Vec<TermId>,
    sort: Sort,
}

#[derive(Clone, Debug)]
pub struct VarInfo {
    pub name: String,
    pub sort: Sort,
    /// Minted by the engine (flattening, chain padding, loop names).
    pub fresh: bool,
}

/// Hash-consed term arena. Terms are never removed; structural equality is `TermId` equality.
#[derive(Clone, Debug)]
pub struct TermStore {
    nodes: Vec<Node>,
    table: HashMap<(Op, Vec<TermId>), TermId>,
    vars: Vec<VarInfo>,
    by_name: HashMap<String, VarId>,
    var_terms: Vec<TermId>,
    fresh_counter: u32,
    zero: TermId,
    eps: TermId,
    bot: TermId,
}

impl Default for TermStore {
    fn default() -> Self {
        Self::new()
    }
}

impl TermStore {
    pub fn new() -> Self {
        let mut store = TermStore {
            nodes: Vec::new(),
            table: HashMap::new(),
            vars: Vec::new(),
            by_name: HashMap::new(),
            var_terms: Vec::new(),
            fresh_counter: 0,
            zero: TermId(0),
            eps: TermId(0),
            bot: TermId(0),
        };
        store.zero = store.intern(Op::Zero, &[]).unwrap();
        store.eps = store.intern(Op::Eps, &[]).unwrap();
        store.bot = store.intern(Op::Bot, &[]).unwrap();
        store
    }

    pub fn zero(&self) -> TermId {
        self.zero
    }

    pub fn eps(&self) -> TermId {
        self.eps
    }

    pub fn bot(&self) -> TermId {
        self.bot
    }

    /// Declares a user symbol. Redeclaring with the same sort returns the existing variable.
    pub fn declare(&mut self, name: &str, sort: Sort) -> Result<VarId> {
        if name.starts_with(RESERVED_PREFIX) {
            return Err(Error::ReservedSymbol(name.to_string()));
        }
        self.declare_unchecked(name, sort, false)
    }

    fn declare_unchecked(&mut self, name: &str, sort: Sort, fresh: bool) -> Result<VarId> {
        if let Some(&v) = self.by_name.get(name) {
            return if self.vars[v.index()].sort == sort {
                Ok(v)
            } else {
                Err(Error::Redeclared(name.to_string()))
            };
        }
        let v = VarId(self.vars.len() as u32);
        self.vars.push(VarInfo {
            name: name.to_string(),
            sort,
            fresh,
        });
        self.by_name.insert(name.to_string(), v);
        let t = self.intern(Op::Var(v), &[])?;
        self.var_terms.push(t);
        Ok(v)
    }

    /// Mints a variable with a reserved, collision-free name.
    pub fn fresh_var(&mut self, sort: Sort, hint: &str) -> TermId {
        let tag = match sort {
            Sort::Index => 'i',
            Sort::Elem => 'e',
            Sort::Array => 'a',
        };
        loop {
            self.fresh_counter += 1;
            let name = format!("{RESERVED_PREFIX}{hint}{tag}{}", self.fresh_counter);
            if !self.by_name.contains_key(&name) {
                let v = self
                    .declare_unchecked(&name, sort, true)
                    .expect("fresh names are unique");
                return self.var_term(v);
            }
        }
    }

    /// The bound variable of instantiation templates; created on first use.
    pub fn hole(&mut self) -> TermId {
        let name = format!("{RESERVED_PREFIX}h");
        let v = self
            .declare_unchecked(&name, Sort::Index, true)
            .expect("the hole is always an index variable");
        self.var_term(v)
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn var_info(&self, v: VarId) -> &VarInfo {
        &self.vars[v.index()]
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.vars[v.index()].name
    }

    pub fn var_term(&self, v: VarId) -> TermId {
        self.var_terms[v.index()]
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.vars.len() as u32).map(VarId)
    }

    /// Returns the unique term `op(args)`, checking the signature.
    pub fn intern(&mut self, op: Op, args: &[TermId]) -> Result<TermId> {
        let sort = match op.signature() {
            None => {
                if !args.is_empty() {
                    return Err(Error::Arity {
                        op: op.name(),
                        expected: 0,
                        found: args.len(),
                    });
                }
                let Op::Var(v) = op else { unreachable!() };
                self.vars
                    .get(v.index())
                    .ok_or_else(|| Error::internal("unknown variable id"))?
                    .sort
            }
            Some((params, result)) => {
                if params.len() != args.len() {
                    return Err(Error::Arity {
                        op: op.name(),
                        expected: params.len(),
                        found: args.len(),
                    });
                }
                for (position, (&expected, &arg)) in params.iter().zip(args).enumerate() {
                    let found = self.sort(arg);
                    if found != expected {
                        return Err(Error::IllSorted {
                            op: op.name(),
                            position,
                            expected,
                            found,
                        });
                    }
                }
                if let Op::Diff(0) = op {
                    return Err(Error::internal("diff chains are indexed from 1"));
                }
                result
            }
        };
        let key = (op, args.to_vec());
        if let Some(&t) = self.table.get(&key) {
            return Ok(t);
        }
        let t = TermId(self.nodes.len() as u32);
        self.nodes.push(Node {
            op,
            args: key.1.clone(),
            sort,
        });
        self.table.insert(key, t);
        Ok(t)
    }

    // Builders for internal use, where sorts are guaranteed by construction.

    pub fn rd(&mut self, a: TermId, i: TermId) -> TermId {
        self.intern(Op::Rd, &[a, i]).expect("rd: ill-sorted")
    }

    pub fn wr(&mut self, a: TermId, i: TermId, e: TermId) -> TermId {
        self.intern(Op::Wr, &[a, i, e]).expect("wr: ill-sorted")
    }

    pub fn diff(&mut self, a: TermId, b: TermId) -> TermId {
        self.diff_k(1, a, b)
    }

    pub fn diff_k(&mut self, k: u32, a: TermId, b: TermId) -> TermId {
        self.intern(Op::Diff(k), &[a, b]).expect("diff: ill-sorted")
    }

    pub fn succ(&mut self, i: TermId) -> TermId {
        self.intern(Op::Succ, &[i]).expect("S: ill-sorted")
    }

    pub fn pred(&mut self, i: TermId) -> TermId {
        self.intern(Op::Pred, &[i]).expect("P: ill-sorted")
    }

    /// `S^n(x)` for positive `n`, `P^-n(x)` for negative `n`.
    pub fn shift(&mut self, mut t: TermId, n: i64) -> TermId {
        for _ in 0..n.unsigned_abs() {
            t = if n > 0 { self.succ(t) } else { self.pred(t) };
        }
        t
    }

    pub fn op(&self, t: TermId) -> Op {
        self.nodes[t.index()].op
    }

    pub fn args(&self, t: TermId) -> &[TermId] {
        &self.nodes[t.index()].args
    }

    pub fn sort(&self, t: TermId) -> Sort {
        self.nodes[t.index()].sort
    }

    pub fn var_of(&self, t: TermId) -> Option<VarId> {
        match self.op(t) {
            Op::Var(v) => Some(v),
            _ => None,
        }
    }

    /// Variables and the constants `0`, `eps`, `bot`.
    pub fn is_atomic(&self, t: TermId) -> bool {
        self.args(t).is_empty()
    }

    pub fn is_fresh(&self, t: TermId) -> bool {
        self.var_of(t).is_some_and(|v| self.vars[v.index()].fresh)
    }

    /// Number of function symbol occurrences in `t`.
    pub fn complexity(&self, t: TermId) -> usize {
        let own = usize::from(self.op(t).is_function());
        own + self.args(t).iter().map(|&a| self.complexity(a)).sum::<usize>()
    }

    /// Collects the free variables of `t` into `out`.
    pub fn collect_vars(&self, t: TermId, out: &mut impl Extend<VarId>) {
        match self.op(t) {
            Op::Var(v) => out.extend([v]),
            _ => {
                for &a in self.args(t) {
                    self.collect_vars(a, out);
                }
            }
        }
    }

    /// Collects `t` and all its subterms.
    pub fn collect_subterms(&self, t: TermId, out: &mut Vec<TermId>) {
        for &a in self.args(t) {
            self.collect_subterms(a, out);
        }
        out.push(t);
    }

    /// Simultaneous replacement of subterms according to `map`.
    pub fn substitute(&mut self, t: TermId, map: &HashMap<TermId, TermId>) -> TermId {
        if let Some(&r) = map.get(&t) {
            return r;
        }
        if self.is_atomic(t) {
            return t;
        }
        let op = self.op(t);
        let args: Vec<TermId> = self.args(t).to_vec();
        let new_args: Vec<TermId> = args.iter().map(|&a| self.substitute(a, map)).collect();
        if new_args == args {
            t
        } else {
            self.intern(op, &new_args)
                .expect("substitution preserves sorts")
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_sorts() {
        let mut s = TermStore::new();
        let a = s.declare("a", Sort::Array).unwrap();
        let i = s.declare("i", Sort::Index).unwrap();
        let e = s.declare("e", Sort::Elem).unwrap();
        let (a, i, e) = (s.var_term(a), s.var_term(i), s.var_term(e));
        let r = s.intern(Op::Rd, &[a, i]).unwrap();
        assert_eq!(s.sort(r), Sort::Elem);
        let w = s.intern(Op::Wr, &[a, i, e]).unwrap();
        assert_eq!(s.sort(w), Sort::Array);
        match s.intern(Op::Rd, &[i, a]) {
            Err(Error::IllSorted { position: 0, .. }) => {}
            other => panic!("expected ill-sorted error, got {other:?}"),
        }
        assert!(matches!(s.intern(Op::Rd, &[a]), Err(Error::Arity { .. })));
    }

    #[test]
    fn interning_is_idempotent() {
        let mut s = TermStore::new();
        let a = s.declare("a", Sort::Array).unwrap();
        let i = s.declare("i", Sort::Index).unwrap();
        let (a, i) = (s.var_term(a), s.var_term(i));
        let r1 = s.rd(a, i);
        let r2 = s.rd(a, i);
        assert_eq!(r1, r2);
        assert_eq!(s.complexity(r1), 1);
        let w = s.wr(a, i, r1);
        assert_eq!(s.complexity(w), 2);
        assert_eq!(s.complexity(a), 0);
    }

    #[test]
    fn reserved_prefix_and_redeclaration() {
        let mut s = TermStore::new();
        assert!(matches!(
            s.declare("%x", Sort::Index),
            Err(Error::ReservedSymbol(_))
        ));
        s.declare("x", Sort::Index).unwrap();
        assert!(s.declare("x", Sort::Index).is_ok());
        assert!(matches!(
            s.declare("x", Sort::Elem),
            Err(Error::Redeclared(_))
        ));
        let f = s.fresh_var(Sort::Index, "");
        assert!(s.is_fresh(f));
        assert!(s.var_name(s.var_of(f).unwrap()).starts_with('%'));
    }
}
