//! Elaboration of s-expression problems into formulas over a term store.

use std::collections::HashMap;

use super::sexp::{parse_sexps, syntax, Pos, Sexp};
use crate::error::{Error, Result};
use crate::kernel::{Formula, IndexTheory, Literal, Op, Sort, TermId, TermStore, VarId, RESERVED_PREFIX};

/// One problem file: its declarations and assertions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Problem {
    /// Set by `(set-index-theory ...)`, if present.
    pub index_theory: Option<IndexTheory>,
    pub declarations: Vec<VarId>,
    pub assertions: Vec<Formula>,
}

impl Problem {
    /// The conjunction of all assertions.
    pub fn formula(&self) -> Formula {
        Formula::and(self.assertions.iter().cloned())
    }

    pub fn theory(&self) -> IndexTheory {
        self.index_theory.unwrap_or_default()
    }
}

/// The `A` side and the `B` side of an interpolation query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationProblem {
    pub index_theory: Option<IndexTheory>,
    /// Symbols declared in both files.
    pub shared: Vec<VarId>,
    pub a: Problem,
    pub b: Problem,
}

#[derive(Clone, Debug)]
enum Value {
    Term(TermId),
    Formula(Formula),
}

struct Elaborator<'a> {
    store: &'a mut TermStore,
    scopes: Vec<HashMap<String, Value>>,
}

fn at(pos: Pos, e: Error) -> Error {
    match e {
        e @ (Error::Syntax { .. } | Error::At { .. }) => e,
        e => Error::At {
            line: pos.line,
            col: pos.col,
            source: Box::new(e),
        },
    }
}

/// Parses a problem, declaring its symbols in `store`.
pub fn parse_problem(store: &mut TermStore, text: &str) -> Result<Problem> {
    let mut problem = Problem::default();
    for form in parse_sexps(text)? {
        let Some((head, args)) = form.call() else {
            return Err(syntax(form.pos(), "expected a command"));
        };
        match head {
            "set-index-theory" => {
                let [arg] = args else {
                    return Err(syntax(form.pos(), "set-index-theory expects one argument"));
                };
                let name = arg.atom().ok_or_else(|| syntax(arg.pos(), "expected TO or IDL"))?;
                let theory: IndexTheory = name.parse().map_err(|m: String| syntax(arg.pos(), m))?;
                if problem.index_theory.is_some_and(|t| t != theory) {
                    return Err(syntax(form.pos(), "conflicting index theories"));
                }
                problem.index_theory = Some(theory);
            }
            "declare-const" => {
                let [name, sort] = args else {
                    return Err(syntax(form.pos(), "declare-const expects a name and a sort"));
                };
                let name = name.atom().ok_or_else(|| syntax(name.pos(), "expected a symbol"))?;
                let sort = match sort.atom() {
                    Some("Index") => Sort::Index,
                    Some("Elem") => Sort::Elem,
                    Some("Array") => Sort::Array,
                    _ => return Err(syntax(sort.pos(), "expected Index, Elem or Array")),
                };
                if is_keyword(name) || name.parse::<i64>().is_ok() {
                    return Err(syntax(form.pos(), format!("`{name}` cannot be declared")));
                }
                let v = store.declare(name, sort).map_err(|e| at(form.pos(), e))?;
                if !problem.declarations.contains(&v) {
                    problem.declarations.push(v);
                }
            }
            "assert" => {
                let [body] = args else {
                    return Err(syntax(form.pos(), "assert expects one formula"));
                };
                let f = parse_formula_sexp(store, body)?;
                problem.assertions.push(f);
            }
            other => return Err(syntax(form.pos(), format!("unknown command `{other}`"))),
        }
    }
    if let Some(theory) = problem.index_theory {
        for f in &problem.assertions {
            check_theory(store, theory, f)?;
        }
    }
    Ok(problem)
}

/// Parses the two sides of an interpolation query. A symbol declared in both files must
/// have the same sort in both and is shared; the other declarations are local.
pub fn parse_interpolation(store: &mut TermStore, a_text: &str, b_text: &str) -> Result<InterpolationProblem> {
    let a = parse_problem(store, a_text)?;
    let b = parse_problem(store, b_text)?;
    if a.index_theory != b.index_theory {
        return Err(Error::Unsupported("the two files set different index theories".into()));
    }
    let shared: Vec<VarId> = a.declarations.iter().filter(|v| b.declarations.contains(v)).copied().collect();
    Ok(InterpolationProblem {
        index_theory: a.index_theory,
        shared,
        a,
        b,
    })
}

/// Parses a single formula, or a sequence of `(assert ...)` forms read as a conjunction.
pub fn parse_formula(store: &mut TermStore, text: &str) -> Result<Formula> {
    let forms = parse_sexps(text)?;
    let mut parts = Vec::new();
    for form in &forms {
        match form.call() {
            Some(("assert", [body])) => parts.push(parse_formula_sexp(store, body)?),
            _ => parts.push(parse_formula_sexp(store, form)?),
        }
    }
    if parts.is_empty() {
        return Err(syntax(Pos { line: 1, col: 1 }, "expected a formula"));
    }
    Ok(Formula::and(parts))
}

/// Parses a term over declared symbols.
pub fn parse_term(store: &mut TermStore, text: &str) -> Result<TermId> {
    let forms = parse_sexps(text)?;
    let [form] = forms.as_slice() else {
        return Err(syntax(Pos { line: 1, col: 1 }, "expected one term"));
    };
    let mut el = Elaborator {
        store,
        scopes: Vec::new(),
    };
    el.term(form)
}

fn parse_formula_sexp(store: &mut TermStore, e: &Sexp) -> Result<Formula> {
    let mut el = Elaborator {
        store,
        scopes: Vec::new(),
    };
    el.formula(e)
}

/// Rejects `S`, `P` and numerals other than `0` outside difference logic.
pub fn check_theory(store: &TermStore, theory: IndexTheory, f: &Formula) -> Result<()> {
    if theory == IndexTheory::DifferenceLogic {
        return Ok(());
    }
    let integer = f
        .subterms(store)
        .into_iter()
        .any(|t| matches!(store.op(t), Op::Succ | Op::Pred));
    if integer {
        return Err(Error::Unsupported("`S`, `P` and numerals need the IDL index theory".into()));
    }
    Ok(())
}

fn is_keyword(s: &str) -> bool {
    matches!(
        s,
        "true" | "false" | "and" | "or" | "not" | "=>" | "=" | "<=" | "<" | ">=" | ">" | "rd" | "wr" | "diff" | "S" | "P"
            | "eps" | "bot" | "let"
    )
}

impl Elaborator<'_> {
    fn lookup(&self, name: &str) -> Option<&Value> {
        self.scopes.iter().rev().find_map(|s| s.get(name))
    }

    fn value(&mut self, e: &Sexp) -> Result<Value> {
        if let Some(("let", _)) = e.call() {
            return self.with_let(e, |el, body| el.value(body));
        }
        let is_formula = match e {
            Sexp::Atom(s, _) => match self.lookup(s) {
                Some(Value::Formula(_)) => true,
                Some(Value::Term(_)) => false,
                None => s == "true" || s == "false",
            },
            Sexp::List(..) => matches!(
                e.call().map(|c| c.0),
                Some("and" | "or" | "not" | "=>" | "=" | "<=" | "<" | ">=" | ">")
            ),
        };
        if is_formula {
            Ok(Value::Formula(self.formula(e)?))
        } else {
            Ok(Value::Term(self.term(e)?))
        }
    }

    fn with_let<T>(&mut self, e: &Sexp, body: impl FnOnce(&mut Self, &Sexp) -> Result<T>) -> Result<T> {
        let Some(("let", [bindings, inner])) = e.call() else {
            return Err(syntax(e.pos(), "let expects bindings and a body"));
        };
        let list = bindings
            .list()
            .ok_or_else(|| syntax(bindings.pos(), "expected a binding list"))?;
        let mut scope = HashMap::new();
        for b in list {
            let Some([name, def]) = b.list() else {
                return Err(syntax(b.pos(), "expected (name value)"));
            };
            let name = name.atom().ok_or_else(|| syntax(name.pos(), "expected a symbol"))?;
            let v = self.value(def)?;
            scope.insert(name.to_string(), v);
        }
        self.scopes.push(scope);
        let out = body(self, inner);
        self.scopes.pop();
        out
    }

    fn formula(&mut self, e: &Sexp) -> Result<Formula> {
        match e {
            Sexp::Atom(s, pos) => match self.lookup(s) {
                Some(Value::Formula(f)) => Ok(f.clone()),
                Some(Value::Term(_)) => Err(syntax(*pos, format!("`{s}` is a term, not a formula"))),
                None => match s.as_str() {
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    _ => Err(syntax(*pos, format!("expected a formula, found `{s}`"))),
                },
            },
            Sexp::List(_, pos) => {
                let Some((head, args)) = e.call() else {
                    return Err(syntax(*pos, "expected a formula"));
                };
                match head {
                    "let" => self.with_let(e, |el, body| el.formula(body)),
                    "and" => Ok(Formula::and(self.formulas(args)?)),
                    "or" => Ok(Formula::or(self.formulas(args)?)),
                    "not" => match args {
                        [g] => Ok(Formula::not(self.formula(g)?)),
                        _ => Err(arity(*pos, "not", 1, args.len())),
                    },
                    "=>" => match args {
                        [g, h] => Ok(Formula::implies(self.formula(g)?, self.formula(h)?)),
                        _ => Err(arity(*pos, "=>", 2, args.len())),
                    },
                    "=" | "<=" | "<" | ">=" | ">" => {
                        let [s, t] = args else {
                            return Err(arity(*pos, head, 2, args.len()));
                        };
                        let (s, t) = (self.term(s)?, self.term(t)?);
                        self.atom(*pos, head, s, t)
                    }
                    _ => Err(syntax(*pos, format!("expected a formula, found `{head}`"))),
                }
            }
        }
    }

    fn atom(&mut self, pos: Pos, head: &str, s: TermId, t: TermId) -> Result<Formula> {
        let (ss, st) = (self.store.sort(s), self.store.sort(t));
        if head == "=" {
            if ss != st {
                return Err(at(
                    pos,
                    Error::IllSorted {
                        op: "=".into(),
                        position: 2,
                        expected: ss,
                        found: st,
                    },
                ));
            }
            return Ok(Formula::Lit(Literal::eq(self.store, s, t)));
        }
        for (n, sort) in [ss, st].into_iter().enumerate() {
            if sort != Sort::Index {
                return Err(at(
                    pos,
                    Error::IllSorted {
                        op: head.into(),
                        position: n + 1,
                        expected: Sort::Index,
                        found: sort,
                    },
                ));
            }
        }
        Ok(Formula::Lit(match head {
            "<=" => Literal::le(s, t),
            "<" => Literal::lt(s, t),
            ">=" => Literal::le(t, s),
            _ => Literal::lt(t, s),
        }))
    }

    fn formulas(&mut self, args: &[Sexp]) -> Result<Vec<Formula>> {
        args.iter().map(|a| self.formula(a)).collect()
    }

    fn term(&mut self, e: &Sexp) -> Result<TermId> {
        match e {
            Sexp::Atom(s, pos) => {
                if let Some(v) = self.lookup(s) {
                    return match v {
                        Value::Term(t) => Ok(*t),
                        Value::Formula(_) => Err(syntax(*pos, format!("`{s}` is a formula, not a term"))),
                    };
                }
                match s.as_str() {
                    "eps" => return Ok(self.store.eps()),
                    "bot" => return Ok(self.store.bot()),
                    _ => {}
                }
                if let Ok(n) = s.parse::<u32>() {
                    let z = self.store.zero();
                    return Ok(self.store.shift(z, n as i64));
                }
                if s.starts_with(RESERVED_PREFIX) {
                    return Err(at(*pos, Error::ReservedSymbol(s.clone())));
                }
                match self.store.lookup(s) {
                    Some(v) => Ok(self.store.var_term(v)),
                    None => Err(at(*pos, Error::Undeclared(s.clone()))),
                }
            }
            Sexp::List(_, pos) => {
                let Some((head, args)) = e.call() else {
                    return Err(syntax(*pos, "expected a term"));
                };
                if head == "let" {
                    return self.with_let(e, |el, body| el.term(body));
                }
                let op = match head {
                    "rd" => Op::Rd,
                    "wr" => Op::Wr,
                    "diff" => Op::Diff(1),
                    "S" => Op::Succ,
                    "P" => Op::Pred,
                    _ => return Err(syntax(*pos, format!("unknown function `{head}`"))),
                };
                let args: Vec<TermId> = args.iter().map(|a| self.term(a)).collect::<Result<_>>()?;
                self.store.intern(op, &args).map_err(|e| at(*pos, e))
            }
        }
    }
}

fn arity(pos: Pos, op: &str, expected: usize, found: usize) -> Error {
    at(
        pos,
        Error::Arity {
            op: op.into(),
            expected,
            found,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declarations_and_assertion() {
        let mut s = TermStore::new();
        let p = parse_problem(
            &mut s,
            "(declare-const a Array)(declare-const i Index)(assert (= (rd a i) bot))",
        )
        .unwrap();
        assert_eq!(p.assertions.len(), 1);
        assert_eq!(p.declarations.len(), 2);
    }

    #[test]
    fn errors_carry_positions() {
        let mut s = TermStore::new();
        let e = parse_problem(&mut s, "(assert (= a b))").unwrap_err();
        assert!(matches!(e, Error::At { line: 1, col: 12, .. }), "{e}");
        s.declare("a", Sort::Array).unwrap();
        let e = parse_problem(&mut s, "(assert (= (rd a) bot))").unwrap_err();
        let Error::At { source, .. } = e else { panic!() };
        assert!(matches!(*source, Error::Arity { .. }));
        let e = parse_problem(&mut s, "(declare-const %x Index)").unwrap_err();
        assert!(matches!(e, Error::At { ref source, .. } if matches!(**source, Error::ReservedSymbol(_))));
    }

    #[test]
    fn let_binds_terms_and_formulas() {
        let mut s = TermStore::new();
        let p = parse_problem(
            &mut s,
            "(declare-const a Array)(declare-const i Index)
             (assert (let ((x (rd a i)) (g (<= i 0))) (and g (= x bot))))",
        )
        .unwrap();
        let Formula::And(parts) = &p.assertions[0] else { panic!() };
        assert_eq!(parts.len(), 2);
    }

    #[test]
    fn numerals_need_difference_logic() {
        let mut s = TermStore::new();
        let src = "(declare-const i Index)(assert (< i 2))";
        assert!(parse_problem(&mut s, &format!("(set-index-theory TO){src}")).is_err());
        let p = parse_problem(&mut s, &format!("(set-index-theory IDL){src}")).unwrap();
        assert_eq!(p.index_theory, Some(IndexTheory::DifferenceLogic));
    }

    #[test]
    fn symbols_declared_twice_are_shared() {
        let mut s = TermStore::new();
        let p = parse_interpolation(
            &mut s,
            "(declare-const i Index)(declare-const u Index)(assert (< i u))",
            "(declare-const w Index)(declare-const i Index)(assert (< w i))",
        )
        .unwrap();
        let names: Vec<&str> = p.shared.iter().map(|v| s.var_name(*v)).collect();
        assert_eq!(names, ["i"]);
        assert!(parse_interpolation(&mut s, "(declare-const x Index)", "(declare-const x Elem)").is_err());
    }
}
