//! Printing of terms, formulas and models as s-expressions.

use std::collections::HashMap;
use std::fmt::Write;

use crate::kernel::{expand_diffs, Atom, Formula, Literal, Op, Sort, TermId, TermStore, RESERVED_PREFIX};
use crate::oracle::FiniteArrayModel;

/// Prints a term; iterated diffs must already be expanded.
pub fn print_term(store: &TermStore, t: TermId) -> String {
    let mut out = String::new();
    write_term(store, t, &HashMap::new(), &mut out);
    out
}

fn write_term(store: &TermStore, t: TermId, names: &HashMap<TermId, String>, out: &mut String) {
    if let Some(n) = names.get(&t) {
        out.push_str(n);
        return;
    }
    if let Some(n) = numeral(store, t) {
        let _ = write!(out, "{n}");
        return;
    }
    let head = match store.op(t) {
        Op::Var(v) => {
            out.push_str(store.var_name(v));
            return;
        }
        Op::Zero => "0",
        Op::Eps => "eps",
        Op::Bot => "bot",
        Op::Rd => "rd",
        Op::Wr => "wr",
        Op::Diff(1) => "diff",
        Op::Diff(k) => {
            let _ = write!(out, "(diff_{k}");
            for &a in store.args(t) {
                out.push(' ');
                write_term(store, a, names, out);
            }
            out.push(')');
            return;
        }
        Op::Succ => "S",
        Op::Pred => "P",
    };
    if store.args(t).is_empty() {
        out.push_str(head);
        return;
    }
    let _ = write!(out, "({head}");
    for &a in store.args(t) {
        out.push(' ');
        write_term(store, a, names, out);
    }
    out.push(')');
}

/// `S^n(0)` as the numeral `n`.
fn numeral(store: &TermStore, mut t: TermId) -> Option<u64> {
    let mut n = 0;
    while store.op(t) == Op::Succ {
        n += 1;
        t = store.args(t)[0];
    }
    (n > 0 && store.op(t) == Op::Zero).then_some(n)
}

fn write_literal(store: &TermStore, l: &Literal, names: &HashMap<TermId, String>, out: &mut String) {
    let head = match l.atom {
        Atom::Eq(..) => "=",
        Atom::Le(..) => "<=",
        Atom::Lt(..) => "<",
    };
    if !l.positive {
        out.push_str("(not ");
    }
    let [mut s, mut t] = l.atom.terms();
    if head == "=" && store.complexity(s) < store.complexity(t) {
        std::mem::swap(&mut s, &mut t);
    }
    let _ = write!(out, "({head} ");
    write_term(store, s, names, out);
    out.push(' ');
    write_term(store, t, names, out);
    out.push(')');
    if !l.positive {
        out.push(')');
    }
}

fn write_formula(store: &TermStore, f: &Formula, names: &HashMap<TermId, String>, out: &mut String) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Lit(l) => write_literal(store, l, names, out),
        Formula::Not(g) => {
            out.push_str("(not ");
            write_formula(store, g, names, out);
            out.push(')');
        }
        Formula::And(gs) | Formula::Or(gs) => {
            out.push_str(if matches!(f, Formula::And(_)) { "(and" } else { "(or" });
            for g in gs {
                out.push(' ');
                write_formula(store, g, names, out);
            }
            out.push(')');
        }
    }
}

/// Prints a formula with iterated diffs unfolded into `rd`, `wr` and `diff`. With `share`,
/// compound terms occurring more than once are bound by `let`.
pub fn print_formula(store: &mut TermStore, f: &Formula, share: bool) -> String {
    let f = expand_diffs(store, f);
    let mut out = String::new();
    if !share {
        write_formula(store, &f, &HashMap::new(), &mut out);
        return out;
    }
    let mut counts: HashMap<TermId, usize> = HashMap::new();
    f.visit_literals(&mut |l| {
        for t in l.atom.terms() {
            count(store, t, &mut counts);
        }
    });
    let mut shared: Vec<TermId> = counts
        .into_iter()
        .filter(|&(t, c)| c > 1 && store.complexity(t) > 0 && numeral(store, t).is_none())
        .map(|(t, _)| t)
        .collect();
    shared.sort_by_key(|&t| (store.complexity(t), t));
    let mut names = HashMap::new();
    let mut closing = 0;
    for (n, &t) in shared.iter().enumerate() {
        let _ = write!(out, "(let (({RESERVED_PREFIX}s{} ", n + 1);
        write_term(store, t, &names, &mut out);
        out.push_str(")) ");
        names.insert(t, format!("{RESERVED_PREFIX}s{}", n + 1));
        closing += 1;
    }
    write_formula(store, &f, &names, &mut out);
    out.push_str(&")".repeat(closing));
    out
}

fn count(store: &TermStore, t: TermId, counts: &mut HashMap<TermId, usize>) {
    *counts.entry(t).or_default() += 1;
    for &a in store.args(t) {
        count(store, a, counts);
    }
}

fn token(e: u32) -> String {
    if e == 0 {
        "bot".into()
    } else {
        format!("e{e}")
    }
}

/// Prints the user symbols of a model: the index chain, the element tokens and one table
/// per array listing its entries different from `bot`.
pub fn print_model(store: &TermStore, m: &FiniteArrayModel) -> String {
    let user = |v: &crate::kernel::VarId| !store.var_info(*v).fresh;
    let mut out = String::from("(model\n");
    let chain: Vec<String> = m.chain.iter().map(i64::to_string).collect();
    let _ = writeln!(out, "  (chain {})", chain.join(" "));
    let elems: Vec<String> = (0..m.elems.max(1)).map(token).collect();
    let _ = writeln!(out, "  (elems {})", elems.join(" "));
    for v in store.vars().filter(user) {
        let name = store.var_name(v);
        match store.var_info(v).sort {
            Sort::Index => {
                if let Some(x) = m.index.get(&v) {
                    let _ = writeln!(out, "  (define {name} {x})");
                }
            }
            Sort::Elem => {
                if let Some(x) = m.elem.get(&v) {
                    let _ = writeln!(out, "  (define {name} {})", token(*x));
                }
            }
            Sort::Array => {
                if let Some(a) = m.arrays.get(&v) {
                    let cells: Vec<String> = a.iter().map(|(i, e)| format!("({i} {})", token(*e))).collect();
                    let _ = writeln!(out, "  (define {name} ({}))", cells.join(" "));
                }
            }
        }
    }
    out.push(')');
    out
}
