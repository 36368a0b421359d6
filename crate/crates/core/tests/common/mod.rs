//! Random problem text shared by the integration tests.

#![allow(dead_code)]

use proptest::prelude::*;

/// Symbol names a random formula may use, by sort.
#[derive(Clone, Copy, Debug)]
pub struct Vocab {
    pub arrays: &'static [&'static str],
    pub index: &'static [&'static str],
    pub elems: &'static [&'static str],
}

pub const SMALL: Vocab = Vocab {
    arrays: &["a", "b", "eps"],
    index: &["i", "j", "0"],
    elems: &["d", "bot"],
};

pub const HEADER: &str = "(declare-const a Array) (declare-const b Array) (declare-const i Index) \
(declare-const j Index) (declare-const d Elem)";

fn pick(names: &'static [&'static str]) -> impl Strategy<Value = String> + Clone {
    prop::sample::select(names).prop_map(str::to_string)
}

pub fn array_term(v: Vocab) -> impl Strategy<Value = String> + Clone {
    prop_oneof![
        3 => pick(v.arrays),
        1 => (pick(v.arrays), pick(v.index), pick(v.elems)).prop_map(|(a, i, e)| format!("(wr {a} {i} {e})")),
    ]
}

pub fn index_term(v: Vocab) -> impl Strategy<Value = String> + Clone {
    prop_oneof![
        3 => pick(v.index),
        1 => (pick(v.arrays), pick(v.arrays)).prop_map(|(a, b)| format!("(diff {a} {b})")),
    ]
}

pub fn elem_term(v: Vocab) -> impl Strategy<Value = String> + Clone {
    prop_oneof![
        1 => pick(v.elems),
        2 => (array_term(v), pick(v.index)).prop_map(|(a, i)| format!("(rd {a} {i})")),
    ]
}

pub fn atom(v: Vocab) -> impl Strategy<Value = String> + Clone {
    prop_oneof![
        (array_term(v), array_term(v)).prop_map(|(x, y)| format!("(= {x} {y})")),
        (elem_term(v), elem_term(v)).prop_map(|(x, y)| format!("(= {x} {y})")),
        (index_term(v), index_term(v)).prop_map(|(x, y)| format!("(= {x} {y})")),
        (index_term(v), index_term(v)).prop_map(|(x, y)| format!("(< {x} {y})")),
        (index_term(v), index_term(v)).prop_map(|(x, y)| format!("(<= {x} {y})")),
    ]
}

/// A formula over `v` with at most `depth` nested connectives.
pub fn formula_over(v: Vocab, depth: u32) -> impl Strategy<Value = String> {
    atom(v).prop_recursive(depth, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| format!("(not {f})")),
            (inner.clone(), inner.clone()).prop_map(|(f, g)| format!("(and {f} {g})")),
            (inner.clone(), inner).prop_map(|(f, g)| format!("(or {f} {g})")),
        ]
    })
}

/// A formula over [`SMALL`].
pub fn formula(depth: u32) -> impl Strategy<Value = String> {
    formula_over(SMALL, depth)
}

/// `header` followed by one assertion per formula.
pub fn problem_with(header: &str, parts: &[String]) -> String {
    let mut text = header.to_string();
    for p in parts {
        text.push_str(&format!(" (assert {p})"));
    }
    text
}

/// A problem asserting the conjunction of the given formulas over [`HEADER`].
pub fn problem(parts: &[String]) -> String {
    problem_with(HEADER, parts)
}
