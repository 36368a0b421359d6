mod common;

use maxdiff::frontend::parse_problem;
use maxdiff::kernel::{flatten_formula, IndexTheory, TermStore};
use maxdiff::oracle::{brute_force_check, check_axioms, check_metric, Bounds, BruteVerdict};
use maxdiff::preprocess::preprocess;
use maxdiff::solver::{decide, decide_with, DecideOptions, Decision};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn decision_matches_bounded_search(parts in prop::collection::vec(common::formula(2), 1..3)) {
        let mut s = TermStore::new();
        let f = parse_problem(&mut s, &common::problem(&parts)).unwrap().formula();
        let d = decide(&mut s, IndexTheory::TotalOrder, &f).unwrap();
        let r = brute_force_check(&mut s, IndexTheory::TotalOrder, &f, Bounds::default()).unwrap();
        prop_assert!(r.is_complete());
        prop_assert_eq!(d.is_sat(), r.is_sat(), "{:?}", parts);
        if let Decision::Sat(m) = d {
            prop_assert!(m.evaluate(&s, &f).unwrap());
            prop_assert_eq!(check_axioms(&m), Ok(()));
            prop_assert_eq!(check_metric(&m), Ok(()));
        }
    }

    #[test]
    fn eager_and_lazy_splitting_agree(parts in prop::collection::vec(common::formula(3), 1..4)) {
        let mut s = TermStore::new();
        let f = parse_problem(&mut s, &common::problem(&parts)).unwrap().formula();
        let lazy = decide(&mut s, IndexTheory::TotalOrder, &f).unwrap();
        let opts = DecideOptions { theory: IndexTheory::TotalOrder, dnf: true };
        let eager = decide_with(&mut s, opts, &f).unwrap();
        prop_assert_eq!(lazy.is_sat(), eager.is_sat());
    }

    #[test]
    fn flattening_preserves_satisfiability(parts in prop::collection::vec(common::formula(1), 1..3)) {
        let mut s = TermStore::new();
        let f = parse_problem(&mut s, &common::problem(&parts)).unwrap().formula();
        let flat = flatten_formula(&mut s, &f.nnf()).to_formula();
        let bounds = Bounds { max_chain: Some(4), max_elems: Some(3) };
        if let BruteVerdict::Sat(m) = brute_force_check(&mut s, IndexTheory::TotalOrder, &flat, bounds).unwrap().verdict {
            prop_assert!(m.evaluate(&s, &f).unwrap(), "{:?}", parts);
        }
        let before = brute_force_check(&mut s, IndexTheory::TotalOrder, &f, Bounds::default()).unwrap();
        if before.is_sat() {
            prop_assert!(decide(&mut s, IndexTheory::TotalOrder, &flat).unwrap().is_sat(), "{:?}", parts);
        }
    }

    #[test]
    fn separated_pairs_are_equisatisfiable(parts in prop::collection::vec(common::formula(1), 1..3)) {
        let mut s = TermStore::new();
        let f = parse_problem(&mut s, &common::problem(&parts)).unwrap().formula();
        let pair = preprocess(&mut s, &f).unwrap();
        pair.check_well_formed(&s).unwrap();
        let g = pair.to_formula(&mut s);
        let x = decide(&mut s, IndexTheory::TotalOrder, &f).unwrap();
        let y = decide(&mut s, IndexTheory::TotalOrder, &g).unwrap();
        prop_assert_eq!(x.is_sat(), y.is_sat());
    }
}

#[test]
fn strict_self_order_is_unsat() {
    let mut s = TermStore::new();
    let f = parse_problem(&mut s, "(declare-const i Index) (assert (< i i))").unwrap().formula();
    assert_eq!(decide(&mut s, IndexTheory::TotalOrder, &f).unwrap(), Decision::Unsat);
}

#[test]
fn maxdiff_pins_last_difference() {
    let mut s = TermStore::new();
    let text = "(declare-const a Array) (declare-const b Array) (declare-const i Index) \
                (assert (= (diff a b) i)) (assert (< 0 i)) (assert (= (rd a i) (rd b i)))";
    let f = parse_problem(&mut s, text).unwrap().formula();
    assert_eq!(decide(&mut s, IndexTheory::TotalOrder, &f).unwrap(), Decision::Unsat);
}

#[test]
fn successor_gap_is_integer() {
    let mut s = TermStore::new();
    let text = "(set-index-theory IDL) (declare-const i Index) (declare-const j Index) \
                (assert (< i j)) (assert (< j (S i)))";
    let f = parse_problem(&mut s, text).unwrap().formula();
    assert_eq!(decide(&mut s, IndexTheory::DifferenceLogic, &f).unwrap(), Decision::Unsat);
}
