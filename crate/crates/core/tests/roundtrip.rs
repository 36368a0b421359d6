mod common;

use maxdiff::frontend::{parse_formula, parse_problem, print_formula};
use maxdiff::kernel::{expand_diffs, TermStore};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printing_then_parsing_is_identity(parts in prop::collection::vec(common::formula(3), 1..4), share in any::<bool>()) {
        let mut s = TermStore::new();
        let f = parse_problem(&mut s, &common::problem(&parts)).unwrap().formula();
        let text = print_formula(&mut s, &f, share);
        let g = parse_formula(&mut s, &text).unwrap();
        let expanded = expand_diffs(&mut s, &f);
        prop_assert_eq!(g, expanded, "{}", text);
    }
}
