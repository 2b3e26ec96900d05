mod common;

use common::{audit_fixture, plane_fixtures};

#[test]
fn fixture_corpus_is_large_enough() {
    let all = plane_fixtures();
    for t in ["pairwise3456", "intersecting"] {
        assert!(all.iter().filter(|f| f.theorem == t).count() >= 10, "{t}");
    }
}

#[test]
fn designated_clause_matches_generator() {
    for fx in plane_fixtures() {
        let a = audit_fixture(&fx).unwrap_or_else(|e| panic!("{}: {e}", fx.name));
        assert!(a.witness_ok, "{}: {:?}", fx.name, a.report.designated);
        assert_eq!(a.report.designated.index, fx.clause, "{}", fx.name);
        assert_eq!(a.report.satisfied[0].index, a.report.designated.index);
    }
}
