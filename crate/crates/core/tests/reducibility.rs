use proptest::prelude::*;

use weakdeg::audit::{has_intersecting_five_cycles_raw, intersecting_five_cycles};
use weakdeg::certify::{certify_reducible_sfdt, SweepLimits};
use weakdeg::config::{catalog, catalog_digest, config_from_json, config_to_json, find_matches, is_match, lookup};
use weakdeg::cover::{cover_from_json, find_sfdt_raw};
use weakdeg::script::{certify_reducible_weak, execute_weak_script, residual_budget};
use weakdeg::weak::is_weakly_f_degenerate;
use weakdeg::{Budget, Configuration, Error, Graph, Match};

const WEAK: [&str; 13] = [
    "Kite", "F35", "RC-a", "RC-b", "RC-c", "RC1-a", "RC-1", "RC-2a", "RC-2b", "RC-3a", "RC-3b", "RC-3c", "RC-3d",
];

#[test]
fn catalog_is_pinned() {
    assert_eq!(catalog_digest(), "7237c4a89ab1ba0ae058aa996ad98e69f4ca32ea5374651b57a7ca8da9041071");
}

#[test]
fn catalog_round_trips_through_json() {
    for c in catalog() {
        let text = config_to_json(&c);
        let back = config_from_json(&text).unwrap();
        assert_eq!(config_to_json(&back), text, "{}", c.name());
    }
}

#[test]
fn catalog_entries_as_drawn() {
    let kite = lookup("Kite").unwrap();
    assert_eq!(kite.n(), 4);
    assert!((0..4).all(|v| kite.degree(v) == Some(4)));
    let (a2, a4) = (kite.index_of("a2").unwrap(), kite.index_of("a4").unwrap());
    assert_eq!(kite.non_edges(), &[(a2.min(a4), a2.max(a4))]);

    let f35 = lookup("F35").unwrap();
    assert_eq!((f35.n(), f35.pattern().m()), (6, 7));

    let rc1 = lookup("RC-1").unwrap();
    assert_eq!(rc1.n(), 5);
    assert_eq!(rc1.degree(rc1.index_of("a2").unwrap()), Some(5));
    assert_eq!(rc1.non_edges().len(), 2);

    for c in catalog() {
        let Some(sc) = c.script() else { continue };
        let pairs = sc.save_pairs.len();
        let expected = match c.name() {
            n if n.starts_with("RC-2") || n.starts_with("RC-3") => 2,
            n if ["RC-4", "RC-5", "RC-6", "RC-7"].iter().any(|p| n.starts_with(p)) => 3,
            _ => 1,
        };
        assert_eq!(pairs, expected, "{}", c.name());
        assert!(sc.save_pairs.contains(&(1, sc.order.len())));
    }
}

#[test]
fn matcher_trivia() {
    let kite = lookup("Kite").unwrap();
    assert!(!find_matches(&Graph::octahedron(), &kite, &[]).is_empty());
    assert!(find_matches(&Graph::complete(4), &kite, &[]).is_empty());
    let all: Vec<usize> = (0..6).collect();
    assert!(find_matches(&Graph::octahedron(), &kite, &all).is_empty());
}

fn raw_matches(g: &Graph, c: &Configuration, boundary: &[usize]) -> Vec<Match> {
    fn rec(g: &Graph, c: &Configuration, b: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Match>) {
        if cur.len() == c.n() {
            let m = Match { map: cur.clone() };
            if is_match(g, c, b, &m) {
                out.push(m);
            }
            return;
        }
        for h in 0..g.n() {
            if !cur.contains(&h) {
                cur.push(h);
                rec(g, c, b, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(g, c, boundary, &mut Vec::new(), &mut out);
    out
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n, 0.3f64..0.95).prop_flat_map(|(n, p)| {
        proptest::collection::vec(proptest::bool::weighted(p), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::new(n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        g.add_edge(u, v).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn matcher_equals_raw_enumeration(g in graph_strategy(7), bmask in 0u32..128) {
        let boundary: Vec<usize> = (0..g.n()).filter(|&v| bmask >> v & 1 == 1 && v % 3 == 0).collect();
        for c in catalog().into_iter().filter(|c| c.n() <= 6) {
            let mut raw = raw_matches(&g, &c, &boundary);
            raw.sort();
            prop_assert_eq!(find_matches(&g, &c, &boundary), raw, "{}", c.name());
        }
    }

    #[test]
    fn intersecting_detector_equals_brute_force(g in graph_strategy(8)) {
        prop_assert_eq!(intersecting_five_cycles(&g).is_some(), has_intersecting_five_cycles_raw(&g));
    }
}

#[test]
fn weak_certificates() {
    for name in WEAK {
        let c = lookup(name).unwrap();
        let cert = certify_reducible_weak(&c).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(cert.steps.len(), c.script().unwrap().order.len());
    }
}

/// Lowering any one residual budget either leaves the game winnable or the
/// script refuses with a named condition, never with an illegal move.
#[test]
fn script_refuses_before_game_fails() {
    for name in WEAK {
        let c = lookup(name).unwrap();
        let host = c.stub_host();
        let m = Match::identity(c.n());
        let base = residual_budget(&host, &m).unwrap();
        for v in 0..c.n() {
            if base.values()[v] == 0 {
                continue;
            }
            let mut vals = base.values().to_vec();
            vals[v] -= 1;
            let worse = Budget::new(vals);
            let game = is_weakly_f_degenerate(c.pattern(), &worse).unwrap().degenerate;
            match execute_weak_script(&host, &worse, &m, &c) {
                Ok(_) => assert!(game, "{name}: script ran where the game fails"),
                Err(Error::ConditionViolated { .. }) => {}
                Err(e) => panic!("{name}: {e}"),
            }
        }
    }
}

#[test]
fn certificates_are_deterministic() {
    for name in ["Kite", "F35", "RC1-a"] {
        let c = lookup(name).unwrap();
        let a = certify_reducible_sfdt(&c, 4, SweepLimits::default()).unwrap();
        let b = certify_reducible_sfdt(&c, 4, SweepLimits::default()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let w1 = certify_reducible_weak(&c).unwrap();
        let w2 = certify_reducible_weak(&c).unwrap();
        assert_eq!(serde_json::to_string(&w1).unwrap(), serde_json::to_string(&w2).unwrap());
    }
}

/// With a2a4 added the sweep may fail; when it does the reported cover must
/// really have no transversal.
#[test]
fn kite_with_extra_edge_reports_honestly() {
    let kite = lookup("Kite").unwrap();
    let (a2, a4) = (kite.index_of("a2").unwrap(), kite.index_of("a4").unwrap());
    let fat = kite.with_edges("Kite+a2a4", &[(a2, a4)]).unwrap();
    match certify_reducible_sfdt(&fat, 4, SweepLimits::default()) {
        Ok(cert) => assert!(cert.cases > 0),
        Err(Error::CounterexampleFound(msg)) => {
            let json = msg.split_once(": ").unwrap().1;
            let (h, f) = cover_from_json(json).unwrap();
            assert!(find_sfdt_raw(&h, &f).unwrap().is_none());
        }
        Err(e) => panic!("{e}"),
    }
}
