//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! The RC-4..RC-7 sweeps get WEAKDEG_EXTENDED_SECS seconds each (default 60).
//! WEAKDEG_WORKERS > 1 parallelizes the sweeps. Failed criteria are reported;
//! the exit status is nonzero only with WEAKDEG_ACCEPTANCE_STRICT=1, so one
//! unfinished sweep does not stop the rest of `cargo test`.

mod common;

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weakdeg::at::{at_number, at_number_raw, diff, diff_product, diff_raw};
use weakdeg::blocks::is_gdp_tree;
use weakdeg::certify::{certify_reducible_sfdt, SweepLimits};
use weakdeg::chain::{chain_row, ChainLimits};
use weakdeg::coloring::{dp_chromatic_number, dp_chromatic_number_raw};
use weakdeg::config::lookup;
use weakdeg::cover::{find_sfdt, find_sfdt_raw, is_sfdt};
use weakdeg::degeneracy::is_strictly_f_degenerate;
use weakdeg::gen::connected_graphs;
use weakdeg::oriented::{obligations, oriented_configs};
use weakdeg::script::certify_reducible_weak;
use weakdeg::weak::{delete_only_removable, is_weakly_deg_minus_one_degenerate, weak_degeneracy};
use weakdeg::{Budget, Cover, Error, FVector, Graph, Orientation};

type Outcome = Result<String, String>;

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn random_connected(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    loop {
        let g = random_graph(rng, n, 0.5);
        if g.is_connected() {
            return g;
        }
    }
}

fn fail<E: std::fmt::Display>(what: impl std::fmt::Display) -> impl FnOnce(E) -> String {
    move |e| format!("{what}: {e}")
}

fn chain() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut graphs = Vec::new();
    for n in 1..=5 {
        graphs.extend(connected_graphs(n).map_err(fail("generation"))?);
    }
    let exhaustive = graphs.len();
    graphs.extend((0..100).map(|_| random_connected(&mut rng, 6)));
    for g in &graphs {
        let row = chain_row(g, ChainLimits::default()).map_err(fail(format!("{:?}", g.edges())))?;
        if !row.holds {
            return Err(format!("chain broken on {row:?}"));
        }
    }
    Ok(format!("{exhaustive} graphs with n ≤ 5, 100 random at n = 6"))
}

fn brooks() -> Outcome {
    let mut count = 0;
    for n in 1..=6 {
        for g in connected_graphs(n).map_err(fail("generation"))? {
            let weak = is_weakly_deg_minus_one_degenerate(&g).map_err(fail("weak"))?;
            let tree = is_gdp_tree(&g).map_err(fail("gdp"))?;
            if weak == tree {
                return Err(format!("{:?}: weakly (deg-1)-degenerate = {weak}, GDP-tree = {tree}", g.edges()));
            }
            count += 1;
        }
    }
    Ok(format!("{count} connected graphs, n ≤ 6"))
}

fn delete_only() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut yes = 0;
    for _ in 0..500 {
        let n = rng.random_range(1..=7);
        let p = rng.random_range(0.2..0.8);
        let g = random_graph(&mut rng, n, p);
        let f = Budget::new((0..n).map(|_| rng.random_range(0..=3)).collect());
        let a = delete_only_removable(&g, &f).map_err(fail("delete-only"))?;
        let b = is_strictly_f_degenerate(&g, &f.plus(1)).map_err(fail("strict"))?;
        if a != b {
            return Err(format!("{:?} f={:?}: delete-only {a}, strict {b}", g.edges(), f.values()));
        }
        yes += a as usize;
    }
    Ok(format!("500 instances, {yes} removable"))
}

fn closed_forms() -> Outcome {
    let mut checks = 0;
    let mut expect = |what: String, got: weakdeg::Result<i64>, want: i64| -> Result<(), String> {
        checks += 1;
        match got {
            Ok(x) if x == want => Ok(()),
            Ok(x) => Err(format!("{what} = {x}, expected {want}")),
            Err(e) => Err(format!("{what}: {e}")),
        }
    };
    for n in 1..=6 {
        expect(format!("wd(K{n})"), weak_degeneracy(&Graph::complete(n)).map(|x| x as i64), n as i64 - 1)?;
    }
    for n in 3..=8 {
        expect(format!("wd(C{n})"), weak_degeneracy(&Graph::cycle(n)).map(|x| x as i64), 2)?;
    }
    let c4 = Graph::cycle(4);
    expect("χ_DP(C4)".into(), dp_chromatic_number(&c4, 1 << 30).map(|x| x as i64), 3)?;
    expect("χ_DP(C4) raw".into(), dp_chromatic_number_raw(&c4).map(|x| x as i64), 3)?;
    for (name, g, want) in [("K4", Graph::complete(4), 4), ("C5", Graph::cycle(5), 3), ("C4", c4.clone(), 2)] {
        expect(format!("AT({name})"), at_number(&g, 1 << 30).map(|x| x as i64), want)?;
        expect(format!("AT({name}) raw"), at_number_raw(&g).map(|x| x as i64), want)?;
    }
    let c3 = Orientation::new(3, vec![(0, 1), (1, 2), (2, 0)]).map_err(|e| e.to_string())?;
    expect("diff(C3)".into(), Ok(i64::try_from(diff(&c3)).unwrap()), 0)?;
    expect("diff(C3) raw".into(), diff_raw(&c3), 0)?;
    for n in 1..=6 {
        let order: Vec<usize> = (0..n).rev().collect();
        let d = Orientation::acyclic(&Graph::complete(n), &order).map_err(|e| e.to_string())?;
        expect(format!("diff(acyclic K{n})"), Ok(i64::try_from(diff(&d)).unwrap()), 1)?;
        expect(format!("diff(acyclic K{n}) raw"), diff_raw(&d), 1)?;
    }
    Ok(format!("{checks} values"))
}

fn diff_split() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut nonzero = 0;
    for _ in 0..200 {
        let n = rng.random_range(2..=6);
        let g = random_graph(&mut rng, n, 0.6);
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(&mut rng);
        let cut = rng.random_range(1..n);
        let (x1, x2) = (vs[..cut].to_vec(), vs[cut..].to_vec());
        let arcs = g
            .edges()
            .into_iter()
            .map(|(u, v)| {
                if x1.contains(&u) != x1.contains(&v) {
                    // across the split, always X1 -> X2
                    if x1.contains(&u) { (u, v) } else { (v, u) }
                } else if rng.random_bool(0.5) {
                    (u, v)
                } else {
                    (v, u)
                }
            })
            .collect();
        let d = Orientation::new(n, arcs).map_err(|e| e.to_string())?;
        let (lhs, rhs) = diff_product(&d, &x1, &x2).map_err(fail("diff_product"))?;
        let raw = diff_raw(&d).map_err(fail("raw"))?;
        if lhs != rhs || lhs != raw.into() {
            return Err(format!("{:?} X1={x1:?}: diff {lhs}, product {rhs}, raw {raw}", d.arcs()));
        }
        nonzero += (raw != 0) as usize;
    }
    Ok(format!("200 split digraphs, {nonzero} with nonzero diff"))
}

fn orientations() -> Outcome {
    let all = oriented_configs();
    for o in &all {
        let ob = obligations(o);
        if !ob.hold() {
            return Err(format!("{ob:?}"));
        }
    }
    Ok(format!("{} orientations", all.len()))
}

const WEAK: [&str; 13] = [
    "Kite", "F35", "RC-a", "RC-b", "RC-c", "RC1-a", "RC-1", "RC-2a", "RC-2b", "RC-3a", "RC-3b", "RC-3c", "RC-3d",
];
const SFDT: [&str; 10] = ["Kite", "F35", "RC1-a", "RC-1", "RC-2a", "RC-2b", "RC-3a", "RC-3b", "RC-3c", "RC-3d"];
const EXTENDED: [&str; 10] = ["RC-4a", "RC-4b", "RC-4c", "RC-4d", "RC-5a", "RC-5b", "RC-6a", "RC-6b", "RC-7a", "RC-7b"];

fn env_num(key: &str, default: u64) -> u64 {
    std::env::var(key).ok().and_then(|s| s.replace('_', "").parse().ok()).unwrap_or(default)
}

fn certification() -> Outcome {
    let workers = env_num("WEAKDEG_WORKERS", 1) as usize;
    if workers > 1 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    }
    let par_depth = if workers > 1 { 2 } else { 0 };
    for name in WEAK {
        let c = lookup(name).map_err(|e| e.to_string())?;
        certify_reducible_weak(&c).map_err(fail(format!("weak {name}")))?;
    }
    for name in SFDT {
        let c = lookup(name).map_err(|e| e.to_string())?;
        let t = Instant::now();
        let cert = certify_reducible_sfdt(&c, 4, SweepLimits { par_depth, ..SweepLimits::default() })
            .map_err(fail(format!("sfdt {name}")))?;
        eprintln!("  sfdt {name}: {} cases, {:.1}s", cert.cases, t.elapsed().as_secs_f64());
    }
    let secs = env_num("WEAKDEG_EXTENDED_SECS", 60);
    let limits = SweepLimits {
        max_nodes: u64::MAX,
        par_depth,
        time_limit: Some(Duration::from_secs(secs)),
    };
    let mut unfinished = Vec::new();
    for name in EXTENDED {
        let c = lookup(name).map_err(|e| e.to_string())?;
        let t = Instant::now();
        match certify_reducible_sfdt(&c, 4, limits) {
            Ok(cert) => eprintln!("  sfdt {name}: {} cases, {:.1}s", cert.cases, t.elapsed().as_secs_f64()),
            Err(Error::BudgetExceeded(why)) => {
                eprintln!("  sfdt {name}: {why} after {:.1}s", t.elapsed().as_secs_f64());
                unfinished.push(name);
            }
            Err(e) => return Err(format!("sfdt {name}: {e}")),
        }
    }
    if unfinished.is_empty() {
        Ok("weak ×13, sfdt ×20".into())
    } else {
        Err(format!(
            "weak ×13 and sfdt ×10 certified; {} of the RC-4..RC-7 sweeps unfinished after {secs}s each: {}",
            unfinished.len(),
            unfinished.join(", ")
        ))
    }
}

fn structure_audits() -> Outcome {
    let all = common::plane_fixtures();
    for fx in &all {
        let a = common::audit_fixture(fx).map_err(fail(&fx.name))?;
        if !a.witness_ok {
            return Err(format!("{}: witness {:?} does not check out", fx.name, a.report.designated));
        }
        if a.report.designated.index != fx.clause {
            return Err(format!("{}: clause {} designated, generator expects {}", fx.name, a.report.designated.index, fx.clause));
        }
    }
    Ok(format!("{} fixtures", all.len()))
}

fn random_cover(rng: &mut ChaCha8Rng) -> (Cover, FVector) {
    let n = rng.random_range(1..=5);
    let s = rng.random_range(1..=3);
    let g = random_graph(rng, n, 0.6);
    let full = rng.random_bool(0.5);
    let matchings = g
        .edges()
        .into_iter()
        .map(|e| {
            let mut p: Vec<usize> = (0..s).collect();
            p.shuffle(rng);
            let pairs = p.into_iter().enumerate().filter(|_| full || rng.random_bool(0.7)).collect();
            (e, pairs)
        })
        .collect::<Vec<_>>();
    let h = Cover::new(g, s, &matchings).unwrap();
    let f = FVector::new((0..n).map(|_| (0..s).map(|_| rng.random_range(0..=2)).collect()).collect(), 2).unwrap();
    (h, f)
}

fn sfdt_cross_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut found = 0;
    for _ in 0..300 {
        let (h, f) = random_cover(&mut rng);
        let a = find_sfdt(&h, &f).map_err(fail("find_sfdt"))?;
        let b = find_sfdt_raw(&h, &f).map_err(fail("raw"))?;
        if a.is_some() != b.is_some() {
            return Err(format!("solver {} but raw {}", a.is_some(), b.is_some()));
        }
        if let Some(r) = a {
            if !is_sfdt(&h, &f, &r).map_err(fail("is_sfdt"))? {
                return Err("returned transversal is not an SFDT".into());
            }
            found += 1;
        }
    }
    Ok(format!("300 covers, {found} with an SFDT"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("inequality chain", chain),
        ("weak (deg-1)-degeneracy vs GDP-trees", brooks),
        ("delete-only vs strict degeneracy", delete_only),
        ("closed forms", closed_forms),
        ("diff over a one-way split", diff_split),
        ("orientation obligations", orientations),
        ("reducibility certification", certification),
        ("structure audits", structure_audits),
        ("SFDT solver vs raw enumeration", sfdt_cross_check),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = run();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 && std::env::var("WEAKDEG_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
