//! Structure audits: on a plane graph meeting a theorem's hypothesis, report
//! which outcome of the theorem holds, with a witness.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::config::{find_matches, first_match, lookup, Match};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::plane::{FaceWalk, RotationSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Theorem {
    /// Plane, none of P-a..P-h, good outer 4⁻-cycle.
    Pairwise3456,
    /// None of A345-a/b; outcomes checked without the torus embedding.
    T345,
    /// Plane, no two 5-cycles sharing a vertex, outer triangle.
    Intersecting,
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Theorem> {
        match s.to_ascii_lowercase().as_str() {
            "pairwise3456" => Ok(Theorem::Pairwise3456),
            "t345" => Ok(Theorem::T345),
            "intersecting" => Ok(Theorem::Intersecting),
            _ => Err(Error::Format(format!("unknown theorem `{s}`"))),
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::Pairwise3456 => "pairwise3456",
            Theorem::T345 => "t345",
            Theorem::Intersecting => "intersecting",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Every vertex lies on the outer cycle.
    AllOnOuter,
    /// A vertex of degree at most 3 (internal where the theorem asks for it).
    SmallVertex { vertex: usize, degree: usize },
    Config { name: String, map: Vec<usize> },
    Regular { degree: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct Clause {
    /// 1-based position in the theorem statement.
    pub index: usize,
    pub witness: Witness,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub theorem: Theorem,
    pub designated: Clause,
    pub satisfied: Vec<Clause>,
}

fn cycle_vertices(outer: &FaceWalk) -> Vec<usize> {
    outer.vertices()
}

/// A cycle of length at most 4 on which no vertex has four neighbours.
pub fn is_good_cycle(g: &Graph, cycle: &[usize]) -> bool {
    let k = cycle.len();
    if !(3..=4).contains(&k) || cycle.iter().collect::<HashSet<_>>().len() != k {
        return false;
    }
    if cycle.iter().any(|&v| v >= g.n()) || !(0..k).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % k])) {
        return false;
    }
    (0..g.n()).all(|v| cycle.iter().filter(|&&c| g.has_edge(v, c)).count() < 4)
}

/// All 5-cycles, each once, as vertex sequences starting at their least vertex
/// with the second vertex below the last.
pub fn five_cycles(g: &Graph) -> Vec<[usize; 5]> {
    let mut out = Vec::new();
    for a in 0..g.n() {
        for &b in g.neighbors(a) {
            if b <= a {
                continue;
            }
            for &c in g.neighbors(b) {
                if c <= a || c == b {
                    continue;
                }
                for &d in g.neighbors(c) {
                    if d <= a || d == b || d == c {
                        continue;
                    }
                    for &e in g.neighbors(d) {
                        if e <= a || e == b || e == c || e == d || e <= b || !g.has_edge(e, a) {
                            continue;
                        }
                        out.push([a, b, c, d, e]);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Two distinct 5-cycles with a common vertex, if any.
pub fn intersecting_five_cycles(g: &Graph) -> Option<([usize; 5], [usize; 5])> {
    let cycles = five_cycles(g);
    let mut owner: Vec<Option<usize>> = vec![None; g.n()];
    for (i, c) in cycles.iter().enumerate() {
        for &v in c {
            if let Some(j) = owner[v] {
                return Some((cycles[j], cycles[i]));
            }
            owner[v] = Some(i);
        }
    }
    None
}

/// Brute force over vertex 5-sets and their cyclic orders. Test oracle.
pub fn has_intersecting_five_cycles_raw(g: &Graph) -> bool {
    let n = g.n();
    let mut cycles: Vec<(Vec<usize>, Vec<(usize, usize)>)> = Vec::new();
    let mut set = [0usize; 5];
    fn subsets(n: usize, k: usize, start: usize, cur: &mut [usize; 5], out: &mut dyn FnMut(&[usize; 5])) {
        if k == 5 {
            out(cur);
            return;
        }
        for v in start..n {
            cur[k] = v;
            subsets(n, k + 1, v + 1, cur, out);
        }
    }
    subsets(n, 0, 0, &mut set, &mut |s| {
        let mut seen = HashSet::new();
        for p in crate::engine::permutations(4) {
            let seq: Vec<usize> = std::iter::once(s[0]).chain(p.iter().map(|&i| s[i as usize + 1])).collect();
            if (0..5).all(|i| g.has_edge(seq[i], seq[(i + 1) % 5])) {
                let mut es: Vec<(usize, usize)> = (0..5)
                    .map(|i| (seq[i].min(seq[(i + 1) % 5]), seq[i].max(seq[(i + 1) % 5])))
                    .collect();
                es.sort_unstable();
                if seen.insert(es.clone()) {
                    cycles.push((s.to_vec(), es));
                }
            }
        }
    });
    for i in 0..cycles.len() {
        for j in i + 1..cycles.len() {
            if cycles[i].0.iter().any(|v| cycles[j].0.contains(v)) {
                return true;
            }
        }
    }
    false
}

fn forbidden(names: &[&str], g: &Graph) -> Result<Option<(String, Match)>> {
    for &name in names {
        let c = lookup(name)?;
        if let Some(m) = first_match(g, &c, &[]) {
            return Ok(Some((name.to_string(), m)));
        }
    }
    Ok(None)
}

fn config_clause(g: &Graph, names: &[&str], boundary: &[usize]) -> Result<Option<Witness>> {
    for &name in names {
        let c = lookup(name)?;
        if let Some(m) = find_matches(g, &c, boundary).into_iter().next() {
            return Ok(Some(Witness::Config {
                name: name.to_string(),
                map: m.map,
            }));
        }
    }
    Ok(None)
}

fn small_vertex(g: &Graph, boundary: &[usize]) -> Option<Witness> {
    (0..g.n()).find(|v| !boundary.contains(v) && g.degree(*v) <= 3).map(|v| Witness::SmallVertex {
        vertex: v,
        degree: g.degree(v),
    })
}

const P_NAMES: [&str; 8] = ["P-a", "P-b", "P-c", "P-d", "P-e", "P-f", "P-g", "P-h"];
const A345_NAMES: [&str; 2] = ["A345-a", "A345-b"];
const RC_NAMES: [&str; 3] = ["RC-a", "RC-b", "RC-c"];
const INTERSECTING_NAMES: [&str; 6] = ["Kite", "F35", "RC1-a", "RC-1", "RC-2a", "RC-2b"];

/// Checks the hypothesis of `theorem`, then evaluates every outcome in
/// statement order. The first satisfied one is designated.
pub fn audit_structure(g: &Graph, rot: &RotationSystem, outer: &FaceWalk, theorem: Theorem) -> Result<AuditReport> {
    if !g.is_connected() {
        return Err(Error::HypothesisViolated("graph is disconnected".into()));
    }
    let boundary = cycle_vertices(outer);
    if theorem == Theorem::T345 {
        // toroidal: the rotation is only checked for consistency
        rot.check_against(g)?;
    } else if !rot.faces(g)?.iter().any(|f| same_walk(f, outer)) {
        return Err(Error::HypothesisViolated("outer walk is not a face of the rotation system".into()));
    }
    match theorem {
        Theorem::Pairwise3456 => {
            if !is_good_cycle(g, &boundary) {
                return Err(Error::HypothesisViolated(format!("outer cycle {boundary:?} is not a good 4⁻-cycle")));
            }
            if let Some((name, m)) = forbidden(&P_NAMES, g)? {
                return Err(Error::HypothesisViolated(format!("contains {name} at {:?}", m.map)));
            }
        }
        Theorem::T345 => {
            if let Some((name, m)) = forbidden(&A345_NAMES, g)? {
                return Err(Error::HypothesisViolated(format!("contains {name} at {:?}", m.map)));
            }
        }
        Theorem::Intersecting => {
            if boundary.len() != 3 || !outer.is_cycle() {
                return Err(Error::HypothesisViolated("outer face is not a triangle".into()));
            }
            if let Some((a, b)) = intersecting_five_cycles(g) {
                return Err(Error::HypothesisViolated(format!("5-cycles {a:?} and {b:?} intersect")));
            }
        }
    }

    let mut satisfied = Vec::new();
    let mut push = |index: usize, w: Option<Witness>| {
        if let Some(witness) = w {
            satisfied.push(Clause { index, witness });
        }
    };
    match theorem {
        Theorem::Pairwise3456 | Theorem::Intersecting => {
            push(1, (boundary.len() == g.n()).then_some(Witness::AllOnOuter));
            push(2, small_vertex(g, &boundary));
            if theorem == Theorem::Pairwise3456 {
                push(3, config_clause(g, &["Kite"], &boundary)?);
                push(4, config_clause(g, &["F35"], &boundary)?);
            } else {
                push(3, config_clause(g, &INTERSECTING_NAMES, &boundary)?);
            }
        }
        Theorem::T345 => {
            push(1, small_vertex(g, &[]));
            push(2, config_clause(g, &["F35"], &[])?);
            push(3, config_clause(g, &RC_NAMES, &[])?);
            let d = g.degree(0);
            push(4, (d == 4 && (0..g.n()).all(|v| g.degree(v) == 4)).then_some(Witness::Regular { degree: 4 }));
        }
    }
    match satisfied.first().cloned() {
        Some(designated) => Ok(AuditReport {
            theorem,
            designated,
            satisfied,
        }),
        None => Err(Error::NoClauseHolds(format!("{theorem} on a graph with {} vertices", g.n()))),
    }
}

fn same_walk(a: &FaceWalk, b: &FaceWalk) -> bool {
    let (x, y) = (a.darts(), b.darts());
    if x.len() != y.len() {
        return false;
    }
    if x.is_empty() {
        return true;
    }
    (0..x.len()).any(|s| (0..x.len()).all(|i| x[(s + i) % x.len()] == y[i]))
}

/// Re-checks a witness against the graph.
pub fn witness_valid(g: &Graph, outer: &FaceWalk, theorem: Theorem, c: &Clause) -> Result<bool> {
    let boundary = cycle_vertices(outer);
    Ok(match &c.witness {
        Witness::AllOnOuter => boundary.iter().collect::<HashSet<_>>().len() == g.n(),
        Witness::SmallVertex { vertex, degree } => {
            *vertex < g.n()
                && g.degree(*vertex) == *degree
                && *degree <= 3
                && (theorem == Theorem::T345 || !boundary.contains(vertex))
        }
        Witness::Config { name, map } => {
            let cfg = lookup(name)?;
            let b: &[usize] = if theorem == Theorem::T345 { &[] } else { &boundary };
            crate::config::is_match(g, &cfg, b, &Match { map: map.clone() })
        }
        Witness::Regular { degree } => (0..g.n()).all(|v| g.degree(v) == *degree),
    })
}
