//! Configurations: small patterns with degree constraints, required non-edges
//! and an optional removal script, plus constrained matching into a host.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Removal sequence a_1..a_t and save pairs (r, m), positions 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Script {
    pub order: Vec<usize>,
    pub save_pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    name: String,
    labels: Vec<String>,
    pattern: Graph,
    degree: Vec<Option<usize>>,
    external: Vec<Option<usize>>,
    non_edges: Vec<(usize, usize)>,
    script: Option<Script>,
}

/// Pattern vertex `i` is sent to host vertex `map[i]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Match {
    pub map: Vec<usize>,
}

impl Match {
    pub fn identity(n: usize) -> Match {
        Match { map: (0..n).collect() }
    }

    pub fn image(&self) -> Vec<usize> {
        let mut v = self.map.clone();
        v.sort_unstable();
        v
    }
}

fn natural_key(s: &str) -> (String, u64, String) {
    let cut = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
    let (head, tail) = s.split_at(cut);
    let digits: String = tail.chars().take_while(|c| c.is_ascii_digit()).collect();
    let num = digits.parse().unwrap_or(0);
    (head.to_string(), num, tail[digits.len()..].to_string())
}

impl Configuration {
    /// Builds a configuration. `external[i]`, when the degree is fixed, must equal
    /// the degree minus the pattern degree and is filled in when absent.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        edges: &[(usize, usize)],
        degree: Vec<Option<usize>>,
        external: Vec<Option<usize>>,
        non_edges: &[(usize, usize)],
        script: Option<Script>,
    ) -> Result<Configuration> {
        let name = name.into();
        let n = labels.len();
        let bad = |msg: String| Error::Format(format!("{name}: {msg}"));
        if degree.len() != n || external.len() != n {
            return Err(bad("one degree and one external entry per vertex".into()));
        }
        if labels.iter().collect::<HashSet<_>>().len() != n {
            return Err(bad("repeated label".into()));
        }
        let pattern = Graph::from_edges(n, edges)?;
        let mut ne = Vec::new();
        for &(u, v) in non_edges {
            if u >= n || v >= n || u == v {
                return Err(bad(format!("bad non-edge {u}-{v}")));
            }
            if pattern.has_edge(u, v) {
                return Err(bad(format!("{}{} is both an edge and a non-edge", labels[u], labels[v])));
            }
            ne.push((u.min(v), u.max(v)));
        }
        ne.sort_unstable();
        ne.dedup();
        let mut ext = external;
        for v in 0..n {
            if let Some(d) = degree[v] {
                let p = pattern.degree(v);
                if d < p {
                    return Err(bad(format!("{} has pattern degree {p} above its degree {d}", labels[v])));
                }
                match ext[v] {
                    Some(x) if x != d - p => {
                        return Err(bad(format!("{}: external {x} disagrees with degree {d}", labels[v])))
                    }
                    _ => ext[v] = Some(d - p),
                }
            }
        }
        if let Some(sc) = &script {
            let mut seen = vec![false; n];
            for &v in &sc.order {
                if v >= n || seen[v] {
                    return Err(bad("script order is not a sequence of distinct vertices".into()));
                }
                seen[v] = true;
            }
            for v in 0..n {
                if seen[v] != degree[v].is_some() {
                    return Err(bad("script must cover exactly the vertices of fixed degree".into()));
                }
            }
            let t = sc.order.len();
            let mut used = HashSet::new();
            for &(r, m) in &sc.save_pairs {
                if !(1 <= r && r < m && m <= t) {
                    return Err(bad(format!("save pair ({r}, {m}) out of order")));
                }
                if !used.insert(r) || !used.insert(m) {
                    return Err(bad(format!("save pair ({r}, {m}) reuses a position")));
                }
                if !pattern.has_edge(sc.order[r - 1], sc.order[m - 1]) {
                    return Err(bad(format!("save pair ({r}, {m}) is not an edge")));
                }
            }
        }
        Ok(Configuration {
            name,
            labels,
            pattern,
            degree,
            external: ext,
            non_edges: ne,
            script,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn degree(&self, v: usize) -> Option<usize> {
        self.degree[v]
    }

    pub fn external(&self, v: usize) -> Option<usize> {
        self.external[v]
    }

    pub fn non_edges(&self) -> &[(usize, usize)] {
        &self.non_edges
    }

    pub fn script(&self) -> Option<&Script> {
        self.script.as_ref()
    }

    /// Vertex at 1-based script position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.script.as_ref().expect("configuration has a script").order[i - 1]
    }

    /// Same configuration with another name, extra edges and fewer non-edges.
    /// Degrees stay; externals are recomputed.
    pub fn with_edges(&self, name: &str, extra: &[(usize, usize)]) -> Result<Configuration> {
        let mut edges = self.pattern.edges();
        edges.extend_from_slice(extra);
        let ne: Vec<(usize, usize)> = self
            .non_edges
            .iter()
            .copied()
            .filter(|&(u, v)| !extra.iter().any(|&(a, b)| (a.min(b), a.max(b)) == (u, v)))
            .collect();
        Configuration::new(
            name,
            self.labels.clone(),
            &edges,
            self.degree.clone(),
            vec![None; self.n()],
            &ne,
            self.script.clone(),
        )
    }

    /// The pattern with `external(v)` pendant leaves on every vertex, so that
    /// the identity is a match. Leaves get ids from `n()` on.
    pub fn stub_host(&self) -> Graph {
        let n = self.n();
        let leaves: usize = (0..n).map(|v| self.external[v].unwrap_or(0)).sum();
        let mut g = Graph::new(n + leaves);
        for (u, v) in self.pattern.edges() {
            g.add_edge(u, v).expect("pattern edge");
        }
        let mut next = n;
        for v in 0..n {
            for _ in 0..self.external[v].unwrap_or(0) {
                g.add_edge(v, next).expect("fresh leaf");
                next += 1;
            }
        }
        g
    }
}

// ---------------------------------------------------------------------------
// text format

/// Parses the catalog format: `config NAME` / `pattern NAME` blocks holding
/// `vertex L D`, `edge L M`, `nonedge L M`, `order L..`, `pair R M`, closed by `end`.
pub fn parse_catalog(text: &str) -> Result<Vec<Configuration>> {
    struct Block {
        name: String,
        line: usize,
        scripted: bool,
        vertices: Vec<(String, usize)>,
        edges: Vec<(String, String)>,
        non_edges: Vec<(String, String)>,
        order: Vec<String>,
        pairs: Vec<(usize, usize)>,
    }
    let mut out = Vec::new();
    let mut cur: Option<Block> = None;
    let mut names = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let col = raw.find(toks[0]).unwrap_or(0) + 1;
        let num = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::parse(line, col, format!("expected a number, got `{s}`")))
        };
        let arity = |k: usize| -> Result<()> {
            if toks.len() != k + 1 {
                return Err(Error::parse(line, col, format!("`{}` takes {k} arguments", toks[0])));
            }
            Ok(())
        };
        match (toks[0], cur.as_mut()) {
            ("config" | "pattern", None) => {
                arity(1)?;
                if !names.insert(toks[1].to_string()) {
                    return Err(Error::parse(line, col, format!("duplicate name `{}`", toks[1])));
                }
                cur = Some(Block {
                    name: toks[1].to_string(),
                    line,
                    scripted: toks[0] == "config",
                    vertices: vec![],
                    edges: vec![],
                    non_edges: vec![],
                    order: vec![],
                    pairs: vec![],
                });
            }
            ("vertex", Some(b)) => {
                arity(2)?;
                b.vertices.push((toks[1].to_string(), num(toks[2])?));
            }
            ("edge", Some(b)) => {
                arity(2)?;
                b.edges.push((toks[1].to_string(), toks[2].to_string()));
            }
            ("nonedge", Some(b)) => {
                arity(2)?;
                b.non_edges.push((toks[1].to_string(), toks[2].to_string()));
            }
            ("order", Some(b)) => b.order.extend(toks[1..].iter().map(|s| s.to_string())),
            ("pair", Some(b)) => {
                arity(2)?;
                b.pairs.push((num(toks[1])?, num(toks[2])?));
            }
            ("end", Some(_)) => {
                let b = cur.take().expect("open block");
                let mut labels: Vec<String> = b.vertices.iter().map(|(l, _)| l.clone()).collect();
                for (u, v) in b.edges.iter().chain(&b.non_edges) {
                    labels.push(u.clone());
                    labels.push(v.clone());
                }
                labels.extend(b.order.iter().cloned());
                labels.sort_by_key(|l| natural_key(l));
                labels.dedup();
                let idx: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
                let mut degree = vec![None; labels.len()];
                for (l, d) in &b.vertices {
                    degree[idx[l.as_str()]] = Some(*d);
                }
                let pairs = |v: &[(String, String)]| -> Vec<(usize, usize)> {
                    v.iter().map(|(a, c)| (idx[a.as_str()], idx[c.as_str()])).collect()
                };
                let script = b.scripted.then(|| Script {
                    order: b.order.iter().map(|l| idx[l.as_str()]).collect(),
                    save_pairs: b.pairs.clone(),
                });
                let n = labels.len();
                let cfg = Configuration::new(
                    b.name.clone(),
                    labels.clone(),
                    &pairs(&b.edges),
                    degree,
                    vec![None; n],
                    &pairs(&b.non_edges),
                    script,
                )
                .map_err(|e| Error::parse(b.line, 1, e.to_string()))?;
                out.push(cfg);
            }
            (kw, _) => return Err(Error::parse(line, col, format!("unexpected `{kw}`"))),
        }
    }
    if let Some(b) = cur {
        return Err(Error::parse(b.line, 1, format!("block `{}` has no `end`", b.name)));
    }
    Ok(out)
}

pub const CATALOG_TEXT: &str = include_str!("../data/catalog.txt");

/// Hex SHA-256 of the shipped catalog file.
pub fn catalog_digest() -> String {
    hex::encode(Sha256::digest(CATALOG_TEXT.as_bytes()))
}

/// Every configuration and forbidden pattern, in file order.
pub fn catalog() -> Vec<Configuration> {
    parse_catalog(CATALOG_TEXT).expect("shipped catalog parses")
}

pub fn lookup(name: &str) -> Result<Configuration> {
    catalog()
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownConfiguration(name.to_string()))
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: String,
    degree: Option<usize>,
    external: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct ScriptJson {
    order: Vec<String>,
    save_pairs: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
struct ConfigJson {
    name: String,
    vertices: Vec<VertexJson>,
    edges: Vec<[String; 2]>,
    non_edges: Vec<[String; 2]>,
    script: Option<ScriptJson>,
}

pub fn config_to_json(c: &Configuration) -> String {
    let l = |v: usize| c.labels[v].clone();
    let j = ConfigJson {
        name: c.name.clone(),
        vertices: (0..c.n())
            .map(|v| VertexJson {
                id: l(v),
                degree: c.degree[v],
                external: c.external[v],
            })
            .collect(),
        edges: c.pattern.edges().into_iter().map(|(u, v)| [l(u), l(v)]).collect(),
        non_edges: c.non_edges.iter().map(|&(u, v)| [l(u), l(v)]).collect(),
        script: c.script.as_ref().map(|s| ScriptJson {
            order: s.order.iter().map(|&v| l(v)).collect(),
            save_pairs: s.save_pairs.iter().map(|&(r, m)| [r, m]).collect(),
        }),
    };
    serde_json::to_string_pretty(&j).expect("serializable")
}

pub fn config_from_json(text: &str) -> Result<Configuration> {
    let j: ConfigJson = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
    let labels: Vec<String> = j.vertices.iter().map(|v| v.id.clone()).collect();
    let idx = |s: &str| -> Result<usize> {
        labels
            .iter()
            .position(|l| l == s)
            .ok_or_else(|| Error::Format(format!("unknown vertex id `{s}`")))
    };
    let pairs = |v: &[[String; 2]]| -> Result<Vec<(usize, usize)>> { v.iter().map(|[a, b]| Ok((idx(a)?, idx(b)?))).collect() };
    let script = match &j.script {
        None => None,
        Some(s) => Some(Script {
            order: s.order.iter().map(|l| idx(l)).collect::<Result<_>>()?,
            save_pairs: s.save_pairs.iter().map(|&[r, m]| (r, m)).collect(),
        }),
    };
    Configuration::new(
        j.name.clone(),
        labels.clone(),
        &pairs(&j.edges)?,
        j.vertices.iter().map(|v| v.degree).collect(),
        j.vertices.iter().map(|v| v.external).collect(),
        &pairs(&j.non_edges)?,
        script,
    )
}

// ---------------------------------------------------------------------------
// matching

struct Matcher<'a> {
    g: &'a Graph,
    c: &'a Configuration,
    order: Vec<usize>,
    banned: Vec<bool>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Matcher<'_> {
    fn candidates(&self, p: usize) -> Vec<usize> {
        // Anchor on an already mapped pattern neighbour when there is one.
        let anchor = self.c.pattern.neighbors(p).iter().find(|&&q| self.map[q] != usize::MAX);
        let pool: Vec<usize> = match anchor {
            Some(&q) => self.g.neighbors(self.map[q]).to_vec(),
            None => (0..self.g.n()).collect(),
        };
        pool.into_iter().filter(|&h| self.fits(p, h)).collect()
    }

    fn fits(&self, p: usize, h: usize) -> bool {
        if self.used[h] || self.banned[h] {
            return false;
        }
        if let Some(d) = self.c.degree[p] {
            if self.g.degree(h) != d {
                return false;
            }
        }
        if self.c.pattern.neighbors(p).iter().any(|&q| self.map[q] != usize::MAX && !self.g.has_edge(h, self.map[q])) {
            return false;
        }
        !self
            .c
            .non_edges
            .iter()
            .filter_map(|&(a, b)| if a == p { Some(b) } else if b == p { Some(a) } else { None })
            .any(|q| self.map[q] != usize::MAX && self.g.has_edge(h, self.map[q]))
    }

    fn externals_ok(&self) -> bool {
        (0..self.c.n()).all(|p| match self.c.external[p] {
            None => true,
            Some(x) => self.g.neighbors(self.map[p]).iter().filter(|&&w| !self.used[w]).count() == x,
        })
    }

    fn run(&mut self, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if k == self.order.len() {
            return self.externals_ok() && visit(&self.map);
        }
        let p = self.order[k];
        for h in self.candidates(p) {
            self.map[p] = h;
            self.used[h] = true;
            let stop = self.run(k + 1, visit);
            self.used[h] = false;
            self.map[p] = usize::MAX;
            if stop {
                return true;
            }
        }
        false
    }
}

/// Breadth-first from the most constrained vertex, so later vertices are
/// anchored to mapped neighbours.
fn match_order(c: &Configuration) -> Vec<usize> {
    let n = c.n();
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(n);
    let mut roots: Vec<usize> = (0..n).collect();
    roots.sort_by_key(|&v| (c.degree[v].is_none(), std::cmp::Reverse(c.pattern.degree(v)), v));
    for r in roots {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut queue = std::collections::VecDeque::from([r]);
        while let Some(u) = queue.pop_front() {
            out.push(u);
            for &w in c.pattern.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    out
}

fn for_each_match(g: &Graph, c: &Configuration, boundary: &[usize], visit: &mut dyn FnMut(&[usize]) -> bool) {
    let mut banned = vec![false; g.n()];
    for &b in boundary {
        if b < g.n() {
            banned[b] = true;
        }
    }
    if c.n() > g.n() {
        return;
    }
    let mut m = Matcher {
        g,
        c,
        order: match_order(c),
        banned,
        map: vec![usize::MAX; c.n()],
        used: vec![false; g.n()],
    };
    m.run(0, visit);
}

/// All matches avoiding `boundary`, sorted by their maps.
pub fn find_matches(g: &Graph, c: &Configuration, boundary: &[usize]) -> Vec<Match> {
    let mut out = Vec::new();
    for_each_match(g, c, boundary, &mut |m| {
        out.push(Match { map: m.to_vec() });
        false
    });
    out.sort();
    out
}

/// Some match avoiding `boundary`, if any. Not necessarily the least one.
pub fn first_match(g: &Graph, c: &Configuration, boundary: &[usize]) -> Option<Match> {
    let mut out = None;
    for_each_match(g, c, boundary, &mut |m| {
        out = Some(Match { map: m.to_vec() });
        true
    });
    out
}

/// Checks one map against every match condition.
pub fn is_match(g: &Graph, c: &Configuration, boundary: &[usize], m: &Match) -> bool {
    let n = c.n();
    if m.map.len() != n || m.map.iter().any(|&h| h >= g.n() || boundary.contains(&h)) {
        return false;
    }
    if m.map.iter().collect::<HashSet<_>>().len() != n {
        return false;
    }
    let inside: HashSet<usize> = m.map.iter().copied().collect();
    c.pattern.edges().iter().all(|&(u, v)| g.has_edge(m.map[u], m.map[v]))
        && c.non_edges.iter().all(|&(u, v)| !g.has_edge(m.map[u], m.map[v]))
        && (0..n).all(|p| c.degree[p].is_none_or(|d| g.degree(m.map[p]) == d))
        && (0..n).all(|p| {
            c.external[p].is_none_or(|x| g.neighbors(m.map[p]).iter().filter(|w| !inside.contains(w)).count() == x)
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_parses() {
        let cat = catalog();
        assert_eq!(cat.len(), 36);
        let kite = lookup("Kite").unwrap();
        assert_eq!(kite.n(), 4);
        assert_eq!(kite.non_edges(), &[(1, 3)]);
        assert!((0..4).all(|v| kite.degree(v) == Some(4)));
        assert!(lookup("nope").is_err());
    }

    #[test]
    fn natural_label_order() {
        let c = lookup("RC-4a").unwrap();
        assert_eq!(c.label(9), "a10");
        assert_eq!(c.label(0), "a1");
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e = parse_catalog("config X\n  vertex a1 four\nend\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        assert!(parse_catalog("config X\n edge a b\n").is_err());
        assert!(parse_catalog("config X\n vertex a 4\n edge a b\n order a b\nend\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        for c in catalog() {
            let back = config_from_json(&config_to_json(&c)).unwrap();
            assert_eq!(back, c, "{}", c.name());
        }
    }

    #[test]
    fn kite_in_octahedron() {
        let kite = lookup("Kite").unwrap();
        let oct = Graph::octahedron();
        let ms = find_matches(&oct, &kite, &[]);
        assert!(!ms.is_empty());
        assert!(ms.iter().all(|m| is_match(&oct, &kite, &[], m)));
        assert!(find_matches(&Graph::complete(4), &kite, &[]).is_empty());
        let all: Vec<usize> = (0..6).collect();
        assert!(find_matches(&oct, &kite, &all).is_empty());
    }

    #[test]
    fn stub_host_matches_identity() {
        for c in catalog().iter().filter(|c| c.script().is_some()) {
            let h = c.stub_host();
            assert!(is_match(&h, c, &[], &Match::identity(c.n())), "{}", c.name());
        }
    }
}
