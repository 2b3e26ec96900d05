//! DP-covers, strictly f-degenerate transversals and the list / forested reductions.
//!
//! Fan slots are 0-based in memory. The JSON form uses 1-based slots.

use serde::{Deserialize, Serialize};

use crate::degeneracy::peel;
use crate::error::{Error, Result};
use crate::graph::Graph;

const NONE: u8 = u8::MAX;

/// A cover of `base`: fans of size `s` and one matching per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    base: Graph,
    s: usize,
    edges: Vec<(usize, usize)>,
    // fwd[e][i]: slot of v matched to slot i of u, for edges[e] = (u, v), u < v
    fwd: Vec<Vec<u8>>,
    bwd: Vec<Vec<u8>>,
    // per vertex: (neighbor, edge index)
    inc: Vec<Vec<(usize, usize)>>,
}

impl Cover {
    /// Builds a cover from explicit matchings. Edges of `base` without an entry
    /// get the empty matching.
    pub fn new(base: Graph, s: usize, matchings: &[((usize, usize), Vec<(usize, usize)>)]) -> Result<Cover> {
        if s == 0 || s >= NONE as usize {
            return Err(Error::InvalidCover(format!("fan size {s} out of range")));
        }
        let edges = base.edges();
        let mut fwd = vec![vec![NONE; s]; edges.len()];
        let mut bwd = vec![vec![NONE; s]; edges.len()];
        let mut seen = vec![false; edges.len()];
        for ((a, b), pairs) in matchings {
            let (u, v, flip) = if a < b { (*a, *b, false) } else { (*b, *a, true) };
            let e = edges
                .binary_search(&(u, v))
                .map_err(|_| Error::InvalidCover(format!("{a}-{b} is not an edge of the base graph")))?;
            if std::mem::replace(&mut seen[e], true) {
                return Err(Error::InvalidCover(format!("edge {u}-{v} listed twice")));
            }
            for &(x, y) in pairs {
                let (i, j) = if flip { (y, x) } else { (x, y) };
                if i >= s || j >= s {
                    return Err(Error::InvalidCover(format!("slot out of range on edge {u}-{v}")));
                }
                if fwd[e][i] != NONE || bwd[e][j] != NONE {
                    return Err(Error::InvalidCover(format!("edge {u}-{v}: pairs do not form a matching")));
                }
                fwd[e][i] = j as u8;
                bwd[e][j] = i as u8;
            }
        }
        Ok(Cover::assemble(base, s, edges, fwd, bwd))
    }

    fn assemble(base: Graph, s: usize, edges: Vec<(usize, usize)>, fwd: Vec<Vec<u8>>, bwd: Vec<Vec<u8>>) -> Cover {
        let mut inc = vec![Vec::new(); base.n()];
        for (e, &(u, v)) in edges.iter().enumerate() {
            inc[u].push((v, e));
            inc[v].push((u, e));
        }
        Cover {
            base,
            s,
            edges,
            fwd,
            bwd,
            inc,
        }
    }

    /// Full covers given by one permutation per edge of `base.edges()`:
    /// `perms[e][i]` is the slot of `v` matched to slot `i` of `u` (u < v).
    pub fn from_permutations(base: Graph, s: usize, perms: &[Vec<u8>]) -> Result<Cover> {
        let edges = base.edges();
        if perms.len() != edges.len() {
            return Err(Error::InvalidCover(format!("{} permutations for {} edges", perms.len(), edges.len())));
        }
        let mut bwd = Vec::with_capacity(edges.len());
        for (e, p) in perms.iter().enumerate() {
            let mut inv = vec![NONE; s];
            if p.len() != s {
                return Err(Error::InvalidCover(format!("permutation {e} has length {}", p.len())));
            }
            for (i, &j) in p.iter().enumerate() {
                if j as usize >= s || inv[j as usize] != NONE {
                    return Err(Error::InvalidCover(format!("entry {e} is not a permutation")));
                }
                inv[j as usize] = i as u8;
            }
            bwd.push(inv);
        }
        Ok(Cover::assemble(base, s, edges, perms.to_vec(), bwd))
    }

    /// Slot `i` of every vertex matched to slot `i` of each neighbor.
    pub fn identity(base: &Graph, s: usize) -> Cover {
        let id: Vec<u8> = (0..s as u8).collect();
        let perms = vec![id; base.m()];
        Cover::from_permutations(base.clone(), s, &perms).expect("identity is a permutation")
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// The slot of `w` matched to slot `i` of `u`, if any.
    pub fn partner(&self, u: usize, i: usize, w: usize) -> Option<usize> {
        let (a, b) = if u < w { (u, w) } else { (w, u) };
        let e = self.edges.binary_search(&(a, b)).ok()?;
        let j = if u < w { self.fwd[e][i] } else { self.bwd[e][i] };
        (j != NONE).then_some(j as usize)
    }

    /// Matching pairs of edge `u`-`v` as `(slot of u, slot of v)`, sorted.
    pub fn pairs(&self, u: usize, v: usize) -> Vec<(usize, usize)> {
        (0..self.s)
            .filter_map(|i| self.partner(u, i, v).map(|j| (i, j)))
            .collect()
    }

    /// Every matching is perfect.
    pub fn is_full(&self) -> bool {
        self.fwd.iter().all(|p| p.iter().all(|&j| j != NONE))
    }

    /// Relabels fans: slot `i` of `v` becomes `sigma[v][i]`.
    pub fn relabel(&self, sigma: &[Vec<usize>]) -> Result<Cover> {
        check_perms(sigma, self.n(), self.s)?;
        let mut fwd = vec![vec![NONE; self.s]; self.edges.len()];
        let mut bwd = vec![vec![NONE; self.s]; self.edges.len()];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            for i in 0..self.s {
                let j = self.fwd[e][i];
                if j != NONE {
                    let (a, b) = (sigma[u][i], sigma[v][j as usize]);
                    fwd[e][a] = b as u8;
                    bwd[e][b] = a as u8;
                }
            }
        }
        Ok(Cover::assemble(self.base.clone(), self.s, self.edges.clone(), fwd, bwd))
    }

    /// Number of matching edges of `H`.
    pub fn matching_size(&self) -> usize {
        self.fwd.iter().flatten().filter(|&&j| j != NONE).count()
    }
}

fn check_perms(sigma: &[Vec<usize>], n: usize, s: usize) -> Result<()> {
    if sigma.len() != n {
        return Err(Error::InvalidCover(format!("{} relabelings for {n} vertices", sigma.len())));
    }
    for p in sigma {
        let mut seen = vec![false; s];
        if p.len() != s || p.iter().any(|&x| x >= s || std::mem::replace(&mut seen[x], true)) {
            return Err(Error::InvalidCover("relabeling is not a permutation".into()));
        }
    }
    Ok(())
}

/// `f` on the fan vertices, with values in `0..=max`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FVector {
    values: Vec<Vec<u8>>,
    max: u8,
}

impl FVector {
    pub fn new(values: Vec<Vec<u8>>, max: u8) -> Result<FVector> {
        if let Some(s) = values.first().map(Vec::len) {
            if values.iter().any(|r| r.len() != s) {
                return Err(Error::InvalidBudget("fans of different sizes".into()));
            }
        }
        if values.iter().flatten().any(|&x| x > max) {
            return Err(Error::InvalidBudget(format!("value above {max}")));
        }
        Ok(FVector { values, max })
    }

    pub fn constant(n: usize, s: usize, c: u8) -> FVector {
        FVector {
            values: vec![vec![c; s]; n],
            max: c,
        }
    }

    pub fn get(&self, v: usize, i: usize) -> u8 {
        self.values[v][i]
    }

    pub fn fan(&self, v: usize) -> &[u8] {
        &self.values[v]
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.values
    }

    pub fn max(&self) -> u8 {
        self.max
    }

    /// `f(v, 1) + ... + f(v, s)`.
    pub fn sum(&self, v: usize) -> u32 {
        self.values[v].iter().map(|&x| x as u32).sum()
    }

    pub fn check(&self, h: &Cover) -> Result<()> {
        if self.values.len() != h.n() || self.values.iter().any(|r| r.len() != h.s()) {
            return Err(Error::InvalidBudget("f is not defined on exactly V(H)".into()));
        }
        Ok(())
    }

    /// Permutes each fan the same way `Cover::relabel` does.
    pub fn relabel(&self, sigma: &[Vec<usize>]) -> FVector {
        let values = self
            .values
            .iter()
            .zip(sigma)
            .map(|(row, p)| {
                let mut out = vec![0; row.len()];
                for (i, &x) in row.iter().enumerate() {
                    out[p[i]] = x;
                }
                out
            })
            .collect();
        FVector { values, max: self.max }
    }
}

/// One fan slot per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Transversal(pub Vec<usize>);

impl Transversal {
    pub fn check(&self, h: &Cover) -> Result<()> {
        if self.0.len() != h.n() {
            return Err(Error::InvalidCover(format!("transversal has {} entries, need {}", self.0.len(), h.n())));
        }
        if let Some(v) = self.0.iter().position(|&i| i >= h.s()) {
            return Err(Error::InvalidCover(format!("fan index {} at vertex {v} out of range", self.0[v])));
        }
        Ok(())
    }

    pub fn slot(&self, v: usize) -> usize {
        self.0[v]
    }
}

/// H[R], as a graph on the base vertex ids.
pub fn transversal_subgraph(h: &Cover, r: &Transversal) -> Result<Graph> {
    r.check(h)?;
    let mut g = Graph::new(h.n());
    for (e, &(u, v)) in h.edges.iter().enumerate() {
        if h.fwd[e][r.0[u]] as usize == r.0[v] {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

pub fn is_sfdt(h: &Cover, f: &FVector, r: &Transversal) -> Result<bool> {
    f.check(h)?;
    let g = transversal_subgraph(h, r)?;
    let budget: Vec<u32> = (0..h.n()).map(|v| f.get(v, r.0[v]) as u32).collect();
    Ok(peel(&g, &budget).is_some())
}

struct Solver<'a> {
    h: &'a Cover,
    f: &'a FVector,
    slot: Vec<usize>,
    order: Vec<usize>,
}

impl Solver<'_> {
    fn conflicts(&self, u: usize, w: usize, e: usize) -> bool {
        let (i, j) = (self.slot[u], self.slot[w]);
        if u < w {
            self.h.fwd[e][i] as usize == j
        } else {
            self.h.bwd[e][i] as usize == j
        }
    }

    // Strict f-degeneracy is hereditary, so the chosen part must peel on its own.
    fn peels(&self) -> bool {
        let n = self.h.n();
        let mut deg = vec![0u32; n];
        let mut alive = vec![false; n];
        let mut stack = Vec::new();
        for v in 0..n {
            if self.slot[v] == usize::MAX {
                continue;
            }
            alive[v] = true;
            deg[v] = self.h.inc[v]
                .iter()
                .filter(|&&(w, e)| self.slot[w] != usize::MAX && self.conflicts(v, w, e))
                .count() as u32;
        }
        for v in 0..n {
            if alive[v] && deg[v] < self.f.get(v, self.slot[v]) as u32 {
                stack.push(v);
                alive[v] = false;
            }
        }
        while let Some(v) = stack.pop() {
            for &(w, e) in &self.h.inc[v] {
                if alive[w] && self.conflicts(v, w, e) {
                    deg[w] -= 1;
                    if deg[w] < self.f.get(w, self.slot[w]) as u32 {
                        alive[w] = false;
                        stack.push(w);
                    }
                }
            }
        }
        !alive.iter().any(|&a| a)
    }

    fn go(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let v = self.order[k];
        let mut slots: Vec<usize> = (0..self.h.s).filter(|&i| self.f.get(v, i) > 0).collect();
        slots.sort_by_key(|&i| std::cmp::Reverse(self.f.get(v, i)));
        for i in slots {
            self.slot[v] = i;
            if self.peels() && self.go(k + 1) {
                return true;
            }
        }
        self.slot[v] = usize::MAX;
        false
    }
}

/// Completes `fixed` (one optional slot per vertex) to a strictly f-degenerate
/// transversal, or reports that none exists.
pub fn extend_sfdt(h: &Cover, f: &FVector, fixed: &[Option<usize>]) -> Result<Option<Transversal>> {
    f.check(h)?;
    if fixed.len() != h.n() {
        return Err(Error::InvalidCover(format!("partial transversal has {} entries", fixed.len())));
    }
    let slot: Vec<usize> = fixed.iter().map(|x| x.unwrap_or(usize::MAX)).collect();
    if let Some(v) = slot.iter().position(|&i| i != usize::MAX && i >= h.s) {
        return Err(Error::InvalidCover(format!("fan index at vertex {v} out of range")));
    }
    let g = &h.base;
    let mut order: Vec<usize> = (0..h.n()).filter(|&v| fixed[v].is_none()).collect();
    order.sort_by_key(|&v| (f.sum(v) as i64 - g.degree(v) as i64, v));
    let mut solver = Solver { h, f, slot, order };
    if !solver.peels() {
        return Err(Error::Precondition("the fixed part is not strictly f-degenerate".into()));
    }
    if !solver.go(0) {
        return Ok(None);
    }
    let r = Transversal(solver.slot);
    debug_assert!(is_sfdt(h, f, &r)?);
    Ok(Some(r))
}

pub fn find_sfdt(h: &Cover, f: &FVector) -> Result<Option<Transversal>> {
    extend_sfdt(h, f, &vec![None; h.n()])
}

/// Tries all `s^n` transversals. Test oracle.
pub fn find_sfdt_raw(h: &Cover, f: &FVector) -> Result<Option<Transversal>> {
    let (n, s) = (h.n(), h.s());
    let mut r = Transversal(vec![0; n]);
    loop {
        if is_sfdt(h, f, &r)? {
            return Ok(Some(r));
        }
        let mut k = 0;
        while k < n && r.0[k] + 1 == s {
            r.0[k] = 0;
            k += 1;
        }
        if k == n {
            return Ok(None);
        }
        r.0[k] += 1;
    }
}

/// List assignment as a cover: slot `i` of `v` is the `i`-th smallest colour of
/// its list, unused slots get `f = 0`, and equal colours are matched across edges.
pub fn cover_from_lists(g: &Graph, lists: &[Vec<u32>]) -> Result<(Cover, FVector)> {
    if lists.len() != g.n() {
        return Err(Error::InvalidCover(format!("{} lists for {} vertices", lists.len(), g.n())));
    }
    let mut sorted = Vec::with_capacity(lists.len());
    for (v, l) in lists.iter().enumerate() {
        let mut l = l.clone();
        l.sort_unstable();
        l.dedup();
        if l.is_empty() {
            return Err(Error::InvalidCover(format!("empty list at vertex {v}")));
        }
        if l.len() != lists[v].len() {
            return Err(Error::InvalidCover(format!("repeated colour in the list of vertex {v}")));
        }
        sorted.push(l);
    }
    let s = sorted.iter().map(Vec::len).max().unwrap_or(1);
    let mut matchings = Vec::new();
    for (u, v) in g.edges() {
        let mut pairs = Vec::new();
        for (i, c) in sorted[u].iter().enumerate() {
            if let Ok(j) = sorted[v].binary_search(c) {
                pairs.push((i, j));
            }
        }
        matchings.push(((u, v), pairs));
    }
    let values = sorted
        .iter()
        .map(|l| (0..s).map(|i| u8::from(i < l.len())).collect())
        .collect();
    Ok((Cover::new(g.clone(), s, &matchings)?, FVector::new(values, 1)?))
}

/// `k` identical fans with `f = 2`: transversals are partitions into `k` forests.
pub fn cover_for_forested(g: &Graph, k: usize) -> Result<(Cover, FVector)> {
    if k == 0 {
        return Err(Error::InvalidCover("need at least one colour".into()));
    }
    Ok((Cover::identity(g, k), FVector::constant(g.n(), k, 2)))
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    u: usize,
    v: usize,
    pairs: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
struct CoverJson {
    n: usize,
    s: usize,
    edges: Vec<EdgeJson>,
    f: Vec<Vec<u8>>,
}

/// Serializes `(H, f)`; fan slots are written 1-based.
pub fn cover_to_json(h: &Cover, f: &FVector) -> Result<String> {
    f.check(h)?;
    let doc = CoverJson {
        n: h.n(),
        s: h.s(),
        edges: h
            .edges
            .iter()
            .map(|&(u, v)| EdgeJson {
                u,
                v,
                pairs: h.pairs(u, v).into_iter().map(|(i, j)| [i + 1, j + 1]).collect(),
            })
            .collect(),
        f: f.rows().to_vec(),
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Format(e.to_string()))
}

/// Reads `(H, f)`. The base graph is the set of listed edges; `f` may use 0, 1, 2.
pub fn cover_from_json(text: &str) -> Result<(Cover, FVector)> {
    let doc: CoverJson = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let mut g = Graph::new(doc.n);
    let mut matchings = Vec::with_capacity(doc.edges.len());
    for e in &doc.edges {
        g.add_edge(e.u, e.v)?;
        let mut pairs = Vec::with_capacity(e.pairs.len());
        for &[i, j] in &e.pairs {
            if i == 0 || j == 0 {
                return Err(Error::InvalidCover(format!("fan indices are 1-based (edge {}-{})", e.u, e.v)));
            }
            pairs.push((i - 1, j - 1));
        }
        matchings.push(((e.u, e.v), pairs));
    }
    let h = Cover::new(g, doc.s, &matchings)?;
    let f = FVector::new(doc.f, 2)?;
    f.check(&h)?;
    Ok((h, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_transversals(n: usize, s: usize) -> Vec<Transversal> {
        let mut out = vec![Transversal(vec![])];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..s).map(move |i| {
                        let mut v = t.0.clone();
                        v.push(i);
                        Transversal(v)
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn c4_transversal_subgraphs() {
        let h = Cover::identity(&Graph::cycle(4), 2);
        assert_eq!(transversal_subgraph(&h, &Transversal(vec![0; 4])).unwrap(), Graph::cycle(4));
        assert_eq!(transversal_subgraph(&h, &Transversal(vec![0, 1, 0, 1])).unwrap().m(), 0);
        assert!(transversal_subgraph(&h, &Transversal(vec![0, 2, 0, 1])).is_err());
    }

    #[test]
    fn k3_random_cover_direct_lookup() {
        let g = Graph::complete(3);
        let h = Cover::new(
            g.clone(),
            3,
            &[((0, 1), vec![(0, 2), (1, 0)]), ((1, 2), vec![(2, 2), (0, 1), (1, 0)]), ((0, 2), vec![(2, 0)])],
        )
        .unwrap();
        for r in all_transversals(3, 3) {
            let sub = transversal_subgraph(&h, &r).unwrap();
            for (u, v) in g.edges() {
                assert_eq!(sub.has_edge(u, v), h.pairs(u, v).contains(&(r.0[u], r.0[v])));
            }
        }
    }

    #[test]
    fn rejects_non_matchings() {
        let g = Graph::path(2);
        assert!(Cover::new(g.clone(), 2, &[((0, 1), vec![(0, 0), (0, 1)])]).is_err());
        assert!(Cover::new(g.clone(), 2, &[((0, 1), vec![(0, 2)])]).is_err());
        assert!(Cover::new(g.clone(), 2, &[((0, 2), vec![])]).is_err());
        assert!(Cover::from_permutations(g, 2, &[vec![1, 1]]).is_err());
    }

    #[test]
    fn small_sfdt_cases() {
        let one = Cover::identity(&Graph::new(1), 1);
        assert_eq!(find_sfdt(&one, &FVector::constant(1, 1, 1)).unwrap(), Some(Transversal(vec![0])));

        let k2 = Cover::identity(&Graph::path(2), 1);
        assert_eq!(find_sfdt(&k2, &FVector::constant(2, 1, 1)).unwrap(), None);
        let zero = FVector::constant(2, 1, 0);
        assert!(!is_sfdt(&k2, &zero, &Transversal(vec![0, 0])).unwrap());

        let k3 = Graph::complete(3);
        assert_eq!(find_sfdt(&Cover::identity(&k3, 2), &FVector::constant(3, 2, 1)).unwrap(), None);
        assert!(find_sfdt(&Cover::identity(&k3, 3), &FVector::constant(3, 3, 1)).unwrap().is_some());
    }

    #[test]
    fn extension_keeps_fixed_part() {
        let g = Graph::cycle(4);
        let h = Cover::identity(&g, 2);
        let f = FVector::constant(4, 2, 1);
        let r = extend_sfdt(&h, &f, &[Some(1), None, None, None]).unwrap().unwrap();
        assert_eq!(r.0, vec![1, 0, 1, 0]);
        let full = [Some(0), Some(1), Some(0), Some(1)];
        assert_eq!(extend_sfdt(&h, &f, &full).unwrap().unwrap().0, vec![0, 1, 0, 1]);
        assert!(matches!(
            extend_sfdt(&h, &f, &[Some(0), Some(0), None, None]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn list_reduction_examples() {
        let c4 = Graph::cycle(4);
        let (h, f) = cover_from_lists(&c4, &vec![vec![1, 2]; 4]).unwrap();
        assert!(find_sfdt(&h, &f).unwrap().is_some());
        let (h, f) = cover_from_lists(&Graph::path(2), &[vec![1], vec![1]]).unwrap();
        assert!(find_sfdt(&h, &f).unwrap().is_none());
        let (h, f) = cover_from_lists(&Graph::complete(4), &vec![vec![1, 2, 3]; 4]).unwrap();
        assert!(find_sfdt(&h, &f).unwrap().is_none());
        assert!(cover_from_lists(&Graph::path(2), &[vec![], vec![1]]).is_err());
    }

    #[test]
    fn forested_reduction_examples() {
        let k3 = Graph::complete(3);
        let (h, f) = cover_for_forested(&k3, 1).unwrap();
        assert!(find_sfdt(&h, &f).unwrap().is_none());
        let (h, f) = cover_for_forested(&k3, 2).unwrap();
        assert!(find_sfdt(&h, &f).unwrap().is_some());
        // Induced forests of K5 have at most two vertices, so two colours cover four.
        let (h, f) = cover_for_forested(&Graph::complete(5), 2).unwrap();
        assert_eq!(find_sfdt(&h, &f).unwrap().is_some(), find_sfdt_raw(&h, &f).unwrap().is_some());
        assert!(find_sfdt(&h, &f).unwrap().is_none());
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::complete(3);
        let h = Cover::new(g, 2, &[((0, 1), vec![(0, 1)]), ((0, 2), vec![(1, 1), (0, 0)])]).unwrap();
        let f = FVector::new(vec![vec![2, 0], vec![1, 1], vec![0, 2]], 2).unwrap();
        let text = cover_to_json(&h, &f).unwrap();
        let (h2, f2) = cover_from_json(&text).unwrap();
        assert_eq!((&h, &f), (&h2, &f2));
        assert_eq!(cover_to_json(&h2, &f2).unwrap(), text);
        assert!(text.contains("[\n          1,\n          2\n        ]"));
    }
}
