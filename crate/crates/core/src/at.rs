//! Orientations, circulation counting and Alon-Tarsi numbers.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::degeneracy::degeneracy;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A digraph whose underlying graph is simple: one arc per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    base: Graph,
    arcs: Vec<(usize, usize)>,
}

impl Orientation {
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Result<Orientation> {
        let mut base = Graph::new(n);
        for &(u, v) in &arcs {
            base.add_edge(u, v).map_err(|e| Error::InvalidOrientation(e.to_string()))?;
        }
        Ok(Orientation { base, arcs })
    }

    /// Orients `g` by `forward[e]`: true means `u -> v` for `g.edges()[e] = (u, v)`.
    pub fn from_directions(g: &Graph, forward: &[bool]) -> Result<Orientation> {
        let edges = g.edges();
        if forward.len() != edges.len() {
            return Err(Error::InvalidOrientation(format!("{} directions for {} edges", forward.len(), edges.len())));
        }
        let arcs = edges
            .iter()
            .zip(forward)
            .map(|(&(u, v), &f)| if f { (u, v) } else { (v, u) })
            .collect();
        Ok(Orientation { base: g.clone(), arcs })
    }

    /// Every edge from lower to higher position in `order`.
    pub fn acyclic(g: &Graph, order: &[usize]) -> Result<Orientation> {
        let mut pos = vec![usize::MAX; g.n()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        if order.len() != g.n() || pos.contains(&usize::MAX) {
            return Err(Error::InvalidOrientation("order is not a permutation".into()));
        }
        let fw: Vec<bool> = g.edges().iter().map(|&(u, v)| pos[u] < pos[v]).collect();
        Orientation::from_directions(g, &fw)
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n()];
        for &(u, _) in &self.arcs {
            d[u] += 1;
        }
        d
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n()];
        for &(_, v) in &self.arcs {
            d[v] += 1;
        }
        d
    }

    /// Δ⁺(D).
    pub fn max_out_degree(&self) -> usize {
        self.out_degrees().into_iter().max().unwrap_or(0)
    }

    /// D[X] with vertices renumbered in the order of `x`.
    pub fn induced(&self, x: &[usize]) -> Result<Orientation> {
        let mut map = vec![usize::MAX; self.n()];
        for (i, &v) in x.iter().enumerate() {
            if v >= self.n() {
                return Err(Error::VertexOutOfRange(v));
            }
            map[v] = i;
        }
        let arcs = self
            .arcs
            .iter()
            .filter(|&&(u, v)| map[u] != usize::MAX && map[v] != usize::MAX)
            .map(|&(u, v)| (map[u], map[v]))
            .collect();
        Orientation::new(x.len(), arcs)
    }

    /// Checks in-degree equals out-degree on the arcs with the given indices.
    pub fn is_circulation(&self, subset: &[usize]) -> Result<bool> {
        let mut bal = vec![0i64; self.n()];
        for &a in subset {
            let &(u, v) = self.arcs.get(a).ok_or_else(|| Error::InvalidOrientation(format!("no arc {a}")))?;
            bal[u] += 1;
            bal[v] -= 1;
        }
        Ok(bal.iter().all(|&b| b == 0))
    }

    // Strongly connected components, each sorted.
    fn sccs(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v) in &self.arcs {
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        // Kosaraju, iterative.
        let mut seen = vec![false; n];
        let mut finish = Vec::with_capacity(n);
        for r in 0..n {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            let mut stack = vec![(r, 0usize)];
            while let Some(top) = stack.last_mut() {
                let (v, i) = *top;
                if i < out_adj[v].len() {
                    top.1 += 1;
                    let w = out_adj[v][i];
                    if !seen[w] {
                        seen[w] = true;
                        stack.push((w, 0));
                    }
                } else {
                    finish.push(v);
                    stack.pop();
                }
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for &r in finish.iter().rev() {
            if comp[r] != usize::MAX {
                continue;
            }
            let c = out.len();
            comp[r] = c;
            let mut members = vec![r];
            let mut stack = vec![r];
            while let Some(v) = stack.pop() {
                for &w in &in_adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

/// Signed circulation count, Σ over circulations of (−1)^|A|, by a sweep over
/// the arcs that keeps one signed count per imbalance profile. A vertex drops
/// out of the profile once its last arc has been processed.
fn signed_count<T>(n: usize, arcs: &[(usize, usize)], add: impl Fn(&T, &T) -> Option<T>, neg: impl Fn(&T) -> T, one: T) -> Option<T>
where
    T: Clone + Zero,
{
    let mut last = vec![usize::MAX; n];
    for (i, &(u, v)) in arcs.iter().enumerate() {
        last[u] = i;
        last[v] = i;
    }
    // Active vertices get slots in the profile as they first appear.
    let mut slot = vec![usize::MAX; n];
    let mut free: Vec<usize> = Vec::new();
    let mut width = 0usize;
    let mut states: HashMap<Vec<i8>, T> = HashMap::from([(Vec::new(), one)]);
    for (i, &(u, v)) in arcs.iter().enumerate() {
        for x in [u, v] {
            if slot[x] == usize::MAX {
                slot[x] = free.pop().unwrap_or_else(|| {
                    width += 1;
                    width - 1
                });
            }
        }
        let (su, sv) = (slot[u], slot[v]);
        let mut next: HashMap<Vec<i8>, T> = HashMap::with_capacity(states.len() * 2);
        for (mut prof, c) in states {
            prof.resize(width, 0);
            // Skip the arc.
            let keep = prof.clone();
            // Take the arc: sign flips.
            prof[su] += 1;
            prof[sv] -= 1;
            for (p, val) in [(keep, c.clone()), (prof, neg(&c))] {
                let mut p = p;
                let mut dead = false;
                for x in [u, v] {
                    if last[x] == i && p[slot[x]] != 0 {
                        dead = true;
                    }
                }
                if dead {
                    continue;
                }
                for x in [u, v] {
                    if last[x] == i {
                        p[slot[x]] = 0;
                    }
                }
                match next.get_mut(&p) {
                    Some(acc) => *acc = add(acc, &val)?,
                    None => {
                        next.insert(p, val);
                    }
                }
            }
        }
        for x in [u, v] {
            if last[x] == i {
                free.push(slot[x]);
            }
        }
        next.retain(|_, c| !c.is_zero());
        states = next;
    }
    // Every vertex has been closed, so only the all-zero profile is left.
    debug_assert!(states.len() <= 1);
    Some(states.into_values().next().unwrap_or_else(T::zero))
}

fn diff_strong(d: &Orientation) -> BigInt {
    // Checked i64 first; redo in arbitrary precision on overflow.
    if let Some(x) = signed_count(d.n(), d.arcs(), |a: &i64, b: &i64| a.checked_add(*b), |a| -a, 1i64) {
        return BigInt::from(x);
    }
    signed_count(d.n(), d.arcs(), |a: &BigInt, b: &BigInt| Some(a + b), |a| -a, BigInt::one()).expect("no overflow")
}

/// diff(D) = |EE(D)| − |OE(D)|. Arcs between strong components lie on no
/// circulation, so D factors over its strong components.
pub fn diff(d: &Orientation) -> BigInt {
    let mut acc = BigInt::one();
    for comp in d.sccs() {
        if comp.len() > 1 {
            acc *= diff_strong(&d.induced(&comp).expect("valid subset"));
            if acc.is_zero() {
                break;
            }
        }
    }
    acc
}

/// diff(D) over all 2^m arc subsets. Test oracle.
pub fn diff_raw(d: &Orientation) -> Result<i64> {
    let m = d.arcs.len();
    if m > 26 {
        return Err(Error::BudgetExceeded(format!("{m} arcs is too many for a raw scan")));
    }
    let n = d.n();
    let mut total = 0i64;
    let mut bal = vec![0i32; n];
    for mask in 0u64..1 << m {
        bal.iter_mut().for_each(|b| *b = 0);
        for (a, &(u, v)) in d.arcs.iter().enumerate() {
            if mask >> a & 1 == 1 {
                bal[u] += 1;
                bal[v] -= 1;
            }
        }
        if bal.iter().all(|&b| b == 0) {
            total += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    Ok(total)
}

/// diff(D) ≠ 0 and Δ⁺(D) < k.
pub fn is_k_at_orientation(d: &Orientation, k: usize) -> bool {
    d.max_out_degree() < k && !diff(d).is_zero()
}

/// Checks the split and returns `(diff(D), diff(D[X1]) · diff(D[X2]))`.
pub fn diff_product(d: &Orientation, x1: &[usize], x2: &[usize]) -> Result<(BigInt, BigInt)> {
    let n = d.n();
    let mut side = vec![0u8; n];
    for (s, xs) in [(1u8, x1), (2u8, x2)] {
        for &v in xs {
            if v >= n {
                return Err(Error::VertexOutOfRange(v));
            }
            if side[v] != 0 {
                return Err(Error::Precondition(format!("vertex {v} is in both parts")));
            }
            side[v] = s;
        }
    }
    if let Some(v) = side.iter().position(|&s| s == 0) {
        return Err(Error::Precondition(format!("vertex {v} is in neither part")));
    }
    if let Some(&(u, v)) = d.arcs.iter().find(|&&(u, v)| side[u] == 2 && side[v] == 1) {
        return Err(Error::Precondition(format!("arc {u}->{v} runs from X2 to X1")));
    }
    let lhs = diff_strong(d);
    let rhs = diff_strong(&d.induced(x1)?) * diff_strong(&d.induced(x2)?);
    Ok((lhs, rhs))
}

/// Enumerates orientations of `g` with out-degree at most `cap`, honoring
/// forced directions, until `accept` returns true.
struct Orienter<'a> {
    edges: Vec<(usize, usize)>,
    forced: Vec<Option<bool>>,
    cap: usize,
    out: Vec<usize>,
    dir: Vec<bool>,
    visited: u64,
    max_visits: u64,
    g: &'a Graph,
}

impl Orienter<'_> {
    fn run(&mut self, e: usize, accept: &mut dyn FnMut(&Orientation) -> bool) -> Result<bool> {
        if e == self.edges.len() {
            self.visited += 1;
            if self.visited > self.max_visits {
                return Err(Error::BudgetExceeded(format!("more than {} orientations", self.max_visits)));
            }
            let d = Orientation::from_directions(self.g, &self.dir)?;
            return Ok(accept(&d));
        }
        let (u, v) = self.edges[e];
        for fw in [true, false] {
            if self.forced[e].is_some_and(|f| f != fw) {
                continue;
            }
            let tail = if fw { u } else { v };
            if self.out[tail] == self.cap {
                continue;
            }
            self.out[tail] += 1;
            self.dir[e] = fw;
            let done = self.run(e + 1, accept)?;
            self.out[tail] -= 1;
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn orient_search(
    g: &Graph,
    forced: Vec<Option<bool>>,
    cap: usize,
    max_visits: u64,
    accept: &mut dyn FnMut(&Orientation) -> bool,
) -> Result<(bool, u64)> {
    let edges = g.edges();
    let mut o = Orienter {
        dir: vec![true; edges.len()],
        edges,
        forced,
        cap,
        out: vec![0; g.n()],
        visited: 0,
        max_visits,
        g,
    };
    let found = o.run(0, accept)?;
    Ok((found, o.visited))
}

/// AT(G), searched upward per component with out-degree-capped orientations.
pub fn at_number(g: &Graph, max_orientations: u64) -> Result<usize> {
    if g.n() == 0 {
        return Ok(0);
    }
    let mut best = 1;
    let mut budget = max_orientations;
    for comp in g.components() {
        let (h, _) = g.induced_subgraph(&comp)?;
        if h.m() == 0 {
            continue;
        }
        // An acyclic smallest-last orientation has diff 1, so d + 1 always works.
        let top = degeneracy(&h) + 1;
        let lower = h.m().div_ceil(h.n()) + 1;
        let mut k = best.max(lower);
        while k < top {
            let mut hit = |d: &Orientation| !diff(d).is_zero();
            let (found, used) = orient_search(&h, vec![None; h.m()], k - 1, budget, &mut hit)?;
            budget -= used;
            if found {
                break;
            }
            k += 1;
        }
        best = best.max(k);
    }
    Ok(best)
}

/// AT(G) by scanning all 2^m orientations with the raw diff. Test oracle.
pub fn at_number_raw(g: &Graph) -> Result<usize> {
    let m = g.m();
    if m > 20 {
        return Err(Error::BudgetExceeded(format!("{m} edges is too many for a raw scan")));
    }
    if g.n() == 0 {
        return Ok(0);
    }
    let mut best = usize::MAX;
    for mask in 0u64..1 << m {
        let fw: Vec<bool> = (0..m).map(|e| mask >> e & 1 == 1).collect();
        let d = Orientation::from_directions(g, &fw)?;
        let k = d.max_out_degree() + 1;
        if k < best && diff_raw(&d)? != 0 {
            best = k;
        }
    }
    Ok(best)
}

/// Orients G minus the edges inside V(C) so that every edge touching V(C)
/// points into V(C), with Δ⁺ < k and diff ≠ 0.
pub fn find_boundary_sink_orientation(
    g: &Graph,
    cycle: &[usize],
    k: usize,
    max_orientations: u64,
) -> Result<Option<Orientation>> {
    let t = cycle.len();
    let mut on = vec![false; g.n()];
    for &v in cycle {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange(v));
        }
        if std::mem::replace(&mut on[v], true) {
            return Err(Error::Precondition(format!("vertex {v} repeats on the cycle")));
        }
    }
    if t < 3 || (0..t).any(|i| !g.has_edge(cycle[i], cycle[(i + 1) % t])) {
        return Err(Error::Precondition("C is not a cycle of G".into()));
    }
    if k == 0 {
        return Ok(None);
    }
    let mut h = g.clone();
    for (u, v) in g.edges() {
        if on[u] && on[v] {
            h.remove_edge(u, v)?;
        }
    }
    let forced: Vec<Option<bool>> = h
        .edges()
        .iter()
        .map(|&(u, v)| match (on[u], on[v]) {
            (false, true) => Some(true),
            (true, false) => Some(false),
            _ => None,
        })
        .collect();
    let mut found = None;
    let mut hit = |d: &Orientation| {
        if !diff(d).is_zero() {
            found = Some(d.clone());
            true
        } else {
            false
        }
    };
    orient_search(&h, forced, k - 1, max_orientations, &mut hit)?;
    Ok(found)
}
