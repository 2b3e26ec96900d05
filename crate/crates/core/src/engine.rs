//! Decides "every full cover of a small graph, with fan budgets drawn from given
//! option sets, has a strictly f-degenerate transversal".
//!
//! The search is two-level. An outer tree fixes parts of the cover (fan budget
//! vectors and edge permutations). At each outer node an inner AND-OR game is
//! played: vertices are committed one at a time in a fixed order, and whatever
//! the outer tree has not fixed is chosen by the adversary only when it first
//! matters. A win in the inner game covers every completion of the outer node.
//! When the inner game is lost the outer tree fixes one more item; once
//! everything is fixed the inner game is an exact search, so a loss there is a
//! genuine counterexample.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::cover::{find_sfdt, Cover, FVector};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Item {
    Vector(usize),
    Edge(usize),
}

pub(crate) struct Problem {
    pub g: Graph,
    pub s: usize,
    /// Budget vectors the adversary may give each fan; closed under permutation.
    pub options: Vec<Vec<Vec<u8>>>,
    /// Commit order of the inner game; with `adaptive`, only a preference.
    pub order: Vec<usize>,
    /// Let the player choose the next vertex to commit.
    pub adaptive: bool,
    /// Order in which the outer tree fixes the cover. Lists every vertex and edge once.
    pub reveal: Vec<Item>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EngineStats {
    pub outer_nodes: u64,
    pub full_reveals: u64,
    pub inner_states: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub vectors: Vec<Vec<u8>>,
    pub perms: Vec<Vec<u8>>,
}

pub(crate) fn permutations(s: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for k in 0..s as u8 {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u8>| {
                (0..=p.len()).map(move |i| {
                    let mut q = p.clone();
                    q.insert(i, k);
                    q
                })
            })
            .collect();
    }
    out.sort();
    out
}

/// Vectors in `{0..=max}^s` with the given sum, lexicographically.
pub(crate) fn vectors_with_sum(s: usize, max: u8, sum: u32) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; s];
    fn rec(k: usize, left: u32, max: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if k == cur.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in 0..=max.min(left.min(255) as u8) {
            cur[k] = x;
            rec(k + 1, left - x as u32, max, cur, out);
        }
    }
    rec(0, sum, max, &mut cur, &mut out);
    out
}

struct Tables {
    t: usize,
    s: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<u32>,
    inc: Vec<u64>,
    eidx: Vec<Vec<usize>>,
    perms: Vec<Vec<u8>>,
}

#[derive(Clone)]
struct Rev {
    vecs: Vec<Option<Vec<u8>>>,
    perm: Vec<Option<Vec<u8>>>,
    /// Simultaneous relabellings of every fan that fix all revealed items.
    group: Vec<Vec<u8>>,
}

fn act_vector(sigma: &[u8], x: &[u8]) -> Vec<u8> {
    let mut y = vec![0; x.len()];
    for i in 0..x.len() {
        y[sigma[i] as usize] = x[i];
    }
    y
}

fn act_perm(sigma: &[u8], p: &[u8]) -> Vec<u8> {
    let mut q = vec![0; p.len()];
    for i in 0..p.len() {
        q[sigma[i] as usize] = sigma[p[i] as usize];
    }
    q
}

impl Rev {
    fn fresh(&self, tb: &Tables, v: usize) -> bool {
        self.vecs[v].is_none() && tb.adj_edges(v).all(|e| self.perm[e].is_none())
    }

    /// Slot of `w` hit by slot `i` of `u` through a fixed edge.
    fn hit(&self, tb: &Tables, u: usize, i: usize, w: usize) -> Option<u8> {
        let e = tb.eidx[u][w];
        let p = self.perm[e].as_ref()?;
        if u < w {
            Some(p[i])
        } else {
            p.iter().position(|&j| j as usize == i).map(|x| x as u8)
        }
    }
}

impl Tables {
    fn adj_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.t).filter(move |&w| self.adj[v] >> w & 1 == 1).map(move |w| self.eidx[v][w])
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct St {
    done: u32,
    live: u32,
    bud: u64,
    conf: u64,
    // (w << 16) | (u << 8) | slot: fixed edge from live u hits `slot` of uncommitted w
    pend: Vec<u32>,
}

impl St {
    fn bud(&self, u: usize) -> u32 {
        (self.bud >> (4 * u) & 0xf) as u32
    }
}

struct Inner<'a> {
    p: &'a Problem,
    tb: &'a Tables,
    rev: &'a Rev,
    memo: HashMap<St, bool>,
    deadline: Option<Instant>,
    expired: bool,
}

impl Inner<'_> {
    fn deg(&self, st: &St, u: usize) -> u32 {
        (st.conf & self.tb.inc[u]).count_ones()
    }

    // Uncommitted neighbors of live `u` that might still conflict with it.
    fn future(&self, st: &St, u: usize) -> u32 {
        let tb = self.tb;
        let mut c = 0;
        for w in 0..tb.t {
            if tb.adj[u] >> w & 1 == 0 || st.done >> w & 1 == 1 {
                continue;
            }
            if let Some(vec) = &self.rev.vecs[w] {
                let key = (w as u32) << 16 | (u as u32) << 8;
                if let Some(p) = st.pend.iter().find(|&&p| p & !0xff == key) {
                    if vec[(p & 0xff) as usize] == 0 {
                        continue;
                    }
                }
            }
            c += 1;
        }
        c
    }

    fn remove(&self, st: &mut St, u: usize) {
        st.live &= !(1 << u);
        st.conf &= !self.tb.inc[u];
        st.bud &= !(0xf << (4 * u));
        st.pend.retain(|&p| (p >> 8 & 0xff) as usize != u);
    }

    /// Peels every live vertex that is safe to remove now. False when the live
    /// part already contains a set that can never be peeled.
    fn settle(&self, st: &mut St) -> bool {
        loop {
            let mut changed = false;
            for u in 0..self.tb.t {
                if st.live >> u & 1 == 1 && self.deg(st, u) + self.future(st, u) < st.bud(u) {
                    self.remove(st, u);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        // Later commits only add conflicts, so a core that resists peeling now is final.
        let mut live = st.live;
        let mut conf = st.conf;
        loop {
            let mut changed = false;
            for u in 0..self.tb.t {
                if live >> u & 1 == 1 && (conf & self.tb.inc[u]).count_ones() < st.bud(u) {
                    live &= !(1 << u);
                    conf &= !self.tb.inc[u];
                    changed = true;
                }
            }
            if !changed {
                return live == 0;
            }
        }
    }

    fn win(&mut self, st: St) -> bool {
        let tb = self.tb;
        let k = st.done.count_ones() as usize;
        if k == tb.t {
            return st.live == 0;
        }
        if self.expired {
            return false;
        }
        if let Some(&w) = self.memo.get(&st) {
            return w;
        }
        if self.memo.len() % 1024 == 1023 && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.expired = true;
            return false;
        }
        let result = if self.p.adaptive {
            // The player also picks which vertex to commit next.
            let order = &self.p.order;
            order.iter().filter(|&&v| st.done >> v & 1 == 0).any(|&v| self.commit(&st, v))
        } else {
            self.commit(&st, self.p.order[k])
        };
        if !self.expired {
            self.memo.insert(st, result);
        }
        result
    }

    /// Adversary reveals what `v` needs, then the player picks a slot of `v`.
    fn commit(&mut self, st: &St, v: usize) -> bool {
        let tb = self.tb;
        let lazy: Vec<usize> = (0..tb.t)
            .filter(|&u| st.live >> u & 1 == 1 && tb.adj[v] >> u & 1 == 1 && self.rev.perm[tb.eidx[u][v]].is_none())
            .collect();
        let mut fixed_hits = vec![0u32; tb.s];
        for &p in &st.pend {
            if (p >> 16) as usize == v {
                fixed_hits[(p & 0xff) as usize] |= 1 << (p >> 8 & 0xff);
            }
        }
        let later: Vec<usize> = (0..tb.t)
            .filter(|&w| tb.adj[v] >> w & 1 == 1 && w != v && st.done >> w & 1 == 0 && self.rev.perm[tb.eidx[v][w]].is_some())
            .collect();
        let slot_free = later.is_empty();
        let choices: Vec<&Vec<u8>> = match &self.rev.vecs[v] {
            Some(x) => vec![x],
            None => self.p.options[v].iter().collect(),
        };
        let mut seen: HashSet<Vec<(u8, u32)>> = HashSet::new();
        let mut hits = vec![0usize; lazy.len()];
        let mut result = true;
        'adv: for vec in choices {
            hits.iter_mut().for_each(|h| *h = 0);
            loop {
                let mut hm = fixed_hits.clone();
                for (k, &u) in lazy.iter().enumerate() {
                    hm[hits[k]] |= 1 << u;
                }
                let fresh_case = !slot_free || {
                    let mut canon: Vec<(u8, u32)> = vec.iter().copied().zip(hm.iter().copied()).collect();
                    canon.sort_unstable();
                    seen.insert(canon)
                };
                if fresh_case && !self.respond(st, v, vec, &hm, &later, slot_free) {
                    result = false;
                    break 'adv;
                }
                let mut k = 0;
                while k < hits.len() && hits[k] + 1 == tb.s {
                    hits[k] = 0;
                    k += 1;
                }
                if k == hits.len() {
                    break;
                }
                hits[k] += 1;
            }
        }
        result
    }

    fn respond(&mut self, st: &St, v: usize, vec: &[u8], hm: &[u32], later: &[usize], slot_free: bool) -> bool {
        let tb = self.tb;
        let mut tried: Vec<(u8, u32)> = Vec::new();
        for i in 0..tb.s {
            if vec[i] == 0 {
                continue;
            }
            if slot_free {
                if tried.contains(&(vec[i], hm[i])) {
                    continue;
                }
                tried.push((vec[i], hm[i]));
            }
            let mut next = st.clone();
            next.done |= 1 << v;
            next.live |= 1 << v;
            next.bud |= (vec[i] as u64) << (4 * v);
            for u in 0..tb.t {
                if hm[i] >> u & 1 == 1 {
                    next.conf |= 1 << tb.eidx[u][v];
                }
            }
            next.pend.retain(|&p| (p >> 16) as usize != v);
            for &w in later {
                let j = self.rev.hit(tb, v, i, w).expect("fixed edge");
                next.pend.push((w as u32) << 16 | (v as u32) << 8 | j as u32);
            }
            next.pend.sort_unstable();
            if self.settle(&mut next) && self.win(next) {
                return true;
            }
        }
        false
    }
}

struct Outer<'a> {
    p: &'a Problem,
    tb: Tables,
    nodes: AtomicU64,
    leaves: AtomicU64,
    states: AtomicU64,
    max_nodes: u64,
    par_depth: usize,
    deadline: Option<Instant>,
}

impl Outer<'_> {
    fn out_of_time(&self) -> Error {
        Error::BudgetExceeded("time limit reached".into())
    }

    fn inner_wins(&self, rev: &Rev) -> Result<bool> {
        let mut inner = Inner {
            p: self.p,
            tb: &self.tb,
            rev,
            memo: HashMap::new(),
            deadline: self.deadline,
            expired: false,
        };
        let mut st = St {
            done: 0,
            live: 0,
            bud: 0,
            conf: 0,
            pend: Vec::new(),
        };
        let ok = inner.settle(&mut st) && inner.win(st);
        self.states.fetch_add(inner.memo.len() as u64, Ordering::Relaxed);
        if inner.expired {
            return Err(self.out_of_time());
        }
        Ok(ok)
    }

    fn choices(&self, rev: &Rev, item: Item) -> Vec<Item2> {
        let tb = &self.tb;
        // Orbit representatives under the relabellings that fix everything so far.
        let least = |x: &Vec<u8>, act: fn(&[u8], &[u8]) -> Vec<u8>| rev.group.iter().all(|g| act(g, x) >= *x);
        match item {
            Item::Vector(v) => {
                let all = &self.p.options[v];
                let pick: Vec<Vec<u8>> = if rev.fresh(tb, v) {
                    // Fresh fans can be relabelled freely: sorted representatives suffice.
                    all.iter().filter(|x| x.windows(2).all(|w| w[0] >= w[1])).cloned().collect()
                } else {
                    all.iter().filter(|x| least(x, act_vector)).cloned().collect()
                };
                pick.into_iter().map(Item2::Vector).collect()
            }
            Item::Edge(e) => {
                let (u, w) = tb.edges[e];
                if rev.fresh(tb, u) || rev.fresh(tb, w) {
                    vec![Item2::Perm((0..tb.s as u8).collect())]
                } else {
                    tb.perms.iter().filter(|x| least(x, act_perm)).cloned().map(Item2::Perm).collect()
                }
            }
        }
    }

    fn search(&self, rev: &Rev, k: usize) -> Result<Option<Counterexample>> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.max_nodes {
            return Err(Error::BudgetExceeded(format!("more than {} outer search nodes", self.max_nodes)));
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(self.out_of_time());
        }
        // A forced reveal only helps the player, so the game waits for it.
        let forced = k < self.p.reveal.len() && self.choices(rev, self.p.reveal[k]).len() == 1;
        if !forced && self.inner_wins(rev)? {
            return Ok(None);
        }
        if k == self.p.reveal.len() {
            self.leaves.fetch_add(1, Ordering::Relaxed);
            return Ok(Some(Counterexample {
                vectors: rev.vecs.iter().map(|x| x.clone().expect("all fixed")).collect(),
                perms: rev.perm.iter().map(|x| x.clone().expect("all fixed")).collect(),
            }));
        }
        let item = self.p.reveal[k];
        let branch = |c: Item2| -> Result<Option<Counterexample>> {
            let mut r = rev.clone();
            match (item, c) {
                (Item::Vector(v), Item2::Vector(x)) => {
                    r.group.retain(|g| act_vector(g, &x) == x);
                    r.vecs[v] = Some(x);
                }
                (Item::Edge(e), Item2::Perm(x)) => {
                    r.group.retain(|g| act_perm(g, &x) == x);
                    r.perm[e] = Some(x);
                }
                _ => unreachable!(),
            }
            self.search(&r, k + 1)
        };
        let choices = self.choices(rev, item);
        if k < self.par_depth {
            // Every branch runs to completion so the counts do not depend on scheduling.
            let results: Vec<Result<Option<Counterexample>>> = choices.into_par_iter().map(branch).collect();
            let mut found = None;
            for r in results {
                if let Some(cx) = r? {
                    found.get_or_insert(cx);
                }
            }
            return Ok(found);
        }
        for c in choices {
            if let Some(cx) = branch(c)? {
                return Ok(Some(cx));
            }
        }
        Ok(None)
    }
}

enum Item2 {
    Vector(Vec<u8>),
    Perm(Vec<u8>),
}

/// Runs the search. `par_depth` outer levels are explored in parallel on the
/// current rayon pool.
pub(crate) fn solve(p: &Problem, max_nodes: u64, par_depth: usize) -> Result<(Option<Counterexample>, EngineStats)> {
    solve_until(p, max_nodes, par_depth, None)
}

/// As `solve`, giving up with `BudgetExceeded` once `deadline` passes.
pub(crate) fn solve_until(
    p: &Problem,
    max_nodes: u64,
    par_depth: usize,
    deadline: Option<Instant>,
) -> Result<(Option<Counterexample>, EngineStats)> {
    let t = p.g.n();
    let edges = p.g.edges();
    if t > 16 || edges.len() > 64 {
        return Err(Error::TooLarge(t));
    }
    if p.s == 0 || p.s > 8 {
        return Err(Error::Precondition(format!("fan size {} outside 1..=8", p.s)));
    }
    if p.options.len() != t || p.order.len() != t {
        return Err(Error::Precondition("options and order must cover every vertex".into()));
    }
    let mut pos = vec![usize::MAX; t];
    for (i, &v) in p.order.iter().enumerate() {
        if v >= t || pos[v] != usize::MAX {
            return Err(Error::Precondition("commit order is not a permutation".into()));
        }
        pos[v] = i;
    }
    for opts in &p.options {
        if opts.iter().any(|x| x.len() != p.s || x.iter().any(|&b| b > 15)) {
            return Err(Error::Precondition("option vector has the wrong shape".into()));
        }
        let set: HashSet<&Vec<u8>> = opts.iter().collect();
        for x in opts {
            let mut y = x.clone();
            y.rotate_left(1);
            let mut z = x.clone();
            z.swap(0, p.s.saturating_sub(1).min(1));
            if !set.contains(&y) || !set.contains(&z) {
                return Err(Error::Precondition("option sets must be closed under permutation".into()));
            }
        }
    }
    let mut eidx = vec![vec![usize::MAX; t]; t];
    let mut adj = vec![0u32; t];
    let mut inc = vec![0u64; t];
    for (e, &(u, v)) in edges.iter().enumerate() {
        eidx[u][v] = e;
        eidx[v][u] = e;
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
        inc[u] |= 1 << e;
        inc[v] |= 1 << e;
    }
    let mut items = p.reveal.clone();
    items.sort_by_key(|i| match i {
        Item::Vector(v) => (0, *v),
        Item::Edge(e) => (1, *e),
    });
    let expected: Vec<Item> = (0..t).map(Item::Vector).chain((0..edges.len()).map(Item::Edge)).collect();
    if items != expected {
        return Err(Error::Precondition("reveal order must list every vertex and edge once".into()));
    }
    let tb = Tables {
        t,
        s: p.s,
        edges: edges.clone(),
        adj,
        inc,
        eidx,
        perms: permutations(p.s),
    };
    let outer = Outer {
        p,
        tb,
        nodes: AtomicU64::new(0),
        leaves: AtomicU64::new(0),
        states: AtomicU64::new(0),
        max_nodes,
        par_depth,
        deadline,
    };
    let rev = Rev {
        vecs: vec![None; t],
        perm: vec![None; edges.len()],
        group: permutations(p.s),
    };
    let found = outer.search(&rev, 0)?;
    if let Some(cx) = &found {
        // Independent confirmation through the plain transversal solver.
        let h = Cover::from_permutations(p.g.clone(), p.s, &cx.perms)?;
        let f = FVector::new(cx.vectors.clone(), 15)?;
        assert!(find_sfdt(&h, &f)?.is_none(), "engine reported a cover that has a transversal");
    }
    let stats = EngineStats {
        outer_nodes: outer.nodes.into_inner(),
        full_reveals: outer.leaves.into_inner(),
        inner_states: outer.states.into_inner(),
    };
    Ok((found, stats))
}

/// Number of gauge classes: the product of option counts times `(s!)` per
/// edge outside a spanning forest.
pub(crate) fn space_size(p: &Problem) -> u128 {
    let mut x: u128 = 1;
    for o in &p.options {
        x = x.saturating_mul(o.len() as u128);
    }
    let cotree = p.g.m() + p.g.components().len() - p.g.n();
    let fact: u128 = (1..=p.s as u128).product();
    for _ in 0..cotree {
        x = x.saturating_mul(fact);
    }
    x
}

/// Every full cover with gauge fixed on a BFS spanning forest, and every
/// combination of options. Test oracle; exponential.
pub(crate) fn solve_raw(p: &Problem) -> Result<Option<Counterexample>> {
    let g = &p.g;
    let edges = g.edges();
    let n = g.n();
    let mut tree = vec![false; edges.len()];
    let mut seen = vec![false; n];
    for r in 0..n {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut queue = std::collections::VecDeque::from([r]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    let e = edges.binary_search(&(u.min(w), u.max(w))).unwrap();
                    tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let all = permutations(p.s);
    let id: Vec<u8> = (0..p.s as u8).collect();
    let free: Vec<usize> = (0..edges.len()).filter(|&e| !tree[e]).collect();
    let mut pidx = vec![0usize; free.len()];
    loop {
        let mut perms = vec![id.clone(); edges.len()];
        for (k, &e) in free.iter().enumerate() {
            perms[e] = all[pidx[k]].clone();
        }
        let h = Cover::from_permutations(g.clone(), p.s, &perms)?;
        let mut vidx = vec![0usize; n];
        loop {
            let vectors: Vec<Vec<u8>> = (0..n).map(|v| p.options[v][vidx[v]].clone()).collect();
            let f = FVector::new(vectors.clone(), 15)?;
            if find_sfdt(&h, &f)?.is_none() {
                return Ok(Some(Counterexample { vectors, perms }));
            }
            if !odometer(&mut vidx, |v| p.options[v].len()) {
                break;
            }
        }
        if !odometer(&mut pidx, |_| all.len()) {
            return Ok(None);
        }
    }
}

fn odometer(x: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for k in 0..x.len() {
        if x[k] + 1 < radix(k) {
            x[k] += 1;
            return true;
        }
        x[k] = 0;
    }
    false
}

/// Outer reveal order: spanning-forest edges first (each reaches a fresh
/// vertex, so gauge fixes them to the identity), then budget vectors in reverse
/// commit order, then the remaining edges by their later endpoint, latest first.
pub(crate) fn default_reveal(g: &Graph, order: &[usize]) -> Vec<Item> {
    let n = g.n();
    let edges = g.edges();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut seen = vec![false; n];
    let mut tree = vec![false; edges.len()];
    let mut items = Vec::new();
    for &r in order {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut queue = std::collections::VecDeque::from([r]);
        while let Some(u) = queue.pop_front() {
            let mut nb: Vec<usize> = g.neighbors(u).to_vec();
            nb.sort_by_key(|&w| pos[w]);
            for w in nb {
                if !seen[w] {
                    seen[w] = true;
                    let e = edges.binary_search(&(u.min(w), u.max(w))).expect("edge");
                    tree[e] = true;
                    items.push(Item::Edge(e));
                    queue.push_back(w);
                }
            }
        }
    }
    items.extend(order.iter().rev().map(|&v| Item::Vector(v)));
    let mut rest: Vec<(usize, (usize, usize))> = edges.into_iter().enumerate().filter(|&(e, _)| !tree[e]).collect();
    rest.sort_by_key(|&(_, (u, v))| std::cmp::Reverse((pos[u].max(pos[v]), pos[u].min(pos[v]))));
    items.extend(rest.into_iter().map(|(e, _)| Item::Edge(e)));
    items
}
