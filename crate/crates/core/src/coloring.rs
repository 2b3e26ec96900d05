//! Exact χ, χ_ℓ and χ_DP for small graphs.

use crate::at::at_number;
use crate::degeneracy::{degeneracy, degeneracy_order};
use crate::engine::{default_reveal, solve, solve_raw, Problem};
use crate::error::{Error, Result};
use crate::graph::Graph;

fn colorable(g: &Graph, lists: &[Vec<u32>], upto: usize) -> bool {
    fn go(g: &Graph, lists: &[Vec<u32>], col: &mut Vec<u32>, v: usize, upto: usize) -> bool {
        if v == upto {
            return true;
        }
        for &c in &lists[v] {
            if g.neighbors(v).iter().all(|&w| w >= v || col[w] != c) {
                col[v] = c;
                if go(g, lists, col, v + 1, upto) {
                    return true;
                }
            }
        }
        false
    }
    let mut col = vec![u32::MAX; upto];
    go(g, lists, &mut col, 0, upto)
}

/// Relabels so that vertex `i` of the result is `order[i]`.
fn reorder(g: &Graph, order: &[usize]) -> Graph {
    let mut inv = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        inv[v] = i;
    }
    g.permuted(&inv)
}

fn bfs_order(g: &Graph) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::with_capacity(g.n());
    let mut roots: Vec<usize> = (0..g.n()).collect();
    roots.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    for r in roots {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut queue = std::collections::VecDeque::from([r]);
        while let Some(u) = queue.pop_front() {
            out.push(u);
            let mut nb: Vec<usize> = g.neighbors(u).iter().copied().filter(|&w| !seen[w]).collect();
            nb.sort_by_key(|&w| std::cmp::Reverse(g.degree(w)));
            for w in nb {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    out
}

/// χ(G) by backtracking over k = 1, 2, ...
pub fn chromatic_number(g: &Graph) -> usize {
    if g.n() == 0 {
        return 0;
    }
    let h = reorder(g, &bfs_order(g));
    (1..=h.n())
        .find(|&k| colorable(&h, &vec![(0..k as u32).collect(); h.n()], h.n()))
        .expect("n colours always suffice")
}

fn k_core(g: &Graph, k: usize) -> Graph {
    let mut keep: Vec<bool> = vec![true; g.n()];
    loop {
        let drop = (0..g.n()).find(|&v| keep[v] && g.neighbors(v).iter().filter(|&&w| keep[w]).count() < k);
        match drop {
            Some(v) => keep[v] = false,
            None => break,
        }
    }
    let s: Vec<usize> = (0..g.n()).filter(|&v| keep[v]).collect();
    g.induced_subgraph(&s).expect("valid subset").0
}

struct Chooser<'a> {
    g: &'a Graph,
    k: usize,
    lists: Vec<Vec<u32>>,
    visited: u64,
    max: u64,
}

impl Chooser<'_> {
    // True when some completion of the current prefix has no proper colouring.
    fn bad(&mut self, v: usize, used: u32) -> Result<bool> {
        self.visited += 1;
        if self.visited > self.max {
            return Err(Error::BudgetExceeded(format!("more than {} list assignments", self.max)));
        }
        if !colorable(self.g, &self.lists, v) {
            return Ok(true);
        }
        if v == self.g.n() {
            return Ok(false);
        }
        // Colours are interchangeable, so fresh colours are always the next unused ones.
        for old in 0..=self.k.min(used as usize) {
            let fresh = self.k - old;
            let mut pick: Vec<u32> = (0..old as u32).collect();
            loop {
                let mut list = pick.clone();
                list.extend(used..used + fresh as u32);
                self.lists[v] = list;
                if self.bad(v + 1, used + fresh as u32)? {
                    return Ok(true);
                }
                // next old-colour combination
                let mut i = old;
                while i > 0 && pick[i - 1] == used - (old - i + 1) as u32 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                pick[i - 1] += 1;
                for j in i..old {
                    pick[j] = pick[j - 1] + 1;
                }
            }
        }
        self.lists[v].clear();
        Ok(false)
    }
}

/// Whether every assignment of `k`-lists admits a proper colouring. Lists are
/// enumerated up to renaming of colours, on the k-core.
pub fn is_k_choosable(g: &Graph, k: usize, max_assignments: u64) -> Result<bool> {
    if k == 0 {
        return Ok(g.n() == 0);
    }
    let core = k_core(g, k);
    if core.n() == 0 {
        return Ok(true);
    }
    let h = reorder(&core, &bfs_order(&core));
    let mut ch = Chooser {
        g: &h,
        k,
        lists: vec![Vec::new(); h.n()],
        visited: 0,
        max: max_assignments,
    };
    Ok(!ch.bad(0, 0)?)
}

/// χ_ℓ(G). Searches k from χ(G) upward; k ≥ min(d(G) + 1, AT(G)) is choosable
/// by greedy colouring and by the Alon-Tarsi theorem respectively.
pub fn list_chromatic_number(g: &Graph, max_assignments: u64) -> Result<usize> {
    if g.n() == 0 {
        return Ok(0);
    }
    let mut best = 1;
    for comp in g.components() {
        let (h, _) = g.induced_subgraph(&comp)?;
        let upper = (degeneracy(&h) + 1).min(at_number(&h, max_assignments)?);
        let mut k = chromatic_number(&h).max(best);
        while k < upper && !is_k_choosable(&h, k, max_assignments)? {
            k += 1;
        }
        best = best.max(k);
    }
    Ok(best)
}

/// χ_ℓ(G) from the list search alone, starting at k = 1. Test oracle.
pub fn list_chromatic_number_plain(g: &Graph, max_assignments: u64) -> Result<usize> {
    if g.n() == 0 {
        return Ok(0);
    }
    let mut k = 1;
    while !is_k_choosable(g, k, max_assignments)? {
        k += 1;
    }
    Ok(k)
}

fn ones_problem(h: &Graph, k: usize) -> Problem {
    // Reverse smallest-last: each vertex sees at most d committed neighbors.
    let mut order = degeneracy_order(h).0;
    order.reverse();
    Problem {
        g: h.clone(),
        s: k,
        options: vec![vec![vec![1; k]]; h.n()],
        reveal: default_reveal(h, &order),
        order,
        adaptive: false,
    }
}

/// χ_DP(G): the least k such that every full k-fold cover has an independent
/// transversal. `max_nodes` caps the outer search per (component, k).
pub fn dp_chromatic_number(g: &Graph, max_nodes: u64) -> Result<usize> {
    if g.n() == 0 {
        return Ok(0);
    }
    let mut best = 1;
    for comp in g.components() {
        let (h, _) = g.induced_subgraph(&comp)?;
        if h.m() == 0 {
            continue;
        }
        let mut k = best.max(2);
        while solve(&ones_problem(&h, k), max_nodes, 0)?.0.is_some() {
            k += 1;
        }
        best = best.max(k);
    }
    Ok(best)
}

/// χ_DP(G) by trying every gauge-fixed full cover. Test oracle.
pub fn dp_chromatic_number_raw(g: &Graph) -> Result<usize> {
    if g.n() == 0 {
        return Ok(0);
    }
    let mut best = 1;
    for comp in g.components() {
        let (h, _) = g.induced_subgraph(&comp)?;
        if h.m() == 0 {
            continue;
        }
        let mut k = 2;
        while solve_raw(&ones_problem(&h, k))?.is_some() {
            k += 1;
        }
        best = best.max(k);
    }
    Ok(best)
}
