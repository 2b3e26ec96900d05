//! Strict f-degeneracy and classic degeneracy.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::graph::{Budget, Graph};

/// Greedy peel: repeatedly remove the lowest-id vertex whose current degree is
/// below its budget. Returns the removal order if every vertex goes.
///
/// Peeling is confluent, so the greedy choice never loses an order that exists.
pub fn f_removing_order(g: &Graph, f: &Budget) -> Result<Option<Vec<usize>>> {
    f.check(g)?;
    Ok(peel(g, f.values()))
}

pub(crate) fn peel(g: &Graph, f: &[u32]) -> Option<Vec<usize>> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut gone = vec![false; n];
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| (deg[v] as u64) < f[v] as u64).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        gone[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !gone[w] {
                deg[w] -= 1;
                if (deg[w] as u64) < f[w] as u64 {
                    ready.insert(w);
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

pub fn is_strictly_f_degenerate(g: &Graph, f: &Budget) -> Result<bool> {
    Ok(f_removing_order(g, f)?.is_some())
}

/// Checks that `order` is an f-removing order: each vertex has fewer than
/// `f(v)` neighbors after it.
pub fn is_f_removing_order(g: &Graph, f: &Budget, order: &[usize]) -> bool {
    let n = g.n();
    if order.len() != n || f.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = i;
    }
    order.iter().enumerate().all(|(i, &v)| {
        let later = g.neighbors(v).iter().filter(|&&w| pos[w] > i).count();
        (later as u64) < f[v] as u64
    })
}

/// Smallest-last order: repeatedly remove a vertex of minimum current degree
/// (lowest id on ties). Returns the order and the degeneracy.
pub fn degeneracy_order(g: &Graph) -> (Vec<usize>, usize) {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (deg[v], v)).collect();
    let mut gone = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    while let Some((dv, v)) = queue.pop_first() {
        d = d.max(dv);
        gone[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !gone[w] {
                queue.remove(&(deg[w], w));
                deg[w] -= 1;
                queue.insert((deg[w], w));
            }
        }
    }
    (order, d)
}

/// d(G): the least d such that every subgraph has a vertex of degree at most d.
pub fn degeneracy(g: &Graph) -> usize {
    degeneracy_order(g).1
}
