//! Block decomposition and the GDP-tree test.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Biconnected components as sorted vertex sets. An isolated vertex forms its own
/// block. Blocks are sorted lexicographically.
pub fn blocks(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut out: Vec<Vec<usize>> = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        if g.degree(root) == 0 {
            disc[root] = time;
            time += 1;
            out.push(vec![root]);
            continue;
        }
        // Iterative DFS: (vertex, parent, next neighbor index).
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, parent) = (top.0, top.1);
            if top.2 < g.degree(v) {
                let w = g.neighbors(v)[top.2];
                top.2 += 1;
                if disc[w] == usize::MAX {
                    edge_stack.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut comp = Vec::new();
                        while let Some((a, b)) = edge_stack.pop() {
                            comp.push(a);
                            comp.push(b);
                            if (a, b) == (u, v) {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comp.dedup();
                        out.push(comp);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn is_complete_or_cycle(g: &Graph) -> bool {
    let n = g.n();
    let complete = g.m() == n * (n.saturating_sub(1)) / 2;
    let cycle = n >= 3 && g.is_connected() && (0..n).all(|v| g.degree(v) == 2);
    complete || cycle
}

/// A connected graph is a GDP-tree when every block is a cycle or a complete graph.
pub fn is_gdp_tree(g: &Graph) -> Result<bool> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    for b in blocks(g) {
        let (h, _) = g.induced_subgraph(&b)?;
        if !is_complete_or_cycle(&h) {
            return Ok(false);
        }
    }
    Ok(true)
}
