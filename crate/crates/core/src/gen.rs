//! Small graphs up to isomorphism.

use crate::error::{Error, Result};
use crate::graph::Graph;

fn pair_index(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for k in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=p.len()).map(move |i| {
                    let mut q = p.clone();
                    q.insert(i, k);
                    q
                })
            })
            .collect();
    }
    out
}

/// All connected graphs on `n` vertices, one per isomorphism class, in
/// increasing order of their canonical edge mask. Supports n ≤ 6.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > 6 {
        return Err(Error::TooLarge(n));
    }
    let pairs = pair_index(n);
    let mut index = vec![vec![0usize; n]; n];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        index[u][v] = i;
        index[v][u] = i;
    }
    let perms = all_perms(n);
    // Pair-index images under each permutation.
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| index[p[u]][p[v]]).collect())
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let canonical = images.iter().all(|img| {
            let mut m2 = 0u32;
            for (i, &j) in img.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    m2 |= 1 << j;
                }
            }
            m2 >= mask
        });
        if !canonical {
            continue;
        }
        let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        let g = Graph::from_edges(n, &edges)?;
        if g.is_connected() {
            out.push(g);
        }
    }
    Ok(out)
}
