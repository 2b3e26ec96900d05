//! Simple undirected graphs on dense ids `0..n`.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        if u >= n {
            return Err(Error::VertexOutOfRange(u));
        }
        if v >= n {
            return Err(Error::VertexOutOfRange(v));
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Err(Error::DuplicateEdge(u.min(v), u.max(v))),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.m += 1;
                Ok(())
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n() || v >= self.n() {
            return Err(Error::VertexOutOfRange(u.max(v)));
        }
        let pu = self.adj[u]
            .binary_search(&v)
            .map_err(|_| Error::NotAdjacent(u, v))?;
        self.adj[u].remove(pu);
        let pv = self.adj[v].binary_search(&u).unwrap();
        self.adj[v].remove(pv);
        self.m -= 1;
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Neighbors of `v` in increasing order.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Subgraph induced by `s`, plus the map from new ids to old ids.
    /// New ids follow the order of `s`.
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in s.iter().enumerate() {
            if v >= self.n() {
                return Err(Error::VertexOutOfRange(v));
            }
            if index[v] != usize::MAX {
                return Err(Error::Precondition(format!("vertex {v} listed twice")));
            }
            index[v] = i;
        }
        let mut h = Graph::new(s.len());
        for (i, &v) in s.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    h.add_edge(i, j)?;
                }
            }
        }
        Ok((h, s.to_vec()))
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Adjacency rows as bitmasks. Only for graphs with at most 64 vertices.
    pub fn masks(&self) -> Result<Vec<u64>> {
        if self.n() > 64 {
            return Err(Error::TooLarge(self.n()));
        }
        Ok(self
            .adj
            .iter()
            .map(|row| row.iter().fold(0u64, |acc, &w| acc | (1 << w)))
            .collect())
    }

    /// Relabel: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut h = Graph::new(self.n());
        for (u, v) in self.edges() {
            h.add_edge(perm[u], perm[v]).expect("permutation keeps the graph simple");
        }
        h
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycles need at least three vertices");
        let mut g = Graph::new(n);
        for v in 0..n {
            g.add_edge(v, (v + 1) % n).unwrap();
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v).unwrap();
        }
        g
    }

    pub fn petersen() -> Graph {
        let mut g = Graph::new(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5).unwrap();
            g.add_edge(i, i + 5).unwrap();
            g.add_edge(5 + i, 5 + (i + 2) % 5).unwrap();
        }
        g
    }

    /// Hub `0` joined to the cycle `1..=k`.
    pub fn wheel(k: usize) -> Graph {
        let mut g = Graph::new(k + 1);
        for i in 1..=k {
            g.add_edge(0, i).unwrap();
            g.add_edge(i, i % k + 1).unwrap();
        }
        g
    }

    pub fn octahedron() -> Graph {
        let mut g = Graph::complete(6);
        for i in 0..3 {
            g.remove_edge(i, i + 3).unwrap();
        }
        g
    }

    pub fn cube() -> Graph {
        let mut g = Graph::new(8);
        for v in 0..8usize {
            for b in 0..3 {
                let w = v ^ (1 << b);
                if v < w {
                    g.add_edge(v, w).unwrap();
                }
            }
        }
        g
    }
}

/// A nonnegative integer per vertex: the budgets of the degeneracy games.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Budget(Vec<u32>);

impl Budget {
    pub fn new(values: Vec<u32>) -> Self {
        Budget(values)
    }

    pub fn constant(n: usize, c: u32) -> Self {
        Budget(vec![c; n])
    }

    /// `d(v) - 1`, clamped at zero for isolated vertices.
    pub fn degree_minus_one(g: &Graph) -> Self {
        Budget((0..g.n()).map(|v| g.degree(v).saturating_sub(1) as u32).collect())
    }

    /// Checks that the budget is defined on exactly the vertices of `g`.
    pub fn check(&self, g: &Graph) -> Result<()> {
        if self.0.len() != g.n() {
            return Err(Error::InvalidBudget(format!(
                "{} values for {} vertices",
                self.0.len(),
                g.n()
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn plus(&self, c: u32) -> Budget {
        Budget(self.0.iter().map(|&x| x + c).collect())
    }
}

impl std::ops::Index<usize> for Budget {
    type Output = u32;
    fn index(&self, v: usize) -> &u32 {
        &self.0[v]
    }
}
