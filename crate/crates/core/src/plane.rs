//! Rotation systems and face walks of plane graphs.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Cyclic order of neighbors around each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSystem {
    order: Vec<Vec<usize>>,
}

/// A closed walk of darts `(u, v)` bounding one face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceWalk {
    darts: Vec<(usize, usize)>,
}

impl FaceWalk {
    pub fn darts(&self) -> &[(usize, usize)] {
        &self.darts
    }

    /// d(f): the number of darts on the walk.
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Tails of the darts, in walk order.
    pub fn vertices(&self) -> Vec<usize> {
        self.darts.iter().map(|&(u, _)| u).collect()
    }

    /// True when the walk visits no vertex twice.
    pub fn is_cycle(&self) -> bool {
        let mut vs = self.vertices();
        let k = vs.len();
        vs.sort_unstable();
        vs.dedup();
        vs.len() == k && k >= 3
    }
}

impl RotationSystem {
    pub fn new(order: Vec<Vec<usize>>) -> Self {
        RotationSystem { order }
    }

    pub fn order(&self) -> &[Vec<usize>] {
        &self.order
    }

    /// Rotation with each vertex's neighbors in increasing id order. Rarely planar;
    /// convenient for trees and cycles.
    pub fn sorted(g: &Graph) -> Self {
        RotationSystem {
            order: (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect(),
        }
    }

    /// Each list must be a permutation of the neighborhood.
    pub fn check_against(&self, g: &Graph) -> Result<()> {
        if self.order.len() != g.n() {
            return Err(Error::Rotation(format!(
                "{} rotation lists for {} vertices",
                self.order.len(),
                g.n()
            )));
        }
        for (v, row) in self.order.iter().enumerate() {
            let mut sorted = row.clone();
            sorted.sort_unstable();
            if sorted != g.neighbors(v) {
                return Err(Error::Rotation(format!(
                    "rotation at vertex {v} is not a permutation of its neighbors"
                )));
            }
        }
        Ok(())
    }

    fn successor(&self, v: usize, u: usize) -> usize {
        let row = &self.order[v];
        let i = row.iter().position(|&x| x == u).expect("dart exists");
        row[(i + 1) % row.len()]
    }

    /// Face walks: the successor of dart `(u, v)` is `(v, w)` where `w` follows `u`
    /// in the rotation at `v`. Faces are listed in order of their smallest dart.
    pub fn faces(&self, g: &Graph) -> Result<Vec<FaceWalk>> {
        self.check_against(g)?;
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        if g.m() == 0 {
            return Ok(vec![FaceWalk { darts: Vec::new() }]);
        }
        let mut darts: Vec<(usize, usize)> = Vec::with_capacity(2 * g.m());
        for (u, v) in g.edges() {
            darts.push((u, v));
            darts.push((v, u));
        }
        darts.sort_unstable();
        let index = |d: (usize, usize)| darts.binary_search(&d).unwrap();
        let mut used = vec![false; darts.len()];
        let mut faces = Vec::new();
        for start in 0..darts.len() {
            if used[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = darts[start];
            loop {
                let i = index(d);
                if used[i] {
                    if i != start {
                        return Err(Error::Rotation("face walk does not close".into()));
                    }
                    break;
                }
                used[i] = true;
                walk.push(d);
                let (u, v) = d;
                d = (v, self.successor(v, u));
            }
            faces.push(FaceWalk { darts: walk });
        }
        let euler = g.n() as i64 - g.m() as i64 + faces.len() as i64;
        if euler != 2 {
            return Err(Error::Rotation(format!(
                "n - m + f = {euler}, not a plane embedding"
            )));
        }
        Ok(faces)
    }
}
