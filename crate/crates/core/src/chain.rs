//! χ ≤ χ_ℓ ≤ χ_DP ≤ wd + 1 ≤ d + 1 on one graph.

use serde::Serialize;

use crate::coloring::{chromatic_number, dp_chromatic_number, list_chromatic_number};
use crate::degeneracy::degeneracy;
use crate::error::Result;
use crate::graph::Graph;
use crate::weak::weak_degeneracy_capped;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainRow {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub chi: usize,
    pub chi_list: usize,
    pub chi_dp: usize,
    pub wd_plus_one: usize,
    pub d_plus_one: usize,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct ChainLimits {
    pub max_states: Option<usize>,
    pub max_covers: u64,
}

impl Default for ChainLimits {
    fn default() -> Self {
        ChainLimits {
            max_states: None,
            max_covers: 1 << 40,
        }
    }
}

pub fn chain_row(g: &Graph, limits: ChainLimits) -> Result<ChainRow> {
    let chi = chromatic_number(g);
    let chi_list = list_chromatic_number(g, limits.max_covers)?;
    let chi_dp = dp_chromatic_number(g, limits.max_covers)?;
    let wd_plus_one = weak_degeneracy_capped(g, limits.max_states)? + 1;
    let d_plus_one = degeneracy(g) + 1;
    Ok(ChainRow {
        n: g.n(),
        edges: g.edges(),
        chi,
        chi_list,
        chi_dp,
        wd_plus_one,
        d_plus_one,
        holds: chi <= chi_list && chi_list <= chi_dp && chi_dp <= wd_plus_one && wd_plus_one <= d_plus_one,
    })
}
