//! The Delete / DeleteSave game and weak degeneracy.

use std::collections::HashMap;

use serde::Serialize;

use crate::degeneracy::degeneracy;
use crate::error::{Error, Result};
use crate::graph::{Budget, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Delete,
    DeleteSave,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RemovalStep {
    pub kind: StepKind,
    pub u: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<usize>,
}

impl RemovalStep {
    pub fn delete(u: usize) -> Self {
        RemovalStep {
            kind: StepKind::Delete,
            u,
            w: None,
        }
    }

    pub fn delete_save(u: usize, w: usize) -> Self {
        RemovalStep {
            kind: StepKind::DeleteSave,
            u,
            w: Some(w),
        }
    }
}

/// Remaining vertices and their budgets. Budgets of removed vertices are kept
/// but meaningless.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState {
    remaining: Vec<bool>,
    budget: Vec<u32>,
}

impl GameState {
    pub fn new(g: &Graph, f: &Budget) -> Result<Self> {
        f.check(g)?;
        Ok(GameState {
            remaining: vec![true; g.n()],
            budget: f.values().to_vec(),
        })
    }

    pub fn is_empty(&self) -> bool {
        !self.remaining.iter().any(|&r| r)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.remaining.get(v).copied().unwrap_or(false)
    }

    pub fn budget(&self, v: usize) -> u32 {
        self.budget[v]
    }

    fn require(&self, v: usize) -> Result<()> {
        if !self.contains(v) {
            return Err(Error::IllegalMove(format!("vertex {v} is not in the graph")));
        }
        Ok(())
    }

    /// Removes `u` and charges every remaining neighbor one unit.
    pub fn delete(&self, g: &Graph, u: usize) -> Result<GameState> {
        self.require(u)?;
        self.remove(g, u, None)
    }

    /// Removes `u` and charges every remaining neighbor except `w`. Needs
    /// `f(u) > f(w)`.
    pub fn delete_save(&self, g: &Graph, u: usize, w: usize) -> Result<GameState> {
        self.require(u)?;
        self.require(w)?;
        if !g.has_edge(u, w) {
            return Err(Error::NotAdjacent(u, w));
        }
        if self.budget[u] <= self.budget[w] {
            return Err(Error::IllegalMove(format!(
                "DeleteSave({u}, {w}) needs f({u}) = {} > f({w}) = {}",
                self.budget[u], self.budget[w]
            )));
        }
        self.remove(g, u, Some(w))
    }

    fn remove(&self, g: &Graph, u: usize, save: Option<usize>) -> Result<GameState> {
        let mut next = self.clone();
        next.remaining[u] = false;
        for &x in g.neighbors(u) {
            if !self.remaining[x] || Some(x) == save {
                continue;
            }
            if next.budget[x] == 0 {
                return Err(Error::IllegalMove(format!(
                    "removing {u} would make the budget of {x} negative"
                )));
            }
            next.budget[x] -= 1;
        }
        Ok(next)
    }

    pub fn apply(&self, g: &Graph, step: &RemovalStep) -> Result<GameState> {
        match (step.kind, step.w) {
            (StepKind::Delete, None) => self.delete(g, step.u),
            (StepKind::DeleteSave, Some(w)) => self.delete_save(g, step.u, w),
            _ => Err(Error::IllegalMove("malformed step".into())),
        }
    }
}

/// Replays `steps` from `(g, f)`; true when every step is legal and the graph ends empty.
pub fn replay(g: &Graph, f: &Budget, steps: &[RemovalStep]) -> Result<bool> {
    let mut state = GameState::new(g, f)?;
    for s in steps {
        state = state.apply(g, s)?;
    }
    Ok(state.is_empty())
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WeakOutcome {
    pub degenerate: bool,
    /// A legal removal sequence emptying the graph, when one exists.
    pub witness: Option<Vec<RemovalStep>>,
    pub states: usize,
}

type Key = (u64, Vec<u8>);

struct Search<'a> {
    masks: &'a [u64],
    memo: HashMap<Key, Option<RemovalStep>>,
    max_states: Option<usize>,
}

impl Search<'_> {
    /// Drops vertices whose budget covers their current degree. Such a vertex can
    /// always be deleted last, so the game is decided by the rest.
    fn normalize(&self, mut mask: u64, budget: &[u32], removed: &mut Vec<usize>) -> u64 {
        loop {
            let mut changed = false;
            let mut rest = mask;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if (self.masks[v] & mask).count_ones() <= budget[v] {
                    mask &= !(1 << v);
                    removed.push(v);
                    changed = true;
                }
            }
            if !changed {
                return mask;
            }
        }
    }

    fn key(mask: u64, budget: &[u32]) -> Key {
        let mut b = Vec::with_capacity(mask.count_ones() as usize);
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            // Normalized states have budget < degree <= 63.
            b.push(budget[v] as u8);
        }
        (mask, b)
    }

    fn moves(&self, mask: u64, budget: &[u32]) -> Vec<RemovalStep> {
        let mut deletes = Vec::new();
        let mut saves = Vec::new();
        let mut rest = mask;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let nb = self.masks[u] & mask;
            let mut zeros = 0u64;
            let mut it = nb;
            while it != 0 {
                let x = it.trailing_zeros() as usize;
                it &= it - 1;
                if budget[x] == 0 {
                    zeros |= 1 << x;
                }
            }
            match zeros.count_ones() {
                0 => {
                    deletes.push(RemovalStep::delete(u));
                    let mut it = nb;
                    while it != 0 {
                        let w = it.trailing_zeros() as usize;
                        it &= it - 1;
                        if budget[u] > budget[w] {
                            saves.push(RemovalStep::delete_save(u, w));
                        }
                    }
                }
                1 => {
                    let w = zeros.trailing_zeros() as usize;
                    if budget[u] > budget[w] {
                        saves.push(RemovalStep::delete_save(u, w));
                    }
                }
                _ => {}
            }
        }
        saves.sort_by_key(|s| std::cmp::Reverse(budget[s.u] - budget[s.w.unwrap()]));
        deletes.extend(saves);
        deletes
    }

    fn apply(&self, mask: u64, budget: &mut [u32], step: &RemovalStep) -> u64 {
        let u = step.u;
        let mut nb = self.masks[u] & mask;
        if let Some(w) = step.w {
            nb &= !(1 << w);
        }
        while nb != 0 {
            let x = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            budget[x] -= 1;
        }
        mask & !(1 << u)
    }

    fn solve(&mut self, mask: u64, budget: &mut Vec<u32>) -> Result<bool> {
        let mut removed = Vec::new();
        let mask = self.normalize(mask, budget, &mut removed);
        if mask == 0 {
            return Ok(true);
        }
        let key = Self::key(mask, budget);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.is_some());
        }
        if let Some(cap) = self.max_states {
            if self.memo.len() >= cap {
                return Err(Error::BudgetExceeded(format!("more than {cap} game states")));
            }
        }
        let mut result = None;
        for step in self.moves(mask, budget) {
            let saved = budget.clone();
            let child = self.apply(mask, budget, &step);
            let win = self.solve(child, budget)?;
            *budget = saved;
            if win {
                result = Some(step);
                break;
            }
        }
        self.memo.insert(key, result);
        Ok(result.is_some())
    }

    fn witness(&self, mut mask: u64, mut budget: Vec<u32>) -> Vec<RemovalStep> {
        let mut steps = Vec::new();
        let mut tail = Vec::new();
        loop {
            mask = self.normalize(mask, &budget, &mut tail);
            if mask == 0 {
                break;
            }
            let step = self.memo[&Self::key(mask, &budget)].expect("winning state");
            mask = self.apply(mask, &mut budget, &step);
            steps.push(step);
        }
        steps.extend(tail.into_iter().rev().map(RemovalStep::delete));
        steps
    }
}

/// Exact decision by memoized search over (remaining set, budgets).
pub fn is_weakly_f_degenerate(g: &Graph, f: &Budget) -> Result<WeakOutcome> {
    search(g, f, None)
}

/// Same as [`is_weakly_f_degenerate`] but refuses once `max_states` states are stored.
pub fn is_weakly_f_degenerate_capped(g: &Graph, f: &Budget, max_states: usize) -> Result<WeakOutcome> {
    search(g, f, Some(max_states))
}

fn search(g: &Graph, f: &Budget, max_states: Option<usize>) -> Result<WeakOutcome> {
    f.check(g)?;
    let masks = g.masks()?;
    let mut s = Search {
        masks: &masks,
        memo: HashMap::new(),
        max_states,
    };
    let full = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let mut budget = f.values().to_vec();
    let win = s.solve(full, &mut budget)?;
    let witness = win.then(|| s.witness(full, f.values().to_vec()));
    Ok(WeakOutcome {
        degenerate: win,
        witness,
        states: s.memo.len(),
    })
}

/// wd(G): least d with G weakly d-degenerate. Components are independent.
pub fn weak_degeneracy(g: &Graph) -> Result<usize> {
    weak_degeneracy_capped(g, None)
}

pub fn weak_degeneracy_capped(g: &Graph, max_states: Option<usize>) -> Result<usize> {
    let mut best = 0;
    for comp in g.components() {
        let (h, _) = g.induced_subgraph(&comp)?;
        // Delete alone already works with budget d(H).
        let cap = degeneracy(&h);
        let mut d = best.min(cap);
        while d < cap {
            if search(&h, &Budget::constant(h.n(), d as u32), max_states)?.degenerate {
                break;
            }
            d += 1;
        }
        best = best.max(d);
    }
    Ok(best)
}

/// Weak (deg - 1)-degeneracy of a connected graph.
pub fn is_weakly_deg_minus_one_degenerate(g: &Graph) -> Result<bool> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    // K1 would need budget -1, which no game can meet.
    if g.n() == 1 {
        return Ok(false);
    }
    Ok(is_weakly_f_degenerate(g, &Budget::degree_minus_one(g))?.degenerate)
}

/// Removability using Delete moves only, decided over subsets of removed vertices.
pub fn delete_only_removable(g: &Graph, f: &Budget) -> Result<bool> {
    f.check(g)?;
    let n = g.n();
    if n > 24 {
        return Err(Error::TooLarge(n));
    }
    let masks = g.masks()?;
    let full = (1usize << n) - 1;
    // reach[S]: the vertices in S can be deleted first, in some legal order.
    let mut reach = vec![false; 1 << n];
    reach[0] = true;
    for s in 0..=full {
        if !reach[s] {
            continue;
        }
        for u in 0..n {
            if s & (1 << u) != 0 {
                continue;
            }
            // Deleting u charges each remaining neighbor; a neighbor x has already
            // paid once for every deleted neighbor of x.
            let ok = (0..n).filter(|&x| masks[u] & (1 << x) != 0 && s & (1 << x) == 0).all(|x| {
                let paid = (masks[x] & s as u64).count_ones();
                paid < f[x]
            });
            if ok {
                reach[s | (1 << u)] = true;
            }
        }
    }
    Ok(reach[full])
}
