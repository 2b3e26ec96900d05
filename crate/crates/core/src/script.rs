//! Removal scripts for configurations: the sequence conditions that make a
//! configuration reducible for weak 3-degeneracy, and their replay.

use serde::Serialize;

use crate::config::{Configuration, Match};
use crate::error::{Error, Result};
use crate::graph::{Budget, Graph};
use crate::weak::{is_weakly_f_degenerate, GameState, RemovalStep};

/// g(a) = 3 − |N(a) outside the matched set|, indexed by pattern vertex.
pub fn residual_budget(g: &Graph, m: &Match) -> Result<Budget> {
    let inside: Vec<bool> = {
        let mut v = vec![false; g.n()];
        for &h in &m.map {
            v[h] = true;
        }
        v
    };
    let mut out = Vec::with_capacity(m.map.len());
    for &h in &m.map {
        let ext = g.neighbors(h).iter().filter(|&&w| !inside[w]).count();
        if ext > 3 {
            return Err(Error::Precondition(format!("vertex {h} has {ext} neighbours outside the match")));
        }
        out.push(3 - ext as u32);
    }
    Ok(Budget::new(out))
}

fn violated(c: &Configuration, clause: &str, v: usize) -> Error {
    Error::ConditionViolated {
        clause: clause.to_string(),
        vertex: c.label(v).to_string(),
    }
}

/// Checks the sequence conditions for the script of `c` under match `m` in `g`,
/// then returns the removal steps (host ids): DeleteSave at every pair head,
/// Delete elsewhere. The steps are replayed on `g[A]` with budget `budget`
/// (indexed by pattern vertex) before returning.
pub fn execute_weak_script(g: &Graph, budget: &Budget, m: &Match, c: &Configuration) -> Result<Vec<RemovalStep>> {
    let sc = c
        .script()
        .ok_or_else(|| Error::Precondition(format!("{} has no script", c.name())))?;
    let n = c.n();
    if m.map.len() != n || budget.len() != n {
        return Err(Error::Precondition("match and budget must cover the pattern".into()));
    }
    let t = sc.order.len();
    let host = |i: usize| m.map[sc.order[i - 1]];
    // position of each host vertex in the script, 0 if outside
    let mut pos = vec![0usize; g.n()];
    for i in 1..=t {
        pos[host(i)] = i;
    }
    // neighbours of a_i outside {a_j : j >= from}
    let below = |i: usize, from: usize| g.neighbors(host(i)).iter().filter(|&&w| pos[w] == 0 || pos[w] < from).count();

    let mut pairs = sc.save_pairs.clone();
    pairs.sort_unstable();
    if t >= 2 && !pairs.contains(&(1, t)) {
        return Err(violated(c, "the first and last vertices form a save pair", sc.order[0]));
    }
    let head: Vec<Option<usize>> = (0..=t).map(|i| pairs.iter().find(|p| p.0 == i).map(|p| p.1)).collect();
    let tail: Vec<bool> = (0..=t).map(|i| pairs.iter().any(|p| p.1 == i)).collect();
    for &(r, mm) in &pairs {
        if !g.has_edge(host(r), host(mm)) {
            return Err(violated(c, "a_r a_m is an edge", sc.order[r - 1]));
        }
        if below(mm, mm + 1) != 4 {
            return Err(violated(c, "a_m has degree four once later vertices are gone", sc.order[mm - 1]));
        }
        if below(mm, r) <= below(r, r) {
            return Err(violated(c, "a_m has more remaining neighbours than a_r", sc.order[mm - 1]));
        }
    }
    for i in 2..t {
        if head[i].is_none() && !tail[i] && below(i, i + 1) > 3 {
            return Err(violated(c, "a_i has at most three neighbours once later vertices are gone", sc.order[i - 1]));
        }
    }

    // Budget form of the same conditions, so a weakened budget is refused here
    // rather than by an illegal move.
    let mut left: Vec<i64> = budget.values().iter().map(|&x| x as i64).collect();
    let mut gone = vec![false; n];
    let mut steps = Vec::with_capacity(t);
    for i in 1..=t {
        let u = sc.order[i - 1];
        let save = head[i].map(|mm| sc.order[mm - 1]);
        if let Some(w) = save {
            if left[u] <= left[w] {
                return Err(violated(c, "budget of a_r exceeds budget of a_m", u));
            }
        }
        if left[u] < 0 {
            return Err(violated(c, "budget stays non-negative", u));
        }
        gone[u] = true;
        for &x in c.pattern().neighbors(u) {
            if !gone[x] && Some(x) != save {
                left[x] -= 1;
                if left[x] < 0 {
                    return Err(violated(c, "budget stays non-negative", x));
                }
            }
        }
        steps.push(match save {
            Some(w) => RemovalStep::delete_save(m.map[u], m.map[w]),
            None => RemovalStep::delete(m.map[u]),
        });
    }

    // Replay on g[A] in pattern ids.
    let sub = induced_pattern(g, m)?;
    let mut state = GameState::new(&sub, budget)?;
    let back = |h: usize| m.map.iter().position(|&x| x == h).expect("matched vertex");
    for s in &steps {
        let local = match s.w {
            Some(w) => RemovalStep::delete_save(back(s.u), back(w)),
            None => RemovalStep::delete(back(s.u)),
        };
        state = state.apply(&sub, &local)?;
    }
    if !state.is_empty() {
        return Err(Error::Precondition("script leaves vertices behind".into()));
    }
    Ok(steps)
}

/// g[A] with vertex i being the image of pattern vertex i.
fn induced_pattern(g: &Graph, m: &Match) -> Result<Graph> {
    let n = m.map.len();
    let mut sub = Graph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(m.map[i], m.map[j]) {
                sub.add_edge(i, j)?;
            }
        }
    }
    Ok(sub)
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakCertificate {
    pub name: String,
    pub budget: Vec<u32>,
    pub steps: Vec<RemovalStep>,
    pub game_states: usize,
}

/// Runs the script on the configuration padded with pendant leaves, then
/// confirms with the exhaustive game that the pattern is weakly g-degenerate.
pub fn certify_reducible_weak(c: &Configuration) -> Result<WeakCertificate> {
    let host = c.stub_host();
    let m = Match::identity(c.n());
    let budget = residual_budget(&host, &m)?;
    let steps = execute_weak_script(&host, &budget, &m, c)?;
    let game = is_weakly_f_degenerate(c.pattern(), &budget)?;
    if !game.degenerate {
        return Err(Error::CounterexampleFound(format!(
            "{}: script replayed but the game search says the pattern is not weakly g-degenerate",
            c.name()
        )));
    }
    Ok(WeakCertificate {
        name: c.name().to_string(),
        budget: budget.values().to_vec(),
        steps,
        game_states: game.states,
    })
}

/// Exhaustive game search alone on the padded configuration.
pub fn weak_game_holds(c: &Configuration) -> Result<bool> {
    let host = c.stub_host();
    let budget = residual_budget(&host, &Match::identity(c.n()))?;
    Ok(is_weakly_f_degenerate(c.pattern(), &budget)?.degenerate)
}

/// Every set of `count` save pairs (including (1, t)) for which the script
/// conditions hold on the padded configuration, lexicographically.
pub fn search_save_pairs(c: &Configuration, count: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    let sc = c
        .script()
        .ok_or_else(|| Error::Precondition(format!("{} has no script", c.name())))?;
    let t = sc.order.len();
    let host = c.stub_host();
    let m = Match::identity(c.n());
    let budget = residual_budget(&host, &m)?;
    let cand: Vec<(usize, usize)> = (2..t)
        .flat_map(|r| (r + 1..t).map(move |mm| (r, mm)))
        .filter(|&(r, mm)| c.pattern().has_edge(c.at(r), c.at(mm)))
        .collect();
    let mut out = Vec::new();
    let mut pick = Vec::new();
    fn rec(
        k: usize,
        left: usize,
        cand: &[(usize, usize)],
        pick: &mut Vec<(usize, usize)>,
        visit: &mut dyn FnMut(&[(usize, usize)]),
    ) {
        if left == 0 {
            visit(pick);
            return;
        }
        for i in k..cand.len() {
            let (r, m) = cand[i];
            if pick.iter().any(|&(a, b)| a == r || a == m || b == r || b == m) {
                continue;
            }
            pick.push(cand[i]);
            rec(i + 1, left - 1, cand, pick, visit);
            pick.pop();
        }
    }
    if count == 0 {
        return Ok(out);
    }
    rec(0, count - 1, &cand, &mut pick, &mut |p| {
        let mut pairs = vec![(1, t)];
        pairs.extend_from_slice(p);
        let mut trial_script = sc.clone();
        trial_script.save_pairs = pairs.clone();
        let trial = Configuration::new(
            c.name(),
            c.labels().to_vec(),
            &c.pattern().edges(),
            (0..c.n()).map(|v| c.degree(v)).collect(),
            vec![None; c.n()],
            c.non_edges(),
            Some(trial_script),
        )
        .expect("valid trial");
        if execute_weak_script(&host, &budget, &m, &trial).is_ok() {
            out.push(pairs);
        }
    });
    Ok(out)
}
