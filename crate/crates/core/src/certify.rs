//! Exhaustive certification that a configuration is reducible for strictly
//! f-degenerate transversals: every cover of the pattern, with every residual
//! budget the outside can leave behind, has a transversal.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::config::{Configuration, Match};
use crate::cover::{extend_sfdt, is_sfdt, Cover, FVector, Transversal};
use crate::engine::{default_reveal, solve_raw, solve_until, space_size, vectors_with_sum, EngineStats, Problem};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct SfdtCertificate {
    pub name: String,
    pub k: usize,
    /// Least residual sum per vertex, `k` minus its external degree.
    pub residual_sums: Vec<u32>,
    /// Residual vectors per vertex (values 0..=2, sum as above).
    pub options: Vec<usize>,
    /// (budget combination, gauge-fixed cover) pairs covered by the sweep.
    pub cases: u128,
    pub stats: EngineStats,
}

#[derive(Clone, Copy, Debug)]
pub struct SweepLimits {
    pub max_nodes: u64,
    /// Outer levels run in parallel on the current rayon pool.
    pub par_depth: usize,
    /// Wall-clock allowance for the whole sweep.
    pub time_limit: Option<Duration>,
}

impl Default for SweepLimits {
    fn default() -> Self {
        SweepLimits {
            max_nodes: 50_000_000,
            par_depth: 0,
            time_limit: None,
        }
    }
}

/// The least residual budgets the outside can leave: values at most 2 and at
/// least `k − external(v)` in total. Larger vectors only help, so these suffice.
pub fn residual_options(c: &Configuration, k: usize) -> Vec<Vec<Vec<u8>>> {
    (0..c.n())
        .map(|v| {
            let sum = k.saturating_sub(c.external(v).unwrap_or(0)) as u32;
            vectors_with_sum(k, 2, sum)
        })
        .collect()
}

/// Inner game prefers script order but may commit in any order.
pub(crate) fn problem(c: &Configuration, k: usize) -> Result<Problem> {
    let g = c.pattern().clone();
    let order: Vec<usize> = c.script().map(|s| s.order.clone()).unwrap_or_else(|| (0..c.n()).collect());
    Ok(Problem {
        s: k,
        options: residual_options(c, k),
        reveal: default_reveal(&g, &order),
        order,
        adaptive: true,
        g,
    })
}

fn counterexample(c: &Configuration, k: usize, vectors: Vec<Vec<u8>>, perms: Vec<Vec<u8>>) -> Result<Error> {
    let h = Cover::from_permutations(c.pattern().clone(), k, &perms)?;
    let f = FVector::new(vectors, 2)?;
    Ok(Error::CounterexampleFound(format!(
        "{}: {}",
        c.name(),
        crate::cover::cover_to_json(&h, &f)?.replace('\n', "")
    )))
}

pub fn certify_reducible_sfdt(c: &Configuration, k: usize, limits: SweepLimits) -> Result<SfdtCertificate> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let p = problem(c, k)?;
    let deadline = limits.time_limit.map(|d| Instant::now() + d);
    let (found, stats) = solve_until(&p, limits.max_nodes, limits.par_depth, deadline)?;
    if let Some(cx) = found {
        return Err(counterexample(c, k, cx.vectors, cx.perms)?);
    }
    Ok(SfdtCertificate {
        name: c.name().to_string(),
        k,
        residual_sums: (0..c.n()).map(|v| k.saturating_sub(c.external(v).unwrap_or(0)) as u32).collect(),
        options: p.options.iter().map(|o| o.len()).collect(),
        cases: space_size(&p),
        stats,
    })
}

/// The same statement by plain enumeration of every gauge-fixed cover and
/// every budget combination. Exponential; for small patterns only.
pub fn certify_reducible_sfdt_raw(c: &Configuration, k: usize) -> Result<u128> {
    let p = problem(c, k)?;
    if let Some(cx) = solve_raw(&p)? {
        return Err(counterexample(c, k, cx.vectors, cx.perms)?);
    }
    Ok(space_size(&p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionPath {
    Greedy,
    Exhaustive,
}

#[derive(Clone, Debug, Serialize)]
pub struct Extension {
    pub transversal: Vec<usize>,
    pub path: ExtensionPath,
    /// f*(a, j) on the matched vertices, in pattern order.
    pub residual: Vec<Vec<u8>>,
}

/// f*(a, j) = max(0, f(a, j) − #outside neighbours whose chosen slot hits (a, j)).
pub fn residual_budgets(h: &Cover, f: &FVector, m: &Match, outside: &[Option<usize>]) -> Vec<Vec<u8>> {
    let g = h.base();
    m.map
        .iter()
        .map(|&a| {
            (0..h.s())
                .map(|j| {
                    let hits = g
                        .neighbors(a)
                        .iter()
                        .filter(|&&w| !m.map.contains(&w))
                        .filter(|&&w| outside[w].is_some() && h.partner(a, j, w) == outside[w])
                        .count();
                    f.get(a, j).saturating_sub(hits as u8)
                })
                .collect()
        })
        .collect()
}

/// Extends a strictly f-degenerate transversal of the outside to the matched
/// configuration. Tries the greedy first: slots are picked in reverse script
/// order, each with the largest surplus of f* over hits from slots already
/// picked; the script order then peels. Falls back to exhaustive search.
pub fn extend_sfdt_over_config(
    h: &Cover,
    f: &FVector,
    m: &Match,
    c: &Configuration,
    outside: &[Option<usize>],
) -> Result<Extension> {
    f.check(h)?;
    let n = h.n();
    if outside.len() != n || m.map.len() != c.n() || m.map.iter().any(|&a| a >= n) {
        return Err(Error::Precondition("match and outside transversal must fit the cover".into()));
    }
    if f.max() > 2 {
        return Err(Error::Precondition("f must take values in {0, 1, 2}".into()));
    }
    for &a in &m.map {
        if outside[a].is_some() {
            return Err(Error::Precondition(format!("vertex {a} is matched but has an outside slot")));
        }
        if f.sum(a) < 4 {
            return Err(Error::Precondition(format!("f sums to {} < 4 at vertex {a}", f.sum(a))));
        }
    }
    if let Some(v) = (0..n).find(|&v| outside[v].is_none() && !m.map.contains(&v)) {
        return Err(Error::Precondition(format!("outside transversal misses vertex {v}")));
    }
    let sc = c
        .script()
        .ok_or_else(|| Error::Precondition(format!("{} has no script", c.name())))?;
    // Also validates that the outside part peels on its own.
    let exhaustive = extend_sfdt(h, f, outside)?;
    let residual = residual_budgets(h, f, m, outside);

    let mut slot: Vec<Option<usize>> = outside.to_vec();
    let mut ok = true;
    for &p in sc.order.iter().rev() {
        let a = m.map[p];
        let best = (0..h.s())
            .map(|j| {
                let hits = h
                    .base()
                    .neighbors(a)
                    .iter()
                    .filter(|&&w| m.map.contains(&w) && slot[w].is_some() && h.partner(a, j, w) == slot[w])
                    .count() as i32;
                (residual[p][j] as i32 - hits, std::cmp::Reverse(j))
            })
            .max()
            .expect("fan is non-empty");
        if best.0 <= 0 {
            ok = false;
            break;
        }
        slot[a] = Some(best.1 .0);
    }
    if ok {
        let r = Transversal(slot.iter().map(|x| x.expect("every vertex chosen")).collect());
        if is_sfdt(h, f, &r)? {
            return Ok(Extension {
                transversal: r.0,
                path: ExtensionPath::Greedy,
                residual,
            });
        }
    }
    match exhaustive {
        Some(r) => Ok(Extension {
            transversal: r.0,
            path: ExtensionPath::Exhaustive,
            residual,
        }),
        None => Err(Error::NoExtension(format!("{} at {:?}", c.name(), m.map))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::lookup;

    #[test]
    fn options_shape() {
        let kite = lookup("Kite").unwrap();
        let o = residual_options(&kite, 4);
        // a1 has three neighbours inside, so it needs residual sum 3
        assert!(o[0].iter().all(|x| x.iter().map(|&b| b as u32).sum::<u32>() == 3));
        assert!(o[1].iter().all(|x| x.iter().map(|&b| b as u32).sum::<u32>() == 2));
    }

    fn random_instance(c: &Configuration, seed: u64) -> (Cover, FVector, Vec<Option<usize>>) {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let host = c.stub_host();
        let perms: Vec<Vec<u8>> = (0..host.m())
            .map(|_| {
                let mut p: Vec<u8> = (0..4).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect();
        let h = Cover::from_permutations(host.clone(), 4, &perms).unwrap();
        let options = vectors_with_sum(4, 2, 4);
        let rows = (0..host.n())
            .map(|v| if v < c.n() { options[rng.random_range(0..options.len())].clone() } else { vec![2; 4] })
            .collect();
        let f = FVector::new(rows, 2).unwrap();
        let outside = (0..host.n()).map(|v| (v >= c.n()).then(|| rng.random_range(0..4))).collect();
        (h, f, outside)
    }

    #[test]
    fn extension_on_random_covers() {
        for name in ["Kite", "F35", "RC1-a", "RC-1", "RC-2a"] {
            let c = lookup(name).unwrap();
            let m = Match::identity(c.n());
            for seed in 0..40 {
                let (h, f, outside) = random_instance(&c, seed);
                let ext = extend_sfdt_over_config(&h, &f, &m, &c, &outside).unwrap();
                assert!(is_sfdt(&h, &f, &Transversal(ext.transversal.clone())).unwrap(), "{name} {seed}");
                for v in c.n()..h.n() {
                    assert_eq!(Some(ext.transversal[v]), outside[v]);
                }
                // residual sums never drop below 4 - external degree
                for v in 0..c.n() {
                    let sum: u32 = ext.residual[v].iter().map(|&x| x as u32).sum();
                    assert!(sum >= 4 - c.external(v).unwrap_or(0) as u32);
                }
            }
        }
    }

    #[test]
    fn identity_cover_takes_greedy() {
        let c = lookup("Kite").unwrap();
        let host = c.stub_host();
        let h = Cover::identity(&host, 4);
        let f = FVector::constant(host.n(), 4, 1);
        let outside: Vec<Option<usize>> = (0..host.n()).map(|v| (v >= c.n()).then_some(0)).collect();
        let ext = extend_sfdt_over_config(&h, &f, &Match::identity(c.n()), &c, &outside).unwrap();
        assert_eq!(ext.path, ExtensionPath::Greedy);
    }

    #[test]
    fn extension_preconditions() {
        let c = lookup("Kite").unwrap();
        let (h, f, mut outside) = random_instance(&c, 7);
        let m = Match::identity(c.n());
        outside[0] = Some(1);
        assert!(matches!(extend_sfdt_over_config(&h, &f, &m, &c, &outside), Err(Error::Precondition(_))));
        outside[0] = None;
        outside[c.n()] = None;
        assert!(matches!(extend_sfdt_over_config(&h, &f, &m, &c, &outside), Err(Error::Precondition(_))));
        let low = FVector::constant(h.n(), 4, 0);
        let (_, _, outside) = random_instance(&c, 7);
        assert!(matches!(extend_sfdt_over_config(&h, &low, &m, &c, &outside), Err(Error::Precondition(_))));
    }
}
