//! Hand-drawn orientations of configurations, with every edge to the outside
//! directed away from the configuration.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::at::{diff, Orientation};
use crate::config::{lookup, Configuration};
use crate::error::{Error, Result};

pub const ORIENTATIONS_TEXT: &str = include_str!("../data/orientations.txt");

/// A configuration on vertices `0..inside` plus one leaf per stub arc.
#[derive(Clone, Debug)]
pub struct OrientedConfig {
    pub config: Configuration,
    pub digraph: Orientation,
    pub inside: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Obligations {
    pub name: String,
    pub max_out_degree: usize,
    pub diff: String,
    /// Arcs between the configuration and the rest that point inward.
    pub inward_arcs: usize,
    /// Vertices whose total degree differs from the drawn one.
    pub degree_mismatches: Vec<String>,
}

impl Obligations {
    pub fn hold(&self) -> bool {
        self.max_out_degree <= 3 && self.diff != "0" && self.inward_arcs == 0 && self.degree_mismatches.is_empty()
    }
}

pub fn parse_orientations(text: &str) -> Result<Vec<OrientedConfig>> {
    let mut out = Vec::new();
    // (config, first line, arcs, stubs)
    let mut cur: Option<(Configuration, usize, Vec<(usize, usize)>, Vec<(usize, usize)>)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let col = raw.find(toks[0]).unwrap_or(0) + 1;
        if toks[0] != "end" && toks.len() != if toks[0] == "orient" { 2 } else { 3 } {
            return Err(Error::parse(line, col, format!("wrong number of arguments to `{}`", toks[0])));
        }
        match (toks[0], cur.as_mut()) {
            ("orient", None) => {
                let c = lookup(toks[1]).map_err(|e| Error::parse(line, col, e.to_string()))?;
                cur = Some((c, line, vec![], vec![]));
            }
            ("arc" | "stub", Some((c, _, arcs, stubs))) => {
                let v = c
                    .index_of(toks[1])
                    .ok_or_else(|| Error::parse(line, col, format!("no vertex `{}`", toks[1])))?;
                if toks[0] == "arc" {
                    let w = c
                        .index_of(toks[2])
                        .ok_or_else(|| Error::parse(line, col, format!("no vertex `{}`", toks[2])))?;
                    if !c.pattern().has_edge(v, w) {
                        return Err(Error::parse(line, col, format!("{} {} is not an edge", toks[1], toks[2])));
                    }
                    arcs.push((v, w));
                } else {
                    let k = toks[2]
                        .parse()
                        .map_err(|_| Error::parse(line, col, format!("expected a number, got `{}`", toks[2])))?;
                    stubs.push((v, k));
                }
            }
            ("end", Some(_)) => {
                let (c, start, mut arcs, stubs) = cur.take().expect("open block");
                if arcs.len() != c.pattern().m() {
                    return Err(Error::parse(start, 1, format!("{}: {} arcs for {} edges", c.name(), arcs.len(), c.pattern().m())));
                }
                let inside = c.n();
                let mut next = inside;
                for &(v, k) in &stubs {
                    for _ in 0..k {
                        arcs.push((v, next));
                        next += 1;
                    }
                }
                let digraph = Orientation::new(next, arcs).map_err(|e| Error::parse(start, 1, e.to_string()))?;
                out.push(OrientedConfig {
                    config: c,
                    digraph,
                    inside,
                });
            }
            (kw, _) => return Err(Error::parse(line, col, format!("unexpected `{kw}`"))),
        }
    }
    if let Some((c, start, ..)) = cur {
        return Err(Error::parse(start, 1, format!("block `{}` has no `end`", c.name())));
    }
    Ok(out)
}

pub fn oriented_configs() -> Vec<OrientedConfig> {
    parse_orientations(ORIENTATIONS_TEXT).expect("shipped orientations parse")
}

/// Out-degree at most 3, nonzero diff, nothing pointing in, degrees as drawn.
pub fn obligations(o: &OrientedConfig) -> Obligations {
    let d = &o.digraph;
    let inward_arcs = d.arcs().iter().filter(|&&(u, v)| u >= o.inside && v < o.inside).count();
    let (outd, ind) = (d.out_degrees(), d.in_degrees());
    let degree_mismatches = (0..o.inside)
        .filter(|&v| o.config.degree(v).is_some_and(|k| outd[v] + ind[v] != k))
        .map(|v| o.config.label(v).to_string())
        .collect();
    let df: BigInt = diff(d);
    Obligations {
        name: o.config.name().to_string(),
        max_out_degree: d.max_out_degree(),
        diff: if df.is_zero() { "0".into() } else { df.to_string() },
        inward_arcs,
        degree_mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_orientations_hold() {
        let all = oriented_configs();
        assert_eq!(all.len(), 6);
        for o in &all {
            let ob = obligations(o);
            assert!(ob.hold(), "{ob:?}");
        }
    }

    #[test]
    fn reversed_stub_is_caught() {
        let mut o = oriented_configs().remove(0);
        let mut arcs = o.digraph.arcs().to_vec();
        let last = arcs.pop().unwrap();
        arcs.push((last.1, last.0));
        o.digraph = Orientation::new(o.digraph.n(), arcs).unwrap();
        assert_eq!(obligations(&o).inward_arcs, 1);
    }

    #[test]
    fn missing_arc_is_a_parse_error() {
        let text = "orient Kite\n  arc a1 a2\nend\n";
        assert!(matches!(parse_orientations(text), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_orientations("orient Kite\n  arc a2 a4\n"), Err(Error::Parse { line: 2, .. })));
    }
}
