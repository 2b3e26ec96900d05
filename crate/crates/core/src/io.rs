//! Text formats: edge lists, rotation files and orientation files.
//!
//! Everything after `#` on a line is ignored, as are blank lines. Writers emit the
//! canonical form, which reads back to the same value byte for byte.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::plane::RotationSystem;

struct Line<'a> {
    number: usize,
    comment_only: bool,
    tokens: Vec<(usize, &'a str)>,
}

fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut tokens = Vec::new();
        let mut start = None;
        for (j, c) in body.char_indices() {
            if c.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push((s + 1, &body[s..j]));
                }
            } else if start.is_none() {
                start = Some(j);
            }
        }
        if let Some(s) = start {
            tokens.push((s + 1, &body[s..]));
        }
        out.push(Line {
            number: i + 1,
            comment_only: raw.trim_start().starts_with('#'),
            tokens,
        });
    }
    out
}

fn number(line: usize, col: usize, tok: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, col, format!("expected a nonnegative integer, found `{tok}`")))
}

/// Reads `n m` followed by `m` pairs. Pairs are returned in file order.
fn read_pairs(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let all = lines(text);
    let mut it = all.iter().filter(|l| !l.tokens.is_empty());
    let header = it
        .next()
        .ok_or_else(|| Error::parse(1, 1, "missing `n m` header"))?;
    if header.tokens.len() != 2 {
        let col = header.tokens.get(2).map_or(1, |t| t.0);
        return Err(Error::parse(header.number, col, "header must be `n m`"));
    }
    let n = number(header.number, header.tokens[0].0, header.tokens[0].1)?;
    let m = number(header.number, header.tokens[1].0, header.tokens[1].1)?;
    let mut pairs = Vec::with_capacity(m);
    for line in it {
        if line.tokens.len() != 2 {
            let col = line.tokens.get(2).map_or(line.tokens[0].0, |t| t.0);
            return Err(Error::parse(line.number, col, "expected two vertex ids"));
        }
        if pairs.len() == m {
            return Err(Error::parse(
                line.number,
                1,
                format!("more than the {m} edges announced in the header"),
            ));
        }
        let mut pair = [0usize; 2];
        for (k, &(col, tok)) in line.tokens.iter().enumerate() {
            let x = number(line.number, col, tok)?;
            if x >= n {
                return Err(Error::parse(line.number, col, format!("vertex {x} out of range 0..{n}")));
            }
            pair[k] = x;
        }
        if pair[0] == pair[1] {
            return Err(Error::parse(line.number, line.tokens[1].0, "self-loop"));
        }
        pairs.push((pair[0], pair[1]));
    }
    if pairs.len() != m {
        let last = all.last().map_or(1, |l| l.number);
        return Err(Error::parse(
            last,
            1,
            format!("header announces {m} edges, found {}", pairs.len()),
        ));
    }
    Ok((n, pairs))
}

fn locate(text: &str, pair_index: usize) -> usize {
    // Line number of the `pair_index`-th data line, for error messages.
    lines(text)
        .iter()
        .filter(|l| !l.tokens.is_empty())
        .nth(pair_index + 1)
        .map_or(1, |l| l.number)
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let (n, pairs) = read_pairs(text)?;
    let mut g = Graph::new(n);
    for (i, &(u, v)) in pairs.iter().enumerate() {
        if g.add_edge(u, v).is_err() {
            return Err(Error::parse(locate(text, i), 1, format!("duplicate edge {u} {v}")));
        }
    }
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// One line per vertex, listing its neighbors in cyclic order. The number of
/// lines fixes `n`; the graph itself is checked separately.
pub fn parse_rotation(text: &str, n: usize) -> Result<RotationSystem> {
    let all = lines(text);
    // Blank lines are rows here: an isolated vertex has an empty rotation.
    let data: Vec<&Line> = all.iter().filter(|l| !l.comment_only).collect();
    let mut order = Vec::with_capacity(n);
    for line in data.iter().take(n) {
        let mut row = Vec::with_capacity(line.tokens.len());
        for &(col, tok) in &line.tokens {
            let x = number(line.number, col, tok)?;
            if x >= n {
                return Err(Error::parse(line.number, col, format!("vertex {x} out of range 0..{n}")));
            }
            row.push(x);
        }
        order.push(row);
    }
    if order.len() != n {
        return Err(Error::parse(
            all.len().max(1),
            1,
            format!("expected {n} rotation lines, found {}", order.len()),
        ));
    }
    if let Some(extra) = data.iter().skip(n).find(|l| !l.tokens.is_empty()) {
        return Err(Error::parse(extra.number, 1, "more rotation lines than vertices"));
    }
    Ok(RotationSystem::new(order))
}

pub fn write_rotation(rot: &RotationSystem) -> String {
    let mut s = String::new();
    for row in rot.order() {
        let parts: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        s.push_str(&parts.join(" "));
        s.push('\n');
    }
    s
}

/// Arcs `u v` meaning `u -> v`, in file order.
pub fn parse_arcs(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let (n, pairs) = read_pairs(text)?;
    let mut g = Graph::new(n);
    for (i, &(u, v)) in pairs.iter().enumerate() {
        if g.add_edge(u, v).is_err() {
            return Err(Error::parse(
                locate(text, i),
                1,
                format!("edge {u} {v} oriented twice"),
            ));
        }
    }
    Ok((n, pairs))
}

pub fn write_arcs(n: usize, arcs: &[(usize, usize)]) -> String {
    let mut s = format!("{} {}\n", n, arcs.len());
    for &(u, v) in arcs {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}
