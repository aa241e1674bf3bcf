// SPDX-License-Identifier: Apache-2.0

//! Text graph format: a header line `n m`, then `m` lines `u v [w]`
//! (0-indexed, whitespace separated, `w` defaults to 1).

use std::fs;
use std::io::Write;
use std::path::Path;

use super::Graph;
use crate::dist::MAX_WEIGHT;
use crate::error::{Error, Result};

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let text = fs::read_to_string(path)?;
    parse_graph(&text)
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header"))?;
    let mut fields = header.split_whitespace();
    let n = parse_field::<usize>(fields.next(), hline, "vertex count")?;
    let m = parse_field::<usize>(fields.next(), hline, "edge count")?;
    if fields.next().is_some() {
        return Err(Error::parse(hline, "header must be `n m`"));
    }

    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        if edges.len() == m {
            return Err(Error::parse(line, format!("more than {m} edge lines")));
        }
        let mut fields = l.split_whitespace();
        let u = parse_field::<usize>(fields.next(), line, "endpoint")?;
        let v = parse_field::<usize>(fields.next(), line, "endpoint")?;
        let w = match fields.next() {
            None => 1,
            Some(tok) => {
                if tok.starts_with('-') {
                    return Err(Error::parse(line, "negative weight"));
                }
                parse_field::<u64>(Some(tok), line, "weight")?
            }
        };
        if fields.next().is_some() {
            return Err(Error::parse(line, "trailing fields"));
        }
        if u >= n || v >= n {
            return Err(Error::parse(
                line,
                format!("vertex id out of range (n = {n})"),
            ));
        }
        if w > MAX_WEIGHT {
            return Err(Error::parse(line, "weight exceeds 2^40"));
        }
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(Error::parse(
            text.lines().count().max(1),
            format!("expected {m} edge lines, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, edges)
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("malformed {what}: {tok:?}")))
}

pub fn write_graph(g: &Graph, mut out: impl Write) -> Result<()> {
    writeln!(out, "{} {}", g.n(), g.m())?;
    for (u, v, w) in g.edges() {
        writeln!(out, "{u} {v} {w}")?;
    }
    Ok(())
}
