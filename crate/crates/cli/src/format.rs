//! Plain-text graph files.
//!
//! ```text
//! c optional comment
//! p <n> <m> [weighted]
//! e <u> <v>
//! w <v> <num>[/<den>]
//! ```
//!
//! Vertices are 0-indexed. In a weighted file, vertices without a `w` line
//! weigh 1.

use std::collections::HashSet;

use powergraph::rational::{parse_rational, Rational};
use powergraph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

fn number<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, ParseError> {
    match tok.map(str::parse::<T>) {
        Some(Ok(v)) => Ok(v),
        Some(Err(_)) => fail(line, format!("invalid {what}")),
        None => fail(line, format!("missing {what}")),
    }
}

pub fn read_graph(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize, bool)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut weights: Option<Vec<Option<Rational>>> = None;
    let mut last = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last = line;
        let mut toks = raw.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        match tag {
            "c" | "#" => continue,
            "p" => {
                if header.is_some() {
                    return fail(line, "second header");
                }
                let n: usize = number(toks.next(), line, "vertex count")?;
                let m: usize = number(toks.next(), line, "edge count")?;
                let weighted = match toks.next() {
                    None => false,
                    Some("weighted") => true,
                    Some(other) => return fail(line, format!("unknown header flag `{other}`")),
                };
                if weighted {
                    weights = Some(vec![None; n]);
                }
                header = Some((n, m, weighted));
            }
            "e" | "w" => {
                let Some((n, _, _)) = header else { return fail(line, "data before header") };
                let v: usize = number(toks.next(), line, "vertex")?;
                if v >= n {
                    return fail(line, format!("vertex {v} out of range"));
                }
                if tag == "e" {
                    let u: usize = number(toks.next(), line, "vertex")?;
                    if u >= n {
                        return fail(line, format!("vertex {u} out of range"));
                    }
                    if u == v {
                        return fail(line, format!("self-loop on {u}"));
                    }
                    if !seen.insert((u.min(v), u.max(v))) {
                        return fail(line, format!("duplicate edge {v} {u}"));
                    }
                    edges.push((v, u));
                } else {
                    let Some(ws) = weights.as_mut() else { return fail(line, "weight in unweighted graph") };
                    let Some(tok) = toks.next() else { return fail(line, "missing weight") };
                    let w = parse_rational(tok).map_err(|e| ParseError { line, message: e.to_string() })?;
                    if w < Rational::from_integer(0) {
                        return fail(line, "negative weight");
                    }
                    if ws[v].replace(w).is_some() {
                        return fail(line, format!("second weight for {v}"));
                    }
                }
            }
            other => return fail(line, format!("unknown line type `{other}`")),
        }
        if toks.next().is_some() {
            return fail(line, "trailing tokens");
        }
    }
    let Some((n, m, _)) = header else { return fail(last.max(1), "missing header") };
    if edges.len() != m {
        return fail(last.max(1), format!("header declares {m} edges, found {}", edges.len()));
    }
    let g = Graph::from_edges(n, edges).map_err(|e| ParseError { line: last.max(1), message: e.to_string() })?;
    Ok(match weights {
        Some(ws) => g
            .with_weights(ws.into_iter().map(|w| w.unwrap_or(Rational::from_integer(1))).collect())
            .expect("weights checked non-negative"),
        None => g,
    })
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}{}\n", g.n(), g.m(), if g.is_weighted() { " weighted" } else { "" });
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    if let Some(ws) = g.weights() {
        for (v, w) in ws.iter().enumerate() {
            out.push_str(&format!("w {v} {w}\n"));
        }
    }
    out
}
