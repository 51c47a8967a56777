//! Edge-list and DIMACS max-flow readers and writers.
//!
//! Edge lists are zero-based lines `u v` or `u v w`; `#` and `%` start
//! comments. A `# vertices N` comment, as written by [`write_edge_list`],
//! fixes the vertex count so trailing isolated vertices survive a round trip.

use std::io::Write;

use flowkit_core::generators::Edge;
use flowkit_core::TerminalPair;

use crate::error::{parse_error, BenchError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListFile {
    pub n: usize,
    pub edges: Vec<Edge>,
    pub weighted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimacsFile {
    pub n: usize,
    pub edges: Vec<Edge>,
    pub terminals: TerminalPair,
}

fn vertex_hint(comment: &str) -> Option<usize> {
    let mut words = comment.trim_start_matches(['#', '%']).split_whitespace();
    match (words.next(), words.next(), words.next()) {
        (Some("vertices"), Some(n), None) => n.parse().ok(),
        _ => None,
    }
}

fn parse_id(token: &str, line: usize) -> Result<usize> {
    token.parse().map_err(|_| parse_error(line, format!("expected a vertex id, found {token:?}")))
}

fn parse_capacity(token: &str, line: usize) -> Result<i64> {
    let w: i64 = token.parse().map_err(|_| parse_error(line, format!("expected an integer weight, found {token:?}")))?;
    if w < 0 {
        return Err(parse_error(line, format!("negative weight {w}")));
    }
    Ok(w)
}

pub fn parse_edge_list(text: &str) -> Result<EdgeListFile> {
    let mut edges = Vec::new();
    let mut arity = None;
    let mut n = 0;
    let mut hint = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.starts_with('#') || trimmed.starts_with('%') {
            hint = hint.or(vertex_hint(trimmed));
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 && tokens.len() != 3 {
            return Err(parse_error(line, format!("expected 2 or 3 fields, found {}", tokens.len())));
        }
        match arity {
            None => arity = Some(tokens.len()),
            Some(a) if a != tokens.len() => {
                return Err(parse_error(line, format!("{} fields after {a}-field lines", tokens.len())))
            }
            _ => {}
        }
        let u = parse_id(tokens[0], line)?;
        let v = parse_id(tokens[1], line)?;
        let w = match tokens.get(2) {
            Some(t) => parse_capacity(t, line)?,
            None => 1,
        };
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v, w));
    }
    if let Some(h) = hint {
        if h < n {
            return Err(BenchError::Format(format!("vertex count {h} below largest id {}", n - 1)));
        }
        n = h;
    }
    Ok(EdgeListFile { n, edges, weighted: arity == Some(3) })
}

pub fn parse_dimacs_max(text: &str) -> Result<DimacsFile> {
    let mut header: Option<(usize, usize)> = None;
    let mut source = None;
    let mut sink = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        let Some(&kind) = tokens.first() else {
            continue;
        };
        match kind {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(parse_error(line, "second problem line"));
                }
                match tokens[..] {
                    [_, "max", n, m] => header = Some((parse_id(n, line)?, parse_id(m, line)?)),
                    _ => return Err(parse_error(line, "expected \"p max <nodes> <arcs>\"")),
                }
            }
            "n" => {
                let (n, _) = header.ok_or_else(|| parse_error(line, "node line before problem line"))?;
                let [_, id, role] = tokens[..] else {
                    return Err(parse_error(line, "expected \"n <id> s|t\""));
                };
                let v = one_based(id, n, line)?;
                match role {
                    "s" => source = Some(v),
                    "t" => sink = Some(v),
                    other => return Err(parse_error(line, format!("unknown node designator {other:?}"))),
                }
            }
            "a" => {
                let (n, _) = header.ok_or_else(|| parse_error(line, "arc line before problem line"))?;
                let [_, u, v, cap] = tokens[..] else {
                    return Err(parse_error(line, "expected \"a <from> <to> <capacity>\""));
                };
                edges.push((one_based(u, n, line)?, one_based(v, n, line)?, parse_capacity(cap, line)?));
            }
            other => return Err(parse_error(line, format!("unknown line type {other:?}"))),
        }
    }
    let (n, m) = header.ok_or_else(|| BenchError::Format("missing problem line".into()))?;
    if edges.len() != m {
        return Err(BenchError::Format(format!("header announces {m} arcs, found {}", edges.len())));
    }
    let source = source.ok_or_else(|| BenchError::Format("no source".into()))?;
    let sink = sink.ok_or_else(|| BenchError::Format("no sink".into()))?;
    let terminals = TerminalPair::new(source, sink)?;
    Ok(DimacsFile { n, edges, terminals })
}

fn one_based(token: &str, n: usize, line: usize) -> Result<usize> {
    let id = parse_id(token, line)?;
    if id == 0 || id > n {
        return Err(parse_error(line, format!("node id {id} outside 1..={n}")));
    }
    Ok(id - 1)
}

/// Writes a `# vertices` header and one line per edge; capacities are
/// written only when `weighted` is set.
pub fn write_edge_list(mut w: impl Write, n: usize, edges: &[Edge], weighted: bool) -> std::io::Result<()> {
    writeln!(w, "# vertices {n}")?;
    for &(u, v, c) in edges {
        if weighted {
            writeln!(w, "{u} {v} {c}")?;
        } else {
            writeln!(w, "{u} {v}")?;
        }
    }
    Ok(())
}

pub fn write_dimacs(mut w: impl Write, n: usize, edges: &[Edge], terminals: TerminalPair) -> std::io::Result<()> {
    writeln!(w, "p max {n} {}", edges.len())?;
    writeln!(w, "n {} s", terminals.source + 1)?;
    writeln!(w, "n {} t", terminals.sink + 1)?;
    for &(u, v, c) in edges {
        writeln!(w, "a {} {} {c}", u + 1, v + 1)?;
    }
    Ok(())
}
