use std::collections::BTreeMap;

use super::Graph;
use crate::error::{Error, Result};

/// What the loader dropped while normalizing the input.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub self_loops: usize,
    pub duplicate_edges: usize,
    /// True when vertex ids had gaps and were renumbered densely.
    pub compacted: bool,
}

/// Parses a whitespace-separated edge list.
///
/// Blank lines and lines starting with `#` or `%` are skipped. Extra columns
/// (weights, timestamps) are ignored. For Matrix Market files the size line
/// following the `%%MatrixMarket` banner is skipped too. Vertex ids are
/// renumbered to `0..n` in increasing id order.
///
/// A comment of the form `# Nodes: N` (as written by [`write_edge_list`]
/// and SNAP) declares the vertex count; vertices beyond those named by
/// edges are added as isolated vertices.
pub fn load_edge_list(text: &str) -> Result<(Graph, LoadReport)> {
    let mut skip_size_line = false;
    let mut raw = Vec::new();
    let mut declared = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if idx == 0 && trimmed.starts_with("%%MatrixMarket") {
            skip_size_line = true;
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(n) = declared_nodes(comment) {
                declared = Some(n);
            }
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if skip_size_line {
            skip_size_line = false;
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut next_id = || -> Result<u64> {
            let tok = tokens.next().ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "expected two vertex ids".into(),
            })?;
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("invalid vertex id {tok:?}"),
            })
        };
        let u = next_id()?;
        let v = next_id()?;
        raw.push((u, v));
    }

    let mut ids = BTreeMap::new();
    for &(u, v) in &raw {
        ids.insert(u, 0usize);
        ids.insert(v, 0usize);
    }
    let named = ids.len();
    let compacted = ids.keys().next_back().is_some_and(|&max| max as usize + 1 != named);
    let n = match declared {
        Some(d) if d < named => {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header declares {d} nodes but edges name {named}"),
            })
        }
        Some(d) => d,
        None => named,
    };
    for (dense, slot) in ids.values_mut().enumerate() {
        *slot = dense;
    }

    let mut report = LoadReport {
        compacted,
        ..LoadReport::default()
    };
    let mut edges = Vec::with_capacity(raw.len());
    for (u, v) in raw {
        if u == v {
            report.self_loops += 1;
            continue;
        }
        let (a, b) = (ids[&u], ids[&v]);
        edges.push((a.min(b), a.max(b)));
    }
    let before = edges.len();
    edges.sort_unstable();
    edges.dedup();
    report.duplicate_edges = before - edges.len();
    let graph = Graph::from_edges(n, edges)?;
    Ok((graph, report))
}

fn declared_nodes(comment: &str) -> Option<usize> {
    let mut tokens = comment.split_whitespace();
    while let Some(t) = tokens.next() {
        if t.eq_ignore_ascii_case("nodes:") {
            return tokens.next()?.parse().ok();
        }
    }
    None
}

/// Renders `g` as an edge list with a `# Nodes: N Edges: M` header, one
/// `u v` pair per line with `u < v`.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("# Nodes: {} Edges: {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
