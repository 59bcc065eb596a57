//! Line-based text format for graphs and maps.
//!
//! ```text
//! # comment
//! graph theta
//! vertices 2
//! edge 0 0 1 1/3
//! edge 1 0 1 1/3
//! edge 2 0 1 1/3
//! rotation 0: 0.0 1.0 2.0
//! rotation 1: 0.1 2.1 1.1
//! twisted 4 7
//! ```
//!
//! `rotation` lines list the darts at a vertex in counterclockwise order; a
//! dart `<id>.0` sits at the edge's first endpoint and `<id>.1` at its second.
//! `twisted` marks edges whose two ends see opposite local orientations, which
//! is how non-orientable maps are written. Plain graphs omit both.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, ParseErrorKind, Result};
use crate::graph::{Edge, EdgeId, MetricGraph};
use crate::rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DartRef {
    pub edge: EdgeId,
    pub end: u8,
}

impl std::fmt::Display for DartRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.edge.0, self.end)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: MetricGraph,
    pub rotations: BTreeMap<usize, Vec<DartRef>>,
    pub twisted: BTreeSet<EdgeId>,
}

fn malformed(line: usize, kind: ParseErrorKind) -> Error {
    Error::Malformed { line, kind }
}

fn parse_usize(tok: Option<&str>, line: usize, what: &'static str) -> Result<usize> {
    let tok = tok.ok_or_else(|| malformed(line, ParseErrorKind::MissingField(what)))?;
    tok.parse()
        .map_err(|_| malformed(line, ParseErrorKind::BadInteger(tok.to_string())))
}

fn parse_dart(tok: &str, line: usize) -> Result<DartRef> {
    let bad = || malformed(line, ParseErrorKind::BadDart(tok.to_string()));
    let (e, end) = tok.split_once('.').ok_or_else(bad)?;
    let edge = EdgeId(e.parse().map_err(|_| bad())?);
    let end = match end {
        "0" => 0,
        "1" => 1,
        _ => return Err(bad()),
    };
    Ok(DartRef { edge, end })
}

/// Parses a graph or map file, keeping any rotation data.
pub fn parse_graph_file(text: &str) -> Result<GraphFile> {
    let mut name: Option<String> = None;
    let mut vertices: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut rotations = BTreeMap::new();
    let mut twisted = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (head, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        let rest = rest.trim();
        match head {
            "graph" => {
                if name.is_some() {
                    return Err(malformed(line, ParseErrorKind::DuplicateHeader("graph")));
                }
                if rest.is_empty() {
                    return Err(malformed(line, ParseErrorKind::MissingField("graph name")));
                }
                name = Some(rest.to_string());
            }
            "vertices" => {
                if vertices.is_some() {
                    return Err(malformed(line, ParseErrorKind::DuplicateHeader("vertices")));
                }
                let mut toks = rest.split_whitespace();
                let n = parse_usize(toks.next(), line, "vertex count")?;
                if n == 0 {
                    return Err(malformed(line, ParseErrorKind::BadInteger("0".into())));
                }
                vertices = Some((n, line));
            }
            "edge" => {
                let mut toks = rest.split_whitespace();
                let id = parse_usize(toks.next(), line, "edge id")?;
                let id = EdgeId(u32::try_from(id).map_err(|_| {
                    malformed(line, ParseErrorKind::BadInteger(id.to_string()))
                })?);
                let u = parse_usize(toks.next(), line, "endpoint u")?;
                let v = parse_usize(toks.next(), line, "endpoint v")?;
                let len_tok = toks
                    .next()
                    .ok_or_else(|| malformed(line, ParseErrorKind::MissingField("length")))?;
                let length = rational::parse(len_tok)
                    .ok_or_else(|| malformed(line, ParseErrorKind::BadRational(len_tok.into())))?;
                if let Some(extra) = toks.next() {
                    return Err(malformed(line, ParseErrorKind::UnknownDirective(extra.into())));
                }
                if !rational::is_positive(&length) {
                    return Err(Error::NonPositiveLength(id));
                }
                edges.push((line, Edge { id, u, v, length }));
            }
            "rotation" => {
                let (vtok, darts) = rest
                    .split_once(':')
                    .ok_or_else(|| malformed(line, ParseErrorKind::MissingField("`:`")))?;
                let v = parse_usize(Some(vtok.trim()), line, "vertex")?;
                let darts = darts
                    .split_whitespace()
                    .map(|t| parse_dart(t, line))
                    .collect::<Result<Vec<_>>>()?;
                if rotations.insert(v, darts).is_some() {
                    return Err(malformed(line, ParseErrorKind::DuplicateHeader("rotation")));
                }
            }
            "twisted" => {
                for tok in rest.split_whitespace() {
                    let id = parse_usize(Some(tok), line, "edge id")?;
                    twisted.insert(EdgeId(id as u32));
                }
            }
            other => {
                return Err(malformed(line, ParseErrorKind::UnknownDirective(other.into())));
            }
        }
    }

    let name = name.ok_or_else(|| malformed(0, ParseErrorKind::MissingHeader("graph")))?;
    let (n, _) = vertices.ok_or_else(|| malformed(0, ParseErrorKind::MissingHeader("vertices")))?;
    for (line, e) in &edges {
        if e.u >= n || e.v >= n {
            return Err(malformed(
                *line,
                ParseErrorKind::VertexOutOfRange(e.u.max(e.v)),
            ));
        }
    }
    let mut seen = BTreeSet::new();
    for (_, e) in &edges {
        if !seen.insert(e.id) {
            return Err(Error::DuplicateEdgeId(e.id));
        }
    }
    let graph = MetricGraph::new(name, n, edges.into_iter().map(|(_, e)| e).collect())?;
    for &v in rotations.keys() {
        if v >= n {
            return Err(malformed(0, ParseErrorKind::VertexOutOfRange(v)));
        }
    }
    Ok(GraphFile {
        graph,
        rotations,
        twisted,
    })
}

/// Parses a graph file; rotation data, if present, is checked for syntax only.
pub fn parse_graph(text: &str) -> Result<MetricGraph> {
    parse_graph_file(text).map(|f| f.graph)
}

pub fn serialize_graph(g: &MetricGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {}", g.name());
    let _ = writeln!(out, "vertices {}", g.vertex_count());
    for e in g.edges() {
        let _ = writeln!(
            out,
            "edge {} {} {} {}",
            e.id.0,
            e.u,
            e.v,
            rational::format(&e.length)
        );
    }
    out
}

pub fn serialize_graph_file(f: &GraphFile) -> String {
    let mut out = serialize_graph(&f.graph);
    for (v, darts) in &f.rotations {
        let list: Vec<String> = darts.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "rotation {}: {}", v, list.join(" "));
    }
    if !f.twisted.is_empty() {
        let list: Vec<String> = f.twisted.iter().map(|e| e.0.to_string()).collect();
        let _ = writeln!(out, "twisted {}", list.join(" "));
    }
    out
}
