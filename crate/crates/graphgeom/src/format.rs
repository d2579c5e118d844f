//! Graph file formats.
//!
//! Edge-list text: the first non-comment line holds the node count `N`, every
//! following line is `i j w` (0-based indices, decimal weight), whitespace
//! separated. Lines starting with `#` and blank lines are ignored.
//!
//! JSON mirror: `{"nodes": N, "edges": [[i, j, w], ...]}`, selected when the
//! file name ends in `.json`.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use graphgeom_core::graph::{GraphBuilder, GraphError};
use graphgeom_core::WeightedGraph;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// 1-based line in an edge-list file.
    Line(usize),
    /// 0-based entry of the JSON `edges` array.
    JsonEdge(usize),
    Document,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(n) => write!(f, "line {n}"),
            Location::JsonEdge(k) => write!(f, "edges[{k}]"),
            Location::Document => f.write_str("document"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("missing node count")]
    MissingNodeCount,
    #[error("invalid node count {0:?}")]
    InvalidNodeCount(String),
    #[error("expected `i j w`, found {0} fields")]
    FieldCount(usize),
    #[error("invalid node index {0:?}")]
    InvalidIndex(String),
    #[error("non-numeric weight {0:?}")]
    NonNumericWeight(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("malformed JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{location}: {kind}")]
pub struct ParseError {
    pub location: Location,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn at(location: Location, kind: impl Into<ParseErrorKind>) -> Self {
        Self {
            location,
            kind: kind.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(ParseError::at(
        Location::Document,
        ParseErrorKind::MissingNodeCount,
    ))?;
    let loc = Location::Line(header_line);
    let mut fields = header.split_whitespace();
    let count = fields.next().unwrap_or_default();
    if fields.next().is_some() {
        return Err(ParseError::at(
            loc,
            ParseErrorKind::InvalidNodeCount(header.into()),
        ));
    }
    let node_count: usize = count
        .parse()
        .map_err(|_| ParseError::at(loc, ParseErrorKind::InvalidNodeCount(count.into())))?;
    let mut builder = GraphBuilder::new(node_count).map_err(|e| ParseError::at(loc, e))?;

    for (line_no, line) in lines {
        let loc = Location::Line(line_no);
        let fields: Vec<&str> = line.split_whitespace().collect();
        let &[i, j, w] = fields.as_slice() else {
            return Err(ParseError::at(
                loc,
                ParseErrorKind::FieldCount(fields.len()),
            ));
        };
        let index = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| ParseError::at(loc, ParseErrorKind::InvalidIndex(s.into())))
        };
        let (i, j) = (index(i)?, index(j)?);
        let weight: f64 = w
            .parse()
            .map_err(|_| ParseError::at(loc, ParseErrorKind::NonNumericWeight(w.into())))?;
        builder
            .add_edge(i, j, weight)
            .map_err(|e| ParseError::at(loc, e))?;
    }
    Ok(builder.build())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGraph {
    nodes: usize,
    edges: Vec<(usize, usize, f64)>,
}

pub fn parse_graph_json(text: &str) -> Result<WeightedGraph, ParseError> {
    let doc: JsonGraph = serde_json::from_str(text).map_err(|e| {
        let loc = if e.line() > 0 {
            Location::Line(e.line())
        } else {
            Location::Document
        };
        ParseError::at(loc, ParseErrorKind::Json(e.to_string()))
    })?;
    let mut builder =
        GraphBuilder::new(doc.nodes).map_err(|e| ParseError::at(Location::Document, e))?;
    for (k, (i, j, w)) in doc.edges.into_iter().enumerate() {
        builder
            .add_edge(i, j, w)
            .map_err(|e| ParseError::at(Location::JsonEdge(k), e))?;
    }
    Ok(builder.build())
}

/// Read a graph file, choosing the JSON mirror for `.json` names.
pub fn load_graph(path: &Path) -> Result<WeightedGraph, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_owned(),
        source,
    })?;
    let is_json = path
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("json"));
    let parsed = if is_json {
        parse_graph_json(&text)
    } else {
        parse_graph(&text)
    };
    parsed.map_err(|source| LoadError::Parse {
        path: path.to_owned(),
        source,
    })
}

/// Edge-list rendering accepted by [`parse_graph`].
pub fn write_edge_list(g: &WeightedGraph) -> String {
    let mut out = format!("{}\n", g.node_count());
    for e in g.edges() {
        out.push_str(&format!("{} {} {:?}\n", e.i, e.j, e.weight));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(text: &str) -> (Location, ParseErrorKind) {
        let e = parse_graph(text).unwrap_err();
        (e.location, e.kind)
    }

    #[test]
    fn chain_document() {
        let g = parse_graph("3\n0 1 1.0\n1 2 2.0").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.weight(0, 1), 1.0);
        assert_eq!(g.weight(2, 1), 2.0);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_graph("# chain\n\n3\n  # edge list\n0 1 1.0\n\n1 2 -2.5e0\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.weight(1, 2), -2.5);
    }

    #[test]
    fn single_node() {
        let g = parse_graph("1\n").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (1, 0));
    }

    #[test]
    fn each_error_names_its_line() {
        assert_eq!(
            kind("2\n0 0 1.0"),
            (
                Location::Line(2),
                ParseErrorKind::Graph(GraphError::SelfLoop { node: 0 })
            )
        );
        assert_eq!(
            kind("3\n0 1 1\n1 0 2"),
            (
                Location::Line(3),
                ParseErrorKind::Graph(GraphError::DuplicateEdge { i: 1, j: 0 })
            )
        );
        assert_eq!(
            kind("2\n0 2 1"),
            (
                Location::Line(2),
                ParseErrorKind::Graph(GraphError::IndexOutOfRange {
                    node: 2,
                    node_count: 2
                })
            )
        );
        assert_eq!(
            kind("2\n0 1 abc"),
            (
                Location::Line(2),
                ParseErrorKind::NonNumericWeight("abc".into())
            )
        );
        assert_eq!(
            kind("2\n0 1 0.0"),
            (
                Location::Line(2),
                ParseErrorKind::Graph(GraphError::ZeroWeight { i: 0, j: 1 })
            )
        );
        assert_eq!(
            kind("2\n0 1"),
            (Location::Line(2), ParseErrorKind::FieldCount(2))
        );
        assert_eq!(
            kind("2\n0 -1 1"),
            (Location::Line(2), ParseErrorKind::InvalidIndex("-1".into()))
        );
        assert_eq!(
            kind("# nothing\n"),
            (Location::Document, ParseErrorKind::MissingNodeCount)
        );
        assert_eq!(
            kind("x\n"),
            (
                Location::Line(1),
                ParseErrorKind::InvalidNodeCount("x".into())
            )
        );
        assert_eq!(
            kind("0\n"),
            (
                Location::Line(1),
                ParseErrorKind::Graph(GraphError::NoNodes)
            )
        );
        assert_eq!(
            kind("2\n0 1 inf"),
            (
                Location::Line(2),
                ParseErrorKind::Graph(GraphError::NonFiniteWeight { i: 0, j: 1 })
            )
        );
    }

    #[test]
    fn json_mirror() {
        let g = parse_graph_json(r#"{"nodes": 3, "edges": [[0, 1, 1.0], [1, 2, 2]]}"#).unwrap();
        assert_eq!(g, parse_graph("3\n0 1 1.0\n1 2 2.0").unwrap());
        let e =
            parse_graph_json(r#"{"nodes": 2, "edges": [[0, 1, 1.0], [0, 0, 1.0]]}"#).unwrap_err();
        assert_eq!(e.location, Location::JsonEdge(1));
        let e = parse_graph_json("{\"nodes\": 2,\n \"edges\": [[0, 1, \"x\"]]}").unwrap_err();
        assert_eq!(e.location, Location::Line(2));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = parse_graph("4\n0 1 0.1\n2 3 -1.75\n1 3 3.0000000000000004").unwrap();
        assert_eq!(parse_graph(&write_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn load_chooses_format_by_extension() {
        let dir = tempfile::tempdir().unwrap();
        let txt = dir.path().join("g.txt");
        let json = dir.path().join("g.JSON");
        fs::write(&txt, "2\n0 1 1.5\n").unwrap();
        fs::write(&json, r#"{"nodes": 2, "edges": [[0, 1, 1.5]]}"#).unwrap();
        assert_eq!(load_graph(&txt).unwrap(), load_graph(&json).unwrap());
        assert!(matches!(
            load_graph(&dir.path().join("missing")),
            Err(LoadError::Io { .. })
        ));
    }
}
