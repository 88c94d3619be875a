//! Text formats: edge lists, partitions and orientations.
//!
//! All three are line oriented. Blank lines are ignored and `#` starts a
//! comment that runs to the end of the line.
//!
//! * edge list: `u v` per line; a line holding a single label declares an
//!   isolated vertex. Labels are non-negative integers or identifiers.
//! * partition: `v c` with `c` in `1..=r`.
//! * orientation: `u v` meaning the arc `u -> v`.
//!
//! When every label is a non-negative integer, dense ids follow numeric order;
//! otherwise they follow order of first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphError, IntegralOrientation, Vertex, VertexPartition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: self-loop at `{label}`")]
    SelfLoop { line: usize, label: String },
    #[error("line {line}: unknown vertex `{label}`")]
    UnknownVertex { line: usize, label: String },
    #[error("vertex `{0}` has no class")]
    MissingClass(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A parsed edge list together with the number of duplicate edge lines.
#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub duplicates: usize,
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn valid_label(s: &str) -> bool {
    s.chars()
        .all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.' || c == ':')
}

pub fn parse_graph(text: &str) -> Result<ParsedGraph, FormatError> {
    let mut order: Vec<String> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut raw_edges: Vec<(usize, usize, usize)> = Vec::new();
    for (line, toks) in tokens(text) {
        if toks.len() > 2 {
            return Err(FormatError::Malformed {
                line,
                message: format!("expected `u v`, found {} fields", toks.len()),
            });
        }
        let mut ids = Vec::with_capacity(2);
        for t in &toks {
            if !valid_label(t) {
                return Err(FormatError::Malformed {
                    line,
                    message: format!("invalid vertex label `{t}`"),
                });
            }
            let id = *seen.entry(t.to_string()).or_insert_with(|| {
                order.push(t.to_string());
                order.len() - 1
            });
            ids.push(id);
        }
        if ids.len() == 2 {
            if ids[0] == ids[1] {
                return Err(FormatError::SelfLoop {
                    line,
                    label: toks[0].to_string(),
                });
            }
            raw_edges.push((line, ids[0], ids[1]));
        }
    }

    // Numeric labels are ordered numerically so that "0 1 / 1 2" keeps ids.
    let numeric: Option<Vec<u64>> = order.iter().map(|l| l.parse::<u64>().ok()).collect();
    let mut remap: Vec<usize> = (0..order.len()).collect();
    let mut labels = order.clone();
    if let Some(values) = numeric {
        let mut idx: Vec<usize> = (0..order.len()).collect();
        idx.sort_by_key(|&i| values[i]);
        labels = idx.iter().map(|&i| order[i].clone()).collect();
        for (new, &old) in idx.iter().enumerate() {
            remap[old] = new;
        }
    }
    let edges = raw_edges.into_iter().map(|(_, a, b)| (remap[a], remap[b]));
    let (graph, duplicates) = Graph::with_labels(labels, edges)?;
    Ok(ParsedGraph { graph, duplicates })
}

/// Writes `g` as an edge list. Isolated vertices get a line of their own so
/// that re-parsing reproduces the vertex set.
pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} vertices, {} edges", g.vertex_count(), g.edge_count());
    for v in g.vertices() {
        if g.degree(v) == 0 {
            let _ = writeln!(out, "{}", g.label(v));
        }
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", g.label(u), g.label(v));
    }
    out
}

fn label_index(g: &Graph) -> HashMap<&str, Vertex> {
    g.vertices().map(|v| (g.label(v), v)).collect()
}

fn lookup(index: &HashMap<&str, Vertex>, line: usize, label: &str) -> Result<Vertex, FormatError> {
    index.get(label).copied().ok_or_else(|| FormatError::UnknownVertex {
        line,
        label: label.to_string(),
    })
}

/// Parses `v c` lines. `r` is the largest class mentioned; the result must be
/// a proper coloring.
pub fn parse_partition(g: &Graph, text: &str) -> Result<VertexPartition, FormatError> {
    let index = label_index(g);
    let mut class_of = vec![0usize; g.vertex_count()];
    for (line, toks) in tokens(text) {
        if toks.len() != 2 {
            return Err(FormatError::Malformed {
                line,
                message: "expected `v c`".into(),
            });
        }
        let v = lookup(&index, line, toks[0])?;
        let c: usize = toks[1].parse().map_err(|_| FormatError::Malformed {
            line,
            message: format!("class `{}` is not a positive integer", toks[1]),
        })?;
        if c == 0 {
            return Err(FormatError::Malformed {
                line,
                message: "classes start at 1".into(),
            });
        }
        class_of[v] = c;
    }
    if let Some(v) = class_of.iter().position(|&c| c == 0) {
        return Err(FormatError::MissingClass(g.label(v).to_string()));
    }
    let r = class_of.iter().copied().max().unwrap_or(1).max(1);
    Ok(VertexPartition::new(g, class_of, r)?)
}

pub fn write_partition(g: &Graph, p: &VertexPartition) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} classes", p.r());
    for v in g.vertices() {
        let _ = writeln!(out, "{} {}", g.label(v), p.class_of(v));
    }
    out
}

pub fn parse_orientation(g: &Graph, text: &str) -> Result<IntegralOrientation, FormatError> {
    let index = label_index(g);
    let mut arcs = Vec::new();
    for (line, toks) in tokens(text) {
        if toks.len() != 2 {
            return Err(FormatError::Malformed {
                line,
                message: "expected `u v`".into(),
            });
        }
        arcs.push((lookup(&index, line, toks[0])?, lookup(&index, line, toks[1])?));
    }
    Ok(IntegralOrientation::from_arcs(g, arcs)?)
}

pub fn write_orientation(g: &Graph, o: &IntegralOrientation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# arcs u -> v, max outdegree {}", o.max_outdegree());
    for (u, v) in o.arcs(g) {
        let _ = writeln!(out, "{} {}", g.label(u), g.label(v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_on_three_vertices() {
        let p = parse_graph("0 1\n1 2").unwrap();
        assert_eq!(p.graph.vertex_count(), 3);
        assert_eq!(p.graph.edge_count(), 2);
        assert_eq!(p.duplicates, 0);
    }

    #[test]
    fn duplicate_line_warns() {
        let p = parse_graph("0 1\n0 1").unwrap();
        assert_eq!(p.graph.edge_count(), 1);
        assert_eq!(p.duplicates, 1);
        let p = parse_graph("0 1\n1 0").unwrap();
        assert_eq!(p.duplicates, 1);
    }

    #[test]
    fn self_loop_is_an_error() {
        assert!(matches!(parse_graph("0 0"), Err(FormatError::SelfLoop { line: 1, .. })));
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let err = parse_graph("# header\n0 1\n1 2 3\n").unwrap_err();
        assert!(matches!(err, FormatError::Malformed { line: 3, .. }));
        let err = parse_graph("0 1\na$ b\n").unwrap_err();
        assert!(matches!(err, FormatError::Malformed { line: 2, .. }));
    }

    #[test]
    fn numeric_labels_keep_their_order() {
        let p = parse_graph("10 2\n2 7 # trailing comment\n").unwrap();
        assert_eq!(p.graph.labels(), &["2", "7", "10"]);
        assert!(p.graph.has_edge(0, 2));
    }

    #[test]
    fn identifiers_follow_first_appearance() {
        let p = parse_graph("b a\nc b\nlonely").unwrap();
        assert_eq!(p.graph.labels(), &["b", "a", "c", "lonely"]);
        assert_eq!(p.graph.degree(3), 0);
    }

    #[test]
    fn partition_and_orientation_files() {
        let g = parse_graph("x y\ny z").unwrap().graph;
        let part = parse_partition(&g, "x 1\ny 2\nz 1\n").unwrap();
        assert_eq!(part.r(), 2);
        assert!(parse_partition(&g, "x 1\ny 1\nz 1\n").is_err());
        assert!(matches!(
            parse_partition(&g, "x 1\ny 2\n"),
            Err(FormatError::MissingClass(_))
        ));
        let o = parse_orientation(&g, "x y\nz y\n").unwrap();
        assert_eq!(o.outdegrees(), &[1, 0, 1]);
        assert_eq!(parse_orientation(&g, &write_orientation(&g, &o)).unwrap(), o);
        assert!(parse_orientation(&g, "x y\n").is_err());
        assert!(matches!(
            parse_orientation(&g, "x y\ny w\n"),
            Err(FormatError::UnknownVertex { line: 2, .. })
        ));
    }
}
