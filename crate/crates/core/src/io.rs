//! Plain-text interchange for hypergraphs, graphs and triangle lists.
//!
//! One record per line as whitespace-separated labels (three for a triple,
//! two for a graph edge). Lines starting with `#` are comments, except a
//! `#vertices: a b c ...` header which declares vertices up front so that
//! isolated vertices survive a round trip. Labels are mapped to dense ids in
//! order of first appearance, header first.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::complex::TwoComplex;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph3, SkeletonGraph, Vertex};

const VERTICES_HEADER: &str = "#vertices:";

/// Bijection between external labels and dense vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Labels {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
}

impl Labels {
    /// Labels `"0"`, `"1"`, ... for a generated instance.
    pub fn numeric(n: usize) -> Self {
        let mut labels = Self::default();
        for v in 0..n {
            labels.intern(&v.to_string());
        }
        labels
    }

    fn intern(&mut self, name: &str) -> Vertex {
        if let Some(&v) = self.index.get(name) {
            return v;
        }
        let v = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), v);
        v
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn id(&self, name: &str) -> Option<Vertex> {
        self.index.get(name).copied()
    }

    /// Resolves a label, reporting unknown labels as a parse error.
    pub fn require(&self, name: &str) -> Result<Vertex> {
        self.id(name).ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("unknown vertex label {name:?}"),
        })
    }
}

fn parse_records(text: &str, arity: usize) -> Result<(Vec<(usize, Vec<Vertex>)>, Labels)> {
    let mut labels = Labels::default();
    let mut records = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(VERTICES_HEADER) {
            for name in rest.split_whitespace() {
                labels.intern(name);
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != arity {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected {arity} labels, found {}", tokens.len()),
            });
        }
        let ids = tokens.iter().map(|t| labels.intern(t)).collect();
        records.push((i + 1, ids));
    }
    Ok((records, labels))
}

fn located<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::Parse {
            line,
            message: other.to_string(),
        },
    })
}

/// Parses the `.h3` hypergraph format.
pub fn parse_h3(text: &str) -> Result<(Hypergraph3, Labels)> {
    let (records, labels) = parse_records(text, 3)?;
    // Validate record by record so errors carry a line number.
    let mut seen = std::collections::HashSet::new();
    for (line, r) in &records {
        let mut s = [r[0], r[1], r[2]];
        s.sort_unstable();
        if s[0] == s[1] || s[1] == s[2] {
            return Err(Error::Parse {
                line: *line,
                message: "triple repeats a vertex".into(),
            });
        }
        if !seen.insert(s) {
            return Err(Error::Parse {
                line: *line,
                message: "duplicate triple".into(),
            });
        }
    }
    let h = located(
        0,
        Hypergraph3::new(
            labels.len(),
            records.iter().map(|(_, r)| [r[0], r[1], r[2]]),
        ),
    )?;
    Ok((h, labels))
}

/// Serializes in `.h3` format. The header lists every vertex in id order, so
/// parsing the output reproduces the same ids.
pub fn write_h3(h: &Hypergraph3, labels: &Labels) -> String {
    let mut out = String::new();
    write_header(&mut out, labels, h.num_vertices());
    for &[a, b, c] in h.edges() {
        let _ = writeln!(
            out,
            "{} {} {}",
            labels.name(a),
            labels.name(b),
            labels.name(c)
        );
    }
    out
}

fn write_header(out: &mut String, labels: &Labels, n: usize) {
    out.push_str(VERTICES_HEADER);
    for v in 0..n {
        out.push(' ');
        out.push_str(labels.name(v));
    }
    out.push('\n');
}

/// Parses a graph as an edge list (two labels per line).
pub fn parse_edge_list(text: &str) -> Result<(SkeletonGraph, Labels)> {
    let (records, labels) = parse_records(text, 2)?;
    let mut seen = std::collections::HashSet::new();
    for (line, r) in &records {
        if r[0] == r[1] {
            return Err(Error::Parse {
                line: *line,
                message: "loop edge".into(),
            });
        }
        if !seen.insert((r[0].min(r[1]), r[0].max(r[1]))) {
            return Err(Error::Parse {
                line: *line,
                message: "duplicate edge".into(),
            });
        }
    }
    let g = located(
        0,
        SkeletonGraph::new(labels.len(), records.iter().map(|(_, r)| (r[0], r[1]))),
    )?;
    Ok((g, labels))
}

pub fn write_edge_list(g: &SkeletonGraph, labels: &Labels) -> String {
    let mut out = String::new();
    out.push_str(VERTICES_HEADER);
    for v in g.vertices() {
        out.push(' ');
        out.push_str(labels.name(v));
    }
    out.push('\n');
    for (a, b) in g.edges() {
        let _ = writeln!(out, "{} {}", labels.name(a), labels.name(b));
    }
    out
}

/// Parses a triangle list into a complex over the labels it mentions.
pub fn parse_complex(text: &str) -> Result<(TwoComplex, Labels)> {
    let (h, labels) = parse_h3(text)?;
    Ok((TwoComplex::new(h.edges().iter().copied()), labels))
}

pub fn write_complex(x: &TwoComplex, labels: &Labels) -> String {
    let mut out = String::new();
    for &[a, b, c] in x.triangles() {
        let _ = writeln!(
            out,
            "{} {} {}",
            labels.name(a),
            labels.name(b),
            labels.name(c)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_isolated_vertices() {
        let text = "# a comment\n#vertices: z\nx y w\n\nw y q\n";
        let (h, labels) = parse_h3(text).unwrap();
        assert_eq!(h.num_vertices(), 5);
        assert_eq!(h.num_edges(), 2);
        assert_eq!(labels.id("z"), Some(0));
        assert_eq!(h.degree(0), 0);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_h3("a b c\na b\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_h3("a b c\nc b a\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_h3("a a c\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn round_trip_preserves_ids() {
        let text = "#vertices: iso\np q r\nq r s\n";
        let (h, labels) = parse_h3(text).unwrap();
        let (h2, labels2) = parse_h3(&write_h3(&h, &labels)).unwrap();
        assert_eq!(h, h2);
        assert_eq!(labels, labels2);
    }

    #[test]
    fn edge_list_round_trip() {
        let (g, labels) = parse_edge_list("a b\nb c\n#vertices: d\n").unwrap();
        assert_eq!(g.num_vertices(), 4);
        let (g2, labels2) = parse_edge_list(&write_edge_list(&g, &labels)).unwrap();
        assert_eq!(g.edges().count(), g2.edges().count());
        assert_eq!(labels.len(), labels2.len());
        assert!(parse_edge_list("a a\n").is_err());
    }
}
