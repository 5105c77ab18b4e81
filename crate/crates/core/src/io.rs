//! Edge-list and vertex-weight text formats.
//!
//! Edge list: a header `n m`, then `m` lines `u v w` with 1-based endpoints
//! and a positive integer weight. Weights file: `n` positive integers, one
//! per line. Blank lines and `#` comments are ignored in both.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Edge, WeightedGraph};

/// Content lines with their 1-based line numbers, comments stripped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_field<T: std::str::FromStr>(line: usize, field: &str, what: &str) -> Result<T> {
    field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("{what} {field:?} is not a nonnegative integer"),
    })
}

/// Parses an edge list into `(n, edges)` with 0-based endpoints.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<Edge>)> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing \"n m\" header".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse {
            line: hline,
            message: format!("header must be \"n m\", found {header:?}"),
        });
    }
    let n: usize = parse_field(hline, fields[0], "vertex count")?;
    let m: usize = parse_field(hline, fields[1], "edge count")?;

    let mut edges = Vec::with_capacity(m);
    let mut last = hline;
    for (line, content) in lines {
        last = line;
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected \"u v w\", found {content:?}"),
            });
        }
        let u: usize = parse_field(line, fields[0], "endpoint")?;
        let v: usize = parse_field(line, fields[1], "endpoint")?;
        let w: u64 = parse_field(line, fields[2], "weight")?;
        for x in [u, v] {
            if x == 0 || x > n {
                return Err(Error::Parse {
                    line,
                    message: format!("endpoint {x} outside 1..={n}"),
                });
            }
        }
        if u == v {
            return Err(Error::Parse {
                line,
                message: format!("self-loop at vertex {u}"),
            });
        }
        if w == 0 {
            return Err(Error::Parse {
                line,
                message: "edge weight must be at least 1".into(),
            });
        }
        edges.push(Edge::new(u - 1, v - 1, w));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: last,
            message: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Ok((n, edges))
}

/// Parses `n` positive vertex weights.
pub fn parse_weights(text: &str, n: usize) -> Result<Vec<u64>> {
    let mut b = Vec::with_capacity(n);
    let mut last = 1;
    for (line, content) in content_lines(text) {
        last = line;
        let w: u64 = parse_field(line, content, "vertex weight")?;
        if w == 0 {
            return Err(Error::Parse {
                line,
                message: "vertex weight must be at least 1".into(),
            });
        }
        b.push(w);
    }
    if b.len() != n {
        return Err(Error::Parse {
            line: last,
            message: format!("expected {n} vertex weights, found {}", b.len()),
        });
    }
    Ok(b)
}

/// Builds a graph from edge-list text and optional weights text; without
/// weights, `b = deg` with isolated vertices at weight 1.
pub fn graph_from_text(edges: &str, weights: Option<&str>) -> Result<WeightedGraph> {
    let (n, edges) = parse_edge_list(edges)?;
    match weights {
        Some(text) => WeightedGraph::new(n, edges, parse_weights(text, n)?),
        None => WeightedGraph::with_default_weights(n, edges),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_graph(path: &Path, weights: Option<&Path>) -> Result<WeightedGraph> {
    let edges = read(path)?;
    let weights = weights.map(read).transpose()?;
    graph_from_text(&edges, weights.as_deref())
}

/// Renders the edge-list format with 1-based endpoints.
pub fn write_edge_list(n: usize, edges: &[Edge]) -> String {
    let mut out = format!("{n} {}\n", edges.len());
    for e in edges {
        let _ = writeln!(out, "{} {} {}", e.u + 1, e.v + 1, e.w);
    }
    out
}

pub fn write_weights(b: &[u64]) -> String {
    b.iter().map(|w| format!("{w}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_with_comments_and_blanks() {
        let text = "# triangle\n3 3\n\n1 2 1\n2 3 1 # heavy? no\n3 1 1\n";
        let (n, edges) = parse_edge_list(text).unwrap();
        assert_eq!(n, 3);
        assert_eq!(
            edges,
            vec![Edge::new(0, 1, 1), Edge::new(1, 2, 1), Edge::new(2, 0, 1)]
        );
        let g = graph_from_text(text, None).unwrap();
        assert_eq!(g.b(), &[2, 2, 2]);
    }

    #[test]
    fn rejects_bad_input() {
        let cases = [
            ("", 1),
            ("3\n", 1),
            ("2 1\n1 3 1\n", 2),
            ("2 1\n1 1 1\n", 2),
            ("2 1\n1 2 0\n", 2),
            ("2 1\n1 2\n", 2),
            ("2 2\n1 2 1\n", 2),
            ("2 1\n1 x 1\n", 2),
        ];
        for (text, line) in cases {
            match parse_edge_list(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn weights_file() {
        assert_eq!(parse_weights("3\n# c\n1\n2\n", 3).unwrap(), vec![3, 1, 2]);
        assert!(parse_weights("1\n0\n", 2).is_err());
        assert!(parse_weights("1\n", 2).is_err());
        let g = graph_from_text("2 1\n1 2 4\n", Some("5\n6\n")).unwrap();
        assert_eq!(g.b(), &[5, 6]);
    }

    #[test]
    fn isolated_vertices_default_to_one() {
        let g = graph_from_text("3 1\n1 2 3\n", None).unwrap();
        assert_eq!(g.b(), &[3, 3, 1]);
    }

    proptest! {
        #[test]
        fn round_trip(n in 2usize..10, raw in proptest::collection::vec((0usize..10, 0usize..10, 1u64..100), 0..20)) {
            let edges: Vec<Edge> = raw
                .into_iter()
                .filter(|&(u, v, _)| u < n && v < n && u != v)
                .map(|(u, v, w)| Edge::new(u, v, w))
                .collect();
            let text = write_edge_list(n, &edges);
            let (n2, back) = parse_edge_list(&text).unwrap();
            prop_assert_eq!(n2, n);
            prop_assert_eq!(back, edges);
        }
    }
}
