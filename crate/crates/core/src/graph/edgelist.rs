//! Plain-text edge lists.
//!
//! ```text
//! # optional comments
//! n 4
//! 0 1
//! 1 2
//! ```
//!
//! The writer emits the canonical form: the `n` line, then each edge once as
//! `u v` with `u < v`, in lexicographic order. Canonical text round-trips
//! byte for byte.

use std::fmt::Write as _;

use super::{Graph, VertexId};
use crate::error::{Error, Result};

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |what: &str| Error::Input(format!("line {}: {what}: {raw:?}", lineno + 1));
        match n {
            None => match fields.as_slice() {
                ["n", count] => {
                    n = Some(count.parse::<usize>().map_err(|_| bad("bad vertex count"))?);
                }
                _ => return Err(bad("expected header 'n <count>'")),
            },
            Some(_) => match fields.as_slice() {
                [u, v] => {
                    let u: VertexId = u.parse().map_err(|_| bad("bad vertex id"))?;
                    let v: VertexId = v.parse().map_err(|_| bad("bad vertex id"))?;
                    edges.push((u, v));
                }
                _ => return Err(bad("expected 'u v'")),
            },
        }
    }
    let n = n.ok_or_else(|| Error::Input("missing header 'n <count>'".into()))?;
    Graph::from_edge_list(n, &edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "n {}", g.n()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::petersen;

    #[test]
    fn parses_comments_and_header() {
        let g = parse_edge_list("# demo\nn 3\n0 1\n# mid\n2 1\n").unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_edge_list("0 1\n").is_err());
        assert!(parse_edge_list("n 2\n0 2\n").is_err());
        assert!(parse_edge_list("n 2\n0\n").is_err());
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("n x\n").is_err());
    }

    #[test]
    fn canonical_text_round_trips() {
        let text = write_edge_list(&petersen());
        let again = write_edge_list(&parse_edge_list(&text).unwrap());
        assert_eq!(text, again);
        assert_eq!(parse_edge_list(&text).unwrap(), petersen());
        assert_eq!(write_edge_list(&Graph::from_edge_list(0, &[]).unwrap()), "n 0\n");
    }
}
