//! Whitespace-separated `u v` site pairs, one edge per line.

use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Parses an edge list. `#` starts a comment; blank lines are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected two site indices, found {} fields", fields.len()),
            });
        }
        let site = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("'{s}' is not a site index"),
            })
        };
        pairs.push((site(fields[0])?, site(fields[1])?));
    }
    Graph::from_edge_list(pairs)
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn format_edge_list(g: &Graph) -> String {
    g.edges().iter().map(|(u, v)| format!("{u} {v}\n")).collect()
}
