//! Plain-text edge/tuple lists.
//!
//! Byte format (exactly, so artifacts diff cleanly):
//! ```text
//! n=<int> k=<int>\n
//! <x1> <x2> ... <xk>\n      (one tuple per line, entries space separated,
//! ...                        lines sorted ascending lexicographically)
//! ```
//! No trailing whitespace, `\n` line endings, nothing after the last line.
//! For k=2 each line is an edge `i j` with `i < j`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::OrderedGraph;
use crate::tuple::{KTuple, KTupleSet};

pub fn tuple_set_to_text(set: &KTupleSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n={} k={}", set.n(), set.k());
    for t in set.iter() {
        let parts: Vec<String> = t.entries().iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", parts.join(" "));
    }
    out
}

pub fn graph_to_text(g: &OrderedGraph) -> String {
    tuple_set_to_text(&KTupleSet::from_ordered_graph(g))
}

pub fn tuple_set_from_text(text: &str) -> Result<KTupleSet> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty edge list".into()))?;
    let (n, k) = parse_header(header)?;
    let mut set = KTupleSet::empty(n, k)?;
    for (lineno, line) in lines.enumerate() {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let entries: Vec<u32> = line
            .split_whitespace()
            .map(|w| {
                w.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad label {w:?} on line {}", lineno + 2)))
            })
            .collect::<Result<_>>()?;
        if entries.len() != k {
            return Err(Error::Parse(format!(
                "line {} has {} entries, expected k={k}",
                lineno + 2,
                entries.len()
            )));
        }
        set.insert(KTuple::new(entries)?)?;
    }
    Ok(set)
}

pub fn graph_from_text(text: &str) -> Result<OrderedGraph> {
    let set = tuple_set_from_text(text)?;
    set.to_ordered_graph()
}

fn parse_header(header: &str) -> Result<(u32, usize)> {
    let mut n = None;
    let mut k = None;
    for field in header.split_whitespace() {
        if let Some(v) = field.strip_prefix("n=") {
            n = Some(
                v.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad n in header {header:?}")))?,
            );
        } else if let Some(v) = field.strip_prefix("k=") {
            k = Some(
                v.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad k in header {header:?}")))?,
            );
        } else {
            return Err(Error::Parse(format!(
                "unexpected header field {field:?} (want n=<int> k=<int>)"
            )));
        }
    }
    match (n, k) {
        (Some(n), Some(k)) => Ok((n, k)),
        _ => Err(Error::Parse(format!(
            "header {header:?} must contain n=<int> and k=<int>"
        ))),
    }
}

pub fn write_tuple_set(path: &Path, set: &KTupleSet) -> Result<()> {
    std::fs::write(path, tuple_set_to_text(set))?;
    Ok(())
}

pub fn read_tuple_set(path: &Path) -> Result<KTupleSet> {
    let text = std::fs::read_to_string(path)?;
    tuple_set_from_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_bytes_for_small_graph() {
        let g = OrderedGraph::with_edges(4, [(1, 3), (1, 4), (2, 3), (2, 4)]).unwrap();
        assert_eq!(graph_to_text(&g), "n=4 k=2\n1 3\n1 4\n2 3\n2 4\n");
    }

    #[test]
    fn round_trip() {
        let g = OrderedGraph::with_edges(6, [(1, 2), (3, 5), (2, 6)]).unwrap();
        let back = graph_from_text(&graph_to_text(&g)).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(graph_from_text("").is_err());
        assert!(graph_from_text("n=4\n1 2\n").is_err());
        assert!(graph_from_text("n=4 k=2\n1\n").is_err());
        assert!(graph_from_text("n=4 k=2\n2 1\n").is_err());
        assert!(graph_from_text("n=4 k=2\n1 9\n").is_err());
        assert!(graph_from_text("m=4 k=2\n").is_err());
    }

    #[test]
    fn tuple_round_trip_k3() {
        let set = KTupleSet::from_tuples(
            5,
            3,
            [
                KTuple::new(vec![1, 2, 3]).unwrap(),
                KTuple::new(vec![2, 3, 5]).unwrap(),
            ],
        )
        .unwrap();
        let text = tuple_set_to_text(&set);
        assert_eq!(text, "n=5 k=3\n1 2 3\n2 3 5\n");
        assert_eq!(tuple_set_from_text(&text).unwrap(), set);
    }
}
