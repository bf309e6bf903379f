//! Edge-list text format: a header line `n m`, then m lines `u v` with
//! 0 <= u < v < n, ASCII, whitespace-separated. Parse errors carry the line
//! and column of the offending token; writes are atomic (temp + rename).

use crate::error::{Error, Result};
use crate::graph::Graph;
use std::path::Path as FsPath;

fn parse_err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        column,
        message: message.into(),
    })
}

fn split_tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_usize(lineno: usize, col: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::Parse {
            line: lineno,
            column: col,
            message: format!("expected {what}, found `{tok}`"),
        })
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate();
    let (header_idx, header) = loop {
        match lines.next() {
            Some((i, l)) if split_tokens(l).is_empty() => {
                let _ = i;
                continue;
            }
            Some((i, l)) => break (i, l),
            None => return parse_err(1, 1, "missing header line `n m`"),
        }
    };
    let toks = split_tokens(header);
    if toks.len() != 2 {
        return parse_err(
            header_idx + 1,
            1,
            format!("header must be `n m`, found {} tokens", toks.len()),
        );
    }
    let n = parse_usize(header_idx + 1, toks[0].0, toks[0].1, "vertex count")?;
    let m = parse_usize(header_idx + 1, toks[1].0, toks[1].1, "edge count")?;

    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let toks = split_tokens(line);
        if toks.is_empty() {
            continue;
        }
        if edges.len() == m {
            return parse_err(lineno, toks[0].0, format!("more than {m} edge lines"));
        }
        if toks.len() != 2 {
            return parse_err(lineno, 1, format!("edge line needs 2 tokens, found {}", toks.len()));
        }
        let u = parse_usize(lineno, toks[0].0, toks[0].1, "vertex label")?;
        let v = parse_usize(lineno, toks[1].0, toks[1].1, "vertex label")?;
        if u == v {
            return parse_err(lineno, toks[0].0, format!("self-loop at vertex {u}"));
        }
        if u > v {
            return parse_err(lineno, toks[0].0, format!("edge {u} {v} must satisfy u < v"));
        }
        if v >= n {
            return parse_err(lineno, toks[1].0, format!("vertex {v} out of range for n={n}"));
        }
        if !seen.insert((u, v)) {
            return parse_err(lineno, toks[0].0, format!("duplicate edge {u} {v}"));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return parse_err(
            0,
            0,
            format!("header promised {m} edges, found {}", edges.len()),
        );
    }
    Graph::new(n, &edges)
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn read_graph(path: impl AsRef<FsPath>) -> Result<Graph> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_graph(&text)
}

pub fn write_graph(g: &Graph, path: impl AsRef<FsPath>) -> Result<()> {
    write_atomic(path, format_graph(g).as_bytes())
}

/// Writes via a sibling temp file and rename, so readers never observe a
/// half-written file.
pub fn write_atomic(path: impl AsRef<FsPath>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let text = format_graph(&g);
        let back = parse_graph(&text).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn header_only_is_edgeless() {
        let g = parse_graph("3 0\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn self_loop_reports_line() {
        match parse_graph("3 1\n0 0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unsorted_edge_rejected() {
        assert!(parse_graph("3 1\n2 1\n").is_err());
    }

    #[test]
    fn wrong_edge_count_rejected() {
        assert!(parse_graph("3 2\n0 1\n").is_err());
        assert!(parse_graph("3 1\n0 1\n1 2\n").is_err());
    }

    #[test]
    fn out_of_range_rejected() {
        match parse_graph("3 1\n0 3\n") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, 3);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
