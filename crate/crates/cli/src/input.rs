//! Parsing of command-line graph names, vertex lists and system files.
//!
//! Vertex labels on this side are 1-based; everything handed to the library is 0-based.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use treehelly::codec::{decode, from_graph6};
use treehelly::{Edge, SimpleGraph, SubtreeSystem, Tree, Vertex};

use crate::CliError;

/// `P6`, `C5`, `K4`, `K2,3`, `S3` (star with three leaves), `@file` (graph6 or edge
/// list), or a literal graph6 string.
pub fn graph(text: &str) -> Result<SimpleGraph, CliError> {
    let text = text.trim();
    if let Some(path) = text.strip_prefix('@') {
        let body = read(Path::new(path))?;
        return decode(&body).map_err(|e| CliError::Input(format!("{path}: {e}")));
    }
    let (head, rest) = text.split_at(1.min(text.len()));
    if "PCSK".contains(head) && !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit() || b == b',') {
        return named(head, rest).ok_or_else(|| CliError::Input(format!("no graph named {text:?}")));
    }
    from_graph6(text).map_err(|e| CliError::Input(format!("graph {text:?}: {e}")))
}

fn named(head: &str, rest: &str) -> Option<SimpleGraph> {
    let num = |s: &str| s.parse::<usize>().ok();
    match head {
        "P" => num(rest).filter(|&n| n >= 1).map(SimpleGraph::path),
        "C" => num(rest).filter(|&n| n >= 3).map(SimpleGraph::cycle),
        "S" => num(rest).map(SimpleGraph::star),
        "K" => match rest.split_once(',') {
            Some((a, b)) => Some(SimpleGraph::complete_bipartite(num(a)?, num(b)?)),
            None => num(rest).map(SimpleGraph::complete),
        },
        _ => None,
    }
}

pub fn tree(text: &str) -> Result<Tree, CliError> {
    Tree::new(graph(text)?).map_err(|e| CliError::Input(format!("{text}: {e}")))
}

pub fn read(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Input(format!("stdin: {e}")));
    }
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn lower(v: usize, n: usize) -> Result<Vertex, CliError> {
    if v == 0 || v > n {
        return Err(CliError::Input(format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

/// Comma-separated 1-based labels.
pub fn vertices(text: &str, n: usize) -> Result<Vec<Vertex>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let v = s.parse().map_err(|_| CliError::Input(format!("bad vertex {s:?}")))?;
            lower(v, n)
        })
        .collect()
}

/// `1-2,5-6` style edge list with 1-based labels.
pub fn edges(text: &str, n: usize) -> Result<Vec<Edge>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (u, v) = s.split_once('-').ok_or_else(|| CliError::Input(format!("bad edge {s:?}")))?;
            let parse = |x: &str| x.trim().parse().map_err(|_| CliError::Input(format!("bad edge {s:?}")));
            let (u, v) = (lower(parse(u)?, n)?, lower(parse(v)?, n)?);
            Ok((u.min(v), u.max(v)))
        })
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    host: String,
    members: Vec<Vec<usize>>,
}

/// `{"host": <graph>, "members": [[1-based labels]]}`.
pub fn system(path: &Path) -> Result<SubtreeSystem, CliError> {
    let body = read(path)?;
    let file: SystemFile =
        serde_json::from_str(&body).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let host = tree(&file.host)?;
    let n = host.n();
    let lists = file
        .members
        .iter()
        .map(|m| m.iter().map(|&v| lower(v, n)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    SubtreeSystem::from_vertex_lists(host, &lists).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Inclusive range `3..6`, or a single value.
pub fn range(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Input(format!("bad range {text:?}"));
    match text.split_once("..") {
        Some((a, b)) => {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![text.trim().parse().map_err(|_| bad())?]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(graph("P6").unwrap().edge_count(), 5);
        assert_eq!(graph("K2,3").unwrap().edge_count(), 6);
        assert_eq!(graph("S4").unwrap().n(), 5);
        assert_eq!(graph("A_").unwrap().edge_count(), 1);
        assert!(graph("C2").is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(vertices("2, 5", 6).unwrap(), vec![1, 4]);
        assert!(vertices("0", 6).is_err());
        assert_eq!(edges("2-1,5-6", 6).unwrap(), vec![(0, 1), (4, 5)]);
        assert_eq!(range("3..6").unwrap(), vec![3, 4, 5, 6]);
        assert_eq!(range("4").unwrap(), vec![4]);
    }
}
