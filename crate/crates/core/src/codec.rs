//! graph6, plain edge-list and DOT encodings.
//!
//! graph6 follows the published layout: `N(n)` followed by the upper
//! triangle of the adjacency matrix in column order (`x(0,1), x(0,2),
//! x(1,2), x(0,3), ...`), six bits per byte, each byte offset by 63.
//! The edge-list format is `n` followed by whitespace separated pairs
//! `u v`, 0-based.

use thiserror::Error;

use crate::graph::{Edge, SimpleGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("malformed header at byte {offset}: {reason}")]
    MalformedHeader { offset: usize, reason: String },
    #[error("invalid graph6 byte {byte:#04x} at byte {offset}")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("graph6 body ends at byte {offset}: expected {expected} data bytes, found {found}")]
    BadLength {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex {vertex} out of range 0..{n} at byte {offset}")]
    VertexOutOfRange { offset: usize, vertex: usize, n: usize },
    #[error("odd number of edge tokens: dangling token at byte {offset}")]
    OddEdgeTokens { offset: usize },
    #[error("unparseable token {token:?} at byte {offset}")]
    BadToken { offset: usize, token: String },
    #[error("loop on vertex {vertex} at byte {offset}")]
    Loop { offset: usize, vertex: usize },
}

const HEADER: &str = ">>graph6<<";

fn encode_n(n: usize, out: &mut String) {
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    }
}

pub fn to_graph6(g: &SimpleGraph) -> String {
    let n = g.n();
    let mut out = String::new();
    encode_n(n, &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.adjacent(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + 63) as char);
    }
    out
}

pub fn from_graph6(text: &str) -> Result<SimpleGraph, CodecError> {
    let bytes = text.as_bytes();
    let mut pos = bytes.iter().take_while(|b| b.is_ascii_whitespace()).count();
    if text[pos..].starts_with(HEADER) {
        pos += HEADER.len();
    }
    let end = bytes.len() - bytes.iter().rev().take_while(|b| b.is_ascii_whitespace()).count();
    if pos >= end {
        return Err(CodecError::MalformedHeader {
            offset: pos,
            reason: "empty input".into(),
        });
    }
    let data = |i: usize| -> Result<usize, CodecError> {
        if i >= end {
            return Err(CodecError::MalformedHeader {
                offset: i,
                reason: "truncated vertex count".into(),
            });
        }
        let b = bytes[i];
        if !(63..=126).contains(&b) {
            return Err(CodecError::InvalidByte { offset: i, byte: b });
        }
        Ok((b - 63) as usize)
    };
    let (n, body) = if bytes[pos] != b'~' {
        (data(pos)?, pos + 1)
    } else if pos + 1 < end && bytes[pos + 1] == b'~' {
        let mut n = 0;
        for i in 0..6 {
            n = (n << 6) | data(pos + 2 + i)?;
        }
        (n, pos + 8)
    } else {
        let mut n = 0;
        for i in 0..3 {
            n = (n << 6) | data(pos + 1 + i)?;
        }
        (n, pos + 4)
    };
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    let found = end - body;
    if found != expected {
        return Err(CodecError::BadLength {
            offset: end,
            expected,
            found,
        });
    }
    let mut edges = Vec::new();
    let mut k = 0;
    'outer: for j in 1..n {
        for i in 0..j {
            let byte = body + k / 6;
            let b = bytes[byte];
            if !(63..=126).contains(&b) {
                return Err(CodecError::InvalidByte { offset: byte, byte: b });
            }
            if (b - 63) >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
            if k == bits {
                break 'outer;
            }
        }
    }
    for i in 0..expected {
        let b = bytes[body + i];
        if !(63..=126).contains(&b) {
            return Err(CodecError::InvalidByte { offset: body + i, byte: b });
        }
    }
    Ok(SimpleGraph::from_edges(n, &edges).expect("graph6 pairs are in range"))
}

pub fn to_edge_list(g: &SimpleGraph) -> String {
    let mut out = format!("{}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut offset = 0;
    text.split_inclusive(|c: char| c.is_ascii_whitespace()).filter_map(move |chunk| {
        let start = offset;
        offset += chunk.len();
        let tok = chunk.trim_end_matches(|c: char| c.is_ascii_whitespace());
        (!tok.is_empty()).then_some((start, tok))
    })
}

pub fn from_edge_list(text: &str) -> Result<SimpleGraph, CodecError> {
    let mut toks = tokens(text);
    let parse = |(offset, tok): (usize, &str)| -> Result<usize, CodecError> {
        tok.parse::<usize>().map_err(|_| CodecError::BadToken {
            offset,
            token: tok.to_string(),
        })
    };
    let first = toks.next().ok_or(CodecError::MalformedHeader {
        offset: 0,
        reason: "missing vertex count".into(),
    })?;
    let n = parse(first).map_err(|_| CodecError::MalformedHeader {
        offset: first.0,
        reason: format!("vertex count {:?} is not a non-negative integer", first.1),
    })?;
    let rest: Vec<(usize, &str)> = toks.collect();
    if rest.len() % 2 == 1 {
        return Err(CodecError::OddEdgeTokens {
            offset: rest[rest.len() - 1].0,
        });
    }
    let mut edges: Vec<Edge> = Vec::with_capacity(rest.len() / 2);
    for pair in rest.chunks(2) {
        let u = parse(pair[0])?;
        let v = parse(pair[1])?;
        for (tok, w) in [(pair[0], u), (pair[1], v)] {
            if w >= n {
                return Err(CodecError::VertexOutOfRange {
                    offset: tok.0,
                    vertex: w,
                    n,
                });
            }
        }
        if u == v {
            return Err(CodecError::Loop {
                offset: pair[0].0,
                vertex: u,
            });
        }
        edges.push((u, v));
    }
    Ok(SimpleGraph::from_edges(n, &edges).expect("validated"))
}

/// Decodes either format: input whose first token is a decimal integer is an
/// edge list, anything else is graph6.
pub fn decode(text: &str) -> Result<SimpleGraph, CodecError> {
    match tokens(text).next() {
        Some((_, tok)) if tok.bytes().all(|b| b.is_ascii_digit()) && !tok.is_empty() => {
            from_edge_list(text)
        }
        _ => from_graph6(text),
    }
}

/// Graphviz rendering; `labels[v]` replaces the numeric vertex name.
pub fn to_dot(g: &SimpleGraph, labels: Option<&[String]>) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        match labels {
            Some(l) => out.push_str(&format!("  {v} [label=\"{}\"];\n", l[v].replace('"', "\\\""))),
            None => out.push_str(&format!("  {v};\n")),
        }
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("  {u} -- {v};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn graph6_known_strings() {
        let k2 = SimpleGraph::complete(2);
        assert_eq!(to_graph6(&k2), "A_");
        let g = from_graph6("D?{").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edges(), vec![(0, 4), (1, 4), (2, 4), (3, 4)]);
        assert_eq!(to_graph6(&g), "D?{");
        assert_eq!(to_graph6(&SimpleGraph::empty(0)), "?");
        assert_eq!(from_graph6("?").unwrap().n(), 0);
        assert_eq!(from_graph6(">>graph6<<A_\n").unwrap(), k2);
    }

    #[test]
    fn graph6_large_header() {
        let g = SimpleGraph::path(70);
        let s = to_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(from_graph6(&s).unwrap(), g);
    }

    #[test]
    fn graph6_errors_carry_offsets() {
        assert_eq!(
            from_graph6("D?"),
            Err(CodecError::BadLength {
                offset: 2,
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            from_graph6("D? "),
            Err(CodecError::BadLength {
                offset: 2,
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            from_graph6("D?\u{1}"),
            Err(CodecError::InvalidByte { offset: 2, byte: 1 })
        );
        assert!(matches!(from_graph6(""), Err(CodecError::MalformedHeader { .. })));
        assert!(matches!(from_graph6("~?"), Err(CodecError::MalformedHeader { offset: 2, .. })));
    }

    #[test]
    fn edge_list_examples() {
        let g = from_edge_list("3\n0 1\n1 2").unwrap();
        assert_eq!(g, SimpleGraph::path(3));
        assert_eq!(from_edge_list(&to_edge_list(&g)).unwrap(), g);
        assert_eq!(from_edge_list("3\n0 1\n2"), Err(CodecError::OddEdgeTokens { offset: 6 }));
        assert_eq!(
            from_edge_list("3\n0 5"),
            Err(CodecError::VertexOutOfRange {
                offset: 4,
                vertex: 5,
                n: 3
            })
        );
        assert!(matches!(from_edge_list("x\n"), Err(CodecError::MalformedHeader { offset: 0, .. })));
        assert_eq!(from_edge_list("2 1 1"), Err(CodecError::Loop { offset: 2, vertex: 1 }));
        assert_eq!(decode("3\n0 1\n1 2").unwrap(), SimpleGraph::path(3));
        assert_eq!(decode("A_").unwrap(), SimpleGraph::complete(2));
    }

    #[test]
    fn dot_output() {
        let dot = to_dot(&SimpleGraph::path(2), Some(&["a".into(), "b".into()]));
        assert!(dot.contains("0 -- 1;"));
        assert!(dot.contains("label=\"b\""));
    }

    proptest! {
        #[test]
        fn graph6_roundtrip(n in 0usize..20, bits in proptest::collection::vec(any::<bool>(), 190)) {
            let mut edges = Vec::new();
            let mut k = 0;
            for j in 1..n {
                for i in 0..j {
                    if bits[k] { edges.push((i, j)); }
                    k += 1;
                }
            }
            let g = SimpleGraph::from_edges(n, &edges).unwrap();
            let s = to_graph6(&g);
            prop_assert_eq!(from_graph6(&s).unwrap(), g.clone());
            prop_assert_eq!(to_graph6(&from_graph6(&s).unwrap()), s);
            prop_assert_eq!(from_edge_list(&to_edge_list(&g)).unwrap(), g);
        }
    }
}
