//! graph6: printable ASCII, an order header followed by the upper triangle
//! of the adjacency matrix packed six bits per byte.

use super::{malformed, FormatError};
use crate::graph::Graph;

pub const GRAPH6_HEADER: &[u8] = b">>graph6<<";

fn encode_order(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

/// One graph, without header or newline.
pub fn emit_graph6(g: &Graph) -> Vec<u8> {
    let n = g.n();
    let mut out = Vec::new();
    encode_order(n, &mut out);
    let (mut acc, mut bits) = (0u8, 0);
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            bits += 1;
            if bits == 6 {
                out.push(acc + 63);
                (acc, bits) = (0, 0);
            }
        }
    }
    if bits > 0 {
        out.push((acc << (6 - bits)) + 63);
    }
    out
}

fn sextet(bytes: &[u8], i: usize, base: usize) -> Result<u8, FormatError> {
    match bytes.get(i) {
        Some(&b) if (63..=126).contains(&b) => Ok(b - 63),
        Some(&b) => Err(malformed(base + i, format!("byte {b:#04x} outside the printable range"))),
        None => Err(malformed(base + i, "input ends early")),
    }
}

/// One graph; an optional header and one trailing newline are accepted.
/// `base` offsets reported positions when parsing inside a larger file.
pub fn parse_graph6(bytes: &[u8]) -> Result<Graph, FormatError> {
    parse_at(bytes, 0)
}

fn parse_at(mut bytes: &[u8], mut base: usize) -> Result<Graph, FormatError> {
    if let Some(rest) = bytes.strip_prefix(GRAPH6_HEADER) {
        bytes = rest;
        base += GRAPH6_HEADER.len();
    }
    if let Some(rest) = bytes.strip_suffix(b"\n") {
        bytes = rest;
    }
    if bytes.first() == Some(&b':') || bytes.first() == Some(&b'&') {
        return Err(malformed(base, "sparse6 and digraph6 are not supported"));
    }
    let (n, mut pos) = if bytes.first() == Some(&126) {
        if bytes.get(1) == Some(&126) {
            let mut n = 0usize;
            for i in 2..8 {
                n = n << 6 | sextet(bytes, i, base)? as usize;
            }
            (n, 8)
        } else {
            let mut n = 0usize;
            for i in 1..4 {
                n = n << 6 | sextet(bytes, i, base)? as usize;
            }
            (n, 4)
        }
    } else {
        (sextet(bytes, 0, base)? as usize, 1)
    };
    let total = n * n.saturating_sub(1) / 2;
    let need = total.div_ceil(6);
    if bytes.len() != pos + need {
        let at = base + bytes.len().min(pos + need);
        return Err(malformed(at, format!("expected {need} adjacency bytes, found {}", bytes.len() - pos.min(bytes.len()))));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    let mut cur = 0u8;
    for j in 1..n {
        for i in 0..j {
            if k % 6 == 0 {
                cur = sextet(bytes, pos, base)?;
                pos += 1;
            }
            if cur >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    if k % 6 != 0 && cur & ((1u8 << (6 - k % 6)) - 1) != 0 {
        return Err(malformed(base + pos - 1, "nonzero padding bits"));
    }
    Graph::new(n, &edges).map_err(|source| FormatError::Graph { offset: base, source })
}

/// Newline-separated graphs; blank lines are skipped.
pub fn parse_graph6_file(bytes: &[u8]) -> Result<Vec<Graph>, FormatError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in bytes.split(|&b| b == b'\n') {
        let trimmed = line.strip_suffix(b"\r").unwrap_or(line);
        if !trimmed.is_empty() {
            out.push(parse_at(trimmed, offset)?);
        }
        offset += line.len() + 1;
    }
    Ok(out)
}
