//! planar code: for each graph, the order followed by every vertex's
//! neighbors (1-based, rotation order) terminated by 0. Orders above 255 use
//! a leading 0 byte and 16-bit words for the rest of that graph.

use super::{malformed, FormatError};
use crate::embedding::PlaneGraph;

pub const PLANAR_CODE_HEADER: &[u8] = b">>planar_code<<";
const HEADER_LE: &[u8] = b">>planar_code le<<";
const HEADER_BE: &[u8] = b">>planar_code be<<";

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    little_endian: bool,
}

impl Reader<'_> {
    fn byte(&mut self) -> Result<usize, FormatError> {
        let b = *self.bytes.get(self.pos).ok_or_else(|| malformed(self.pos, "input ends early"))?;
        self.pos += 1;
        Ok(b as usize)
    }

    fn word(&mut self) -> Result<usize, FormatError> {
        let at = self.pos;
        let pair = self.bytes.get(at..at + 2).ok_or_else(|| malformed(at, "input ends inside a 16-bit word"))?;
        self.pos += 2;
        let pair = [pair[0], pair[1]];
        Ok(if self.little_endian { u16::from_le_bytes(pair) } else { u16::from_be_bytes(pair) } as usize)
    }
}

/// All graphs in the stream. An empty stream yields no graphs.
pub fn parse_planar_code(bytes: &[u8]) -> Result<Vec<PlaneGraph>, FormatError> {
    let mut r = Reader { bytes, pos: 0, little_endian: false };
    for (h, le) in [(PLANAR_CODE_HEADER, false), (HEADER_LE, true), (HEADER_BE, false)] {
        if bytes.starts_with(h) {
            r.pos = h.len();
            r.little_endian = le;
            break;
        }
    }
    let mut out = Vec::new();
    while r.pos < bytes.len() {
        let start = r.pos;
        let mut wide = false;
        let mut n = r.byte()?;
        if n == 0 {
            wide = true;
            n = r.word()?;
        }
        let mut rot = Vec::with_capacity(n);
        for _ in 0..n {
            let mut nbrs = Vec::new();
            loop {
                let at = r.pos;
                let x = if wide { r.word()? } else { r.byte()? };
                if x == 0 {
                    break;
                }
                if x > n {
                    return Err(malformed(at, format!("neighbor {x} exceeds order {n}")));
                }
                nbrs.push(x - 1);
            }
            rot.push(nbrs);
        }
        let pg = PlaneGraph::from_rotation(rot).map_err(|source| FormatError::Embedding { offset: start, source })?;
        out.push(pg);
    }
    Ok(out)
}

/// Big-endian words; the header is optional so headerless streams can be
/// reproduced byte for byte.
pub fn emit_planar_code(graphs: &[PlaneGraph], header: bool) -> Vec<u8> {
    let mut out = Vec::new();
    if header {
        out.extend_from_slice(PLANAR_CODE_HEADER);
    }
    for pg in graphs {
        let n = pg.n();
        let wide = n == 0 || n > 255;
        let put = |x: usize, out: &mut Vec<u8>| {
            if wide {
                out.extend_from_slice(&(x as u16).to_be_bytes());
            } else {
                out.push(x as u8);
            }
        };
        if wide {
            out.push(0);
        }
        put(n, &mut out);
        for v in 0..n {
            for &u in pg.rotation(v) {
                put(u + 1, &mut out);
            }
            put(0, &mut out);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::EmbeddingError;
    use crate::generate::{cube, cycle};

    #[test]
    fn cube_round_trip() {
        let bytes = emit_planar_code(&[cube()], true);
        let back = parse_planar_code(&bytes).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].face_count(), 6);
        assert_eq!(emit_planar_code(&back, true), bytes);
    }

    #[test]
    fn empty_stream() {
        assert!(parse_planar_code(b"").unwrap().is_empty());
        assert!(parse_planar_code(PLANAR_CODE_HEADER).unwrap().is_empty());
    }

    #[test]
    fn four_cycle_bytes() {
        assert_eq!(emit_planar_code(&[cycle(4)], false)[0], 4);
        let raw = [4u8, 2, 4, 0, 3, 1, 0, 4, 2, 0, 1, 3, 0];
        let g = &parse_planar_code(&raw).unwrap()[0];
        assert_eq!(g.face_count(), 2);
        assert_eq!(emit_planar_code(std::slice::from_ref(g), false), raw);
    }

    #[test]
    fn euler_failure_rejected() {
        // K4 with rotations that trace too few faces for a sphere.
        let raw = [4u8, 2, 3, 4, 0, 1, 3, 4, 0, 1, 2, 4, 0, 1, 2, 3, 0];
        let err = parse_planar_code(&raw).unwrap_err();
        assert!(matches!(err, FormatError::Embedding { offset: 0, source: EmbeddingError::Euler { .. } }), "{err:?}");
    }

    #[test]
    fn truncated_and_out_of_range() {
        assert!(matches!(parse_planar_code(&[3, 2, 0, 1]), Err(FormatError::Malformed { offset: 4, .. })));
        assert!(matches!(parse_planar_code(&[2, 3, 0, 1, 0]), Err(FormatError::Malformed { offset: 1, .. })));
    }

    #[test]
    fn wide_orders() {
        let big = crate::generate::cycle(300);
        let bytes = emit_planar_code(std::slice::from_ref(&big), false);
        assert_eq!(&bytes[..3], &[0, 1, 44]);
        let back = parse_planar_code(&bytes).unwrap();
        assert_eq!(back[0].graph(), big.graph());
    }
}
