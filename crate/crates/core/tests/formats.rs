use bipforest::formats::FormatError;
use bipforest::{emit_graph6, emit_planar_code, parse_graph6, parse_graph6_file, parse_planar_code};

/// Reference decoder for orders below 63: bit k of the adjacency string,
/// read most significant first, is the k-th pair in column order.
fn reference_edges(s: &[u8]) -> (usize, Vec<(usize, usize)>) {
    let n = (s[0] - 63) as usize;
    let bits: Vec<bool> = s[1..].iter().flat_map(|&b| (0..6).rev().map(move |i| (b - 63) >> i & 1 == 1)).collect();
    let pairs = (1..n).flat_map(|j| (0..j).map(move |i| (i, j)));
    (n, pairs.zip(bits).filter(|(_, b)| *b).map(|(p, _)| p).collect())
}

#[test]
fn every_four_vertex_encoding() {
    for c in b'?'..=b'~' {
        let text = [b'C', c];
        let g = parse_graph6(&text).unwrap();
        let (n, edges) = reference_edges(&text);
        assert_eq!(g.n(), n);
        let mut got = g.edges();
        got.sort();
        let mut want = edges;
        want.sort();
        assert_eq!(got, want, "{}", String::from_utf8_lossy(&text));
        assert_eq!(emit_graph6(&g), text);
    }
    assert_eq!(parse_graph6(b"C~").unwrap().edge_count(), 6);
}

#[test]
fn single_vertex_and_truncation() {
    let g = parse_graph6(b"@").unwrap();
    assert_eq!((g.n(), g.edge_count()), (1, 0));
    assert!(matches!(parse_graph6(b"E"), Err(FormatError::Malformed { offset: 1, .. })));
    assert!(matches!(parse_graph6(b"~??"), Err(FormatError::Malformed { offset: 3, .. })));
    let err = parse_graph6_file(b"Cl\nEx").unwrap_err();
    assert!(matches!(err, FormatError::Malformed { offset: 5, .. }), "{err:?}");
}

#[test]
fn cube_planar_code_fixture() {
    #[rustfmt::skip]
    let raw: Vec<u8> = [
        &b">>planar_code<<"[..], &[8],
        &[2, 4, 5, 0], &[3, 1, 6, 0], &[4, 2, 7, 0], &[1, 3, 8, 0],
        &[8, 6, 1, 0], &[5, 7, 2, 0], &[6, 8, 3, 0], &[7, 5, 4, 0],
    ].concat();
    let gs = parse_planar_code(&raw).unwrap();
    assert_eq!(gs.len(), 1);
    let q3 = &gs[0];
    assert_eq!(q3.face_count(), 6);
    assert!(q3.is_quadrangulation());
    assert!((0..8).all(|v| q3.degree(v) == 3));
    assert_eq!(emit_planar_code(&gs, true), raw);
}

#[test]
fn planar_code_rejects_non_sphere_rotation() {
    // Same cube, two rotations at one vertex swapped: a torus-like trace.
    let raw = [8u8, 4, 2, 5, 0, 3, 1, 6, 0, 4, 2, 7, 0, 1, 3, 8, 0, 8, 6, 1, 0, 5, 7, 2, 0, 6, 8, 3, 0, 7, 5, 4, 0];
    assert!(matches!(parse_planar_code(&raw), Err(FormatError::Embedding { offset: 0, .. })));
}

#[test]
fn concatenated_streams() {
    let c4 = [4u8, 2, 4, 0, 3, 1, 0, 4, 2, 0, 1, 3, 0];
    let raw = [&c4[..], &c4[..]].concat();
    let gs = parse_planar_code(&raw).unwrap();
    assert_eq!(gs.len(), 2);
    assert_eq!(emit_planar_code(&gs, false), raw);
}
