//! Combinatorial embeddings: rotation systems, face tracing and the
//! face-local surgeries (chords, identification inside a face).

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Graph, GraphError, IdMap, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("rotation at vertex {0} is not a permutation of its neighbors")]
    BadRotation(Vertex),
    #[error("rotation system fails Euler: V={v} E={e} F={f} components={c}")]
    Euler { v: usize, e: usize, f: usize, c: usize },
    #[error("face of length {0} needs no chord")]
    NoChordNeeded(usize),
    #[error("no valid chord exists in the face")]
    NoValidChord,
    #[error("face is not part of this embedding")]
    UnknownFace,
    #[error("vertex {0} does not lie on the face")]
    NotOnFace(Vertex),
    #[error("vertices {0} and {1} share no face")]
    NotCofacial(Vertex, Vertex),
}

/// A closed face boundary, stored as directed edges starting from the
/// lexicographically least dart so equal faces compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceWalk {
    darts: Vec<(Vertex, Vertex)>,
}

impl FaceWalk {
    fn canonical(mut darts: Vec<(Vertex, Vertex)>) -> FaceWalk {
        if let Some(start) = (0..darts.len()).min_by_key(|&i| darts[i]) {
            darts.rotate_left(start);
        }
        FaceWalk { darts }
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn darts(&self) -> &[(Vertex, Vertex)] {
        &self.darts
    }

    /// Boundary vertices in walk order; repeated when the walk revisits.
    pub fn vertices(&self) -> Vec<Vertex> {
        self.darts.iter().map(|d| d.0).collect()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.darts.iter().any(|d| d.0 == v)
    }
}

/// A graph together with a rotation system (cyclic neighbor order per vertex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneGraph {
    graph: Graph,
    rot: Vec<Vec<Vertex>>,
}

impl PlaneGraph {
    /// Validates that every rotation permutes the neighborhood and that every
    /// component is a sphere embedding.
    pub fn new(graph: Graph, rot: Vec<Vec<Vertex>>) -> Result<PlaneGraph, EmbeddingError> {
        let pg = Self::unchecked(graph, rot)?;
        pg.check_euler()?;
        Ok(pg)
    }

    fn unchecked(graph: Graph, rot: Vec<Vec<Vertex>>) -> Result<PlaneGraph, EmbeddingError> {
        if rot.len() != graph.n() {
            return Err(EmbeddingError::BadRotation(rot.len().min(graph.n())));
        }
        for (v, r) in rot.iter().enumerate() {
            let as_set: VertexSet = r.iter().copied().collect();
            if r.len() != graph.degree(v) || &as_set != graph.neighbors(v) {
                return Err(EmbeddingError::BadRotation(v));
            }
        }
        Ok(PlaneGraph { graph, rot })
    }

    /// Builds graph and rotation from rotation lists alone.
    pub fn from_rotation(rot: Vec<Vec<Vertex>>) -> Result<PlaneGraph, EmbeddingError> {
        let n = rot.len();
        let mut edges = Vec::new();
        for (u, r) in rot.iter().enumerate() {
            for &v in r {
                if v >= n {
                    return Err(GraphError::OutOfRange { u, v, n }.into());
                }
                if !rot[v].contains(&u) {
                    return Err(EmbeddingError::BadRotation(u));
                }
                edges.push((u, v));
            }
            let distinct: BTreeSet<_> = r.iter().collect();
            if distinct.len() != r.len() {
                return Err(EmbeddingError::BadRotation(u));
            }
        }
        PlaneGraph::new(Graph::new(n, &edges)?, rot)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        &self.rot[v]
    }

    pub fn rotations(&self) -> &[Vec<Vertex>] {
        &self.rot
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rot[v].len()
    }

    /// Neighbor following `u` in the rotation at `v`.
    pub fn succ(&self, v: Vertex, u: Vertex) -> Vertex {
        let r = &self.rot[v];
        let i = r.iter().position(|&x| x == u).expect("u adjacent to v");
        r[(i + 1) % r.len()]
    }

    /// Neighbor preceding `u` in the rotation at `v`.
    pub fn pred(&self, v: Vertex, u: Vertex) -> Vertex {
        let r = &self.rot[v];
        let i = r.iter().position(|&x| x == u).expect("u adjacent to v");
        r[(i + r.len() - 1) % r.len()]
    }

    /// Every face walk; the dart after `(u, v)` is `(v, succ_v(u))`.
    pub fn trace_faces(&self) -> Vec<FaceWalk> {
        let n = self.n();
        let mut used: Vec<Vec<bool>> = self.rot.iter().map(|r| vec![false; r.len()]).collect();
        let mut faces = Vec::new();
        for u in 0..n {
            for i in 0..self.rot[u].len() {
                if used[u][i] {
                    continue;
                }
                let mut darts = Vec::new();
                let (mut a, mut ai) = (u, i);
                while !used[a][ai] {
                    used[a][ai] = true;
                    let b = self.rot[a][ai];
                    darts.push((a, b));
                    let bi = self.rot[b].iter().position(|&x| x == a).expect("symmetric");
                    let ni = (bi + 1) % self.rot[b].len();
                    a = b;
                    ai = ni;
                }
                faces.push(FaceWalk::canonical(darts));
            }
        }
        faces.sort();
        faces
    }

    /// Number of faces counting one face per isolated vertex.
    pub fn face_count(&self) -> usize {
        self.trace_faces().len() + (0..self.n()).filter(|&v| self.degree(v) == 0).count()
    }

    fn check_euler(&self) -> Result<(), EmbeddingError> {
        let (v, e) = (self.n(), self.graph.edge_count());
        let c = self.graph.components().len();
        let f = self.face_count();
        // Each component is traced on its own sphere, so V - E + F = 2C here;
        // with one shared outer face this is the usual V - E + F = 1 + C.
        if v == 0 || v + f == e + 2 * c {
            Ok(())
        } else {
            Err(EmbeddingError::Euler { v, e, f, c })
        }
    }

    /// Connected, at least one edge, every face of length 4.
    pub fn is_quadrangulation(&self) -> bool {
        self.graph.edge_count() > 0
            && self.graph.is_connected()
            && self.trace_faces().iter().all(|f| f.len() == 4)
    }

    /// Splits a face of length >= 6 with a chord between two boundary
    /// vertices three steps apart, producing a 4-face and a (k-2)-face.
    pub fn add_chord(&self, face: &FaceWalk) -> Result<PlaneGraph, EmbeddingError> {
        let k = face.len();
        if k <= 4 {
            return Err(EmbeddingError::NoChordNeeded(k));
        }
        if !self.trace_faces().contains(face) {
            return Err(EmbeddingError::UnknownFace);
        }
        let w = face.vertices();
        for s in 0..k {
            let a1 = w[s];
            let a4 = w[(s + 3) % k];
            if a1 == a4 || self.graph.has_edge(a1, a4) {
                continue;
            }
            let ak = w[(s + k - 1) % k];
            let a3 = w[(s + 2) % k];
            let mut rot = self.rot.clone();
            insert_after(&mut rot[a1], ak, a4);
            insert_after(&mut rot[a4], a3, a1);
            let graph = self.graph.add_edge(a1, a4)?;
            return PlaneGraph::new(graph, rot);
        }
        Err(EmbeddingError::NoValidChord)
    }

    /// Adds edge `ab` drawn inside a face containing both endpoints.
    pub fn add_edge_in_face(&self, a: Vertex, b: Vertex) -> Result<PlaneGraph, EmbeddingError> {
        let graph = self.graph.add_edge(a, b)?;
        let mut rot = self.rot.clone();
        let face = if self.rot[a].is_empty() || self.rot[b].is_empty() {
            None
        } else {
            Some(self.common_face(a, b)?)
        };
        for (x, y) in [(a, b), (b, a)] {
            match &face {
                Some(f) if !self.rot[x].is_empty() => {
                    let w = f.vertices();
                    let i = w.iter().position(|&z| z == x).expect("on face");
                    insert_after(&mut rot[x], w[(i + w.len() - 1) % w.len()], y);
                }
                _ if self.rot[x].is_empty() => rot[x].push(y),
                _ => {
                    // `y` is isolated: any gap around `x` works.
                    rot[x].push(y);
                }
            }
        }
        PlaneGraph::new(graph, rot)
    }

    /// Triples `(r1, w, r2)` such that `v r1 w r2` bounds a 4-face with four
    /// distinct vertices, in walk order, one per face.
    pub fn cofacial_quads(&self, v: Vertex) -> Vec<(Vertex, Vertex, Vertex)> {
        let mut out = Vec::new();
        for &r1 in &self.rot[v] {
            // The face containing dart (v, r1).
            let w = self.succ(r1, v);
            let r2 = self.succ(w, r1);
            if self.succ(r2, w) != v {
                continue;
            }
            if r1 != r2 && w != v && r1 != v && r2 != v && r1 != w && r2 != w {
                out.push((r1, w, r2));
            }
        }
        out
    }

    /// Unordered neighbor pairs of `v` that share a 4-face through `v`.
    pub fn cofacial_pairs(&self, v: Vertex) -> Vec<(Vertex, Vertex)> {
        let set: BTreeSet<(Vertex, Vertex)> = self
            .cofacial_quads(v)
            .into_iter()
            .map(|(a, _, b)| (a.min(b), a.max(b)))
            .collect();
        set.into_iter().collect()
    }

    /// Fourth vertex of a 4-face through `v`, `a` and `b`, if one exists.
    pub fn face_opposite(&self, v: Vertex, a: Vertex, b: Vertex) -> Option<Vertex> {
        self.cofacial_quads(v)
            .into_iter()
            .find(|&(r1, _, r2)| (r1, r2) == (a, b) || (r1, r2) == (b, a))
            .map(|q| q.1)
    }

    /// `PG - S` with rotations restricted to surviving neighbors.
    pub fn delete_vertices(&self, removed: &VertexSet) -> Result<(PlaneGraph, IdMap), EmbeddingError> {
        let (graph, map) = self.graph.delete_vertices(removed)?;
        let mut rot = vec![Vec::new(); graph.n()];
        for v in 0..self.n() {
            if let Some(nv) = map.get(v) {
                rot[nv] = self.rot[v].iter().filter_map(|&u| map.get(u)).collect();
            }
        }
        Ok((PlaneGraph::new(graph, rot)?, map))
    }

    /// Identifies the vertices of `group`, all lying on `face`, into one
    /// vertex drawn inside that face. Parallel edges created by the merge
    /// are removed.
    pub fn identify_in_face(
        &self,
        face: &FaceWalk,
        group: &VertexSet,
    ) -> Result<(PlaneGraph, IdMap), EmbeddingError> {
        if let Some(v) = group.iter().find(|&v| !face.contains(v)) {
            return Err(EmbeddingError::NotOnFace(v));
        }
        let members = group.to_vec();
        for (i, &a) in members.iter().enumerate() {
            if let Some(&b) = members[i + 1..].iter().find(|&&b| self.graph.has_edge(a, b)) {
                return Err(GraphError::LoopWouldForm(a, b).into());
            }
        }
        if members.len() <= 1 {
            return Ok((self.clone(), IdMap::identity(self.n())));
        }
        if !self.trace_faces().contains(face) {
            return Err(EmbeddingError::UnknownFace);
        }
        let mut pg = self.merge_pair(face, members[0], members[1])?;
        for &b in &members[2..] {
            let (a, nb) = (pg.1.get(members[0]).expect("kept"), pg.1.get(b).expect("kept"));
            let f = pg.0.common_face(a, nb)?;
            let (next, m) = pg.0.merge_pair(&f, a, nb)?;
            pg = (next, pg.1.then(&m));
        }
        Ok(pg)
    }

    // Pinches `a` and `b` together across `face`. The rotation of the merged
    // vertex is the arc of `a` inside the face followed by the arc of `b`.
    fn merge_pair(&self, face: &FaceWalk, a: Vertex, b: Vertex) -> Result<(PlaneGraph, IdMap), EmbeddingError> {
        let walk = face.vertices();
        let k = walk.len();
        let arc = |pos: usize| -> Vec<Vertex> {
            let next = walk[(pos + 1) % k];
            let r = &self.rot[walk[pos]];
            let s = r.iter().position(|&x| x == next).expect("face dart");
            (0..r.len()).map(|t| r[(s + t) % r.len()]).collect()
        };
        let i = walk.iter().position(|&x| x == a).ok_or(EmbeddingError::NotOnFace(a))?;
        let j = walk.iter().position(|&x| x == b).ok_or(EmbeddingError::NotOnFace(b))?;
        let (arc_a, arc_b) = (arc(i), arc(j));
        let mut rot = self.rot.clone();
        let mut merged = arc_a.clone();
        for &x in &arc_b {
            if arc_a.contains(&x) {
                // Shared neighbor: drop the copy of the edge coming from b.
                rot[x].retain(|&y| y != b);
            } else {
                for y in rot[x].iter_mut() {
                    if *y == b {
                        *y = a;
                    }
                }
                merged.push(x);
            }
        }
        rot[a] = merged;
        let group: VertexSet = [a, b].into_iter().collect();
        let (graph, map) = self.graph.identify(&[group])?;
        let mut new_rot = vec![Vec::new(); graph.n()];
        for v in (0..self.n()).filter(|&v| v != b) {
            let nv = map.get(v).expect("kept");
            new_rot[nv] = rot[v].iter().map(|&u| map.get(u).expect("kept")).collect();
        }
        Ok((PlaneGraph::new(graph, new_rot)?, map))
    }

    /// Some face containing both `a` and `b`.
    pub fn common_face(&self, a: Vertex, b: Vertex) -> Result<FaceWalk, EmbeddingError> {
        self.trace_faces()
            .into_iter()
            .find(|f| f.contains(a) && f.contains(b))
            .ok_or(EmbeddingError::NotCofacial(a, b))
    }

    /// Identifies each group (members must share a face at the time it is
    /// processed) and returns the composed id map.
    pub fn identify_groups(&self, groups: &[VertexSet]) -> Result<(PlaneGraph, IdMap), EmbeddingError> {
        let mut pg = self.clone();
        let mut map = IdMap::identity(self.n());
        for g in groups {
            let translated: VertexSet = g.iter().map(|v| map.get(v).expect("alive")).collect();
            if translated.len() <= 1 {
                continue;
            }
            let members = translated.to_vec();
            let face = pg
                .trace_faces()
                .into_iter()
                .find(|f| members.iter().all(|&m| f.contains(m)))
                .ok_or(EmbeddingError::NotCofacial(members[0], members[1]))?;
            let (next, m) = pg.identify_in_face(&face, &translated)?;
            map = map.then(&m);
            pg = next;
        }
        Ok((pg, map))
    }
}

fn insert_after(r: &mut Vec<Vertex>, anchor: Vertex, x: Vertex) {
    let i = r.iter().position(|&y| y == anchor).expect("anchor in rotation");
    r.insert(i + 1, x);
}
