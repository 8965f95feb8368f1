//! Immutable simple graphs over dense vertex ids and the vertex surgeries
//! (deletion, identification, edge addition) the rest of the crate composes.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertex identifier. Ids are dense in `0..n` and get compacted by surgeries.
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({0}, {0}) is a loop")]
    Loop(Vertex),
    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    OutOfRange { u: Vertex, v: Vertex, n: usize },
    #[error("vertex {v} is outside 0..{n}")]
    VertexOutOfRange { v: Vertex, n: usize },
    #[error("identifying the group would turn edge ({0}, {1}) into a loop")]
    LoopWouldForm(Vertex, Vertex),
    #[error("vertex {0} appears in more than one identification group")]
    OverlappingGroups(Vertex),
    #[error("coloring does not match the graph: {0}")]
    BadBipartition(String),
}

/// A set of vertex ids backed by 64-bit words.
#[derive(Clone, Default)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    // Words up to the last nonzero one, so capacity never affects equality.
    fn significant(&self) -> &[u64] {
        let len = self.words.iter().rposition(|&w| w != 0).map_or(0, |i| i + 1);
        &self.words[..len]
    }
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.significant() == other.significant()
    }
}

impl Eq for VertexSet {}

impl std::hash::Hash for VertexSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.significant().hash(state);
    }
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        VertexSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        let (w, b) = (v / 64, v % 64);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let had = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !had
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        let (w, b) = (v / 64, v % 64);
        if w >= self.words.len() {
            return false;
        }
        let had = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        had
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        let (w, b) = (v / 64, v % 64);
        w < self.words.len() && self.words[w] >> b & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + b)
            })
        })
    }

    /// Largest member plus one, or zero for the empty set.
    pub fn bound(&self) -> usize {
        self.iter().last().map_or(0, |v| v + 1)
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            words: self
                .words
                .iter()
                .enumerate()
                .map(|(i, a)| a & !other.words.get(i).copied().unwrap_or(0))
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, a)| a & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl Extend<Vertex> for VertexSet {
    fn extend<I: IntoIterator<Item = Vertex>>(&mut self, iter: I) {
        for v in iter {
            self.insert(v);
        }
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Vec::<Vertex>::deserialize(d)?.into_iter().collect())
    }
}

/// Old id to new id translation produced by every surgery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdMap {
    forward: Vec<Option<Vertex>>,
    new_len: usize,
}

impl IdMap {
    pub fn identity(n: usize) -> Self {
        IdMap {
            forward: (0..n).map(Some).collect(),
            new_len: n,
        }
    }

    /// New id of `old`, or `None` when the vertex was deleted.
    pub fn get(&self, old: Vertex) -> Option<Vertex> {
        self.forward.get(old).copied().flatten()
    }

    pub fn old_len(&self) -> usize {
        self.forward.len()
    }

    pub fn new_len(&self) -> usize {
        self.new_len
    }

    /// All old ids mapping to `new`.
    pub fn preimage(&self, new: Vertex) -> Vec<Vertex> {
        self.forward
            .iter()
            .enumerate()
            .filter(|(_, m)| **m == Some(new))
            .map(|(o, _)| o)
            .collect()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &IdMap) -> IdMap {
        IdMap {
            forward: self
                .forward
                .iter()
                .map(|m| m.and_then(|v| next.get(v)))
                .collect(),
            new_len: next.new_len,
        }
    }
}

/// Simple undirected graph. Adjacency is symmetric, loop-free and stored as
/// one bitset per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<VertexSet>,
    bipartition: Option<Vec<u8>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicate edges are merged.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph, GraphError> {
        let mut adj = vec![VertexSet::with_capacity(n); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Graph {
            adj,
            bipartition: None,
        })
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            adj: vec![VertexSet::with_capacity(n); n],
            bipartition: None,
        }
    }

    /// Attaches a 2-coloring, rejecting it when some edge is monochromatic.
    pub fn with_bipartition(mut self, colors: Vec<u8>) -> Result<Graph, GraphError> {
        if colors.len() != self.n() {
            return Err(GraphError::BadBipartition(format!(
                "{} colors for {} vertices",
                colors.len(),
                self.n()
            )));
        }
        if let Some((u, v)) = self.edges().into_iter().find(|&(u, v)| colors[u] == colors[v]) {
            return Err(GraphError::BadBipartition(format!("edge ({u}, {v}) is monochromatic")));
        }
        if colors.iter().any(|&c| c > 1) {
            return Err(GraphError::BadBipartition("colors must be 0 or 1".into()));
        }
        self.bipartition = Some(colors);
        Ok(self)
    }

    pub fn stored_bipartition(&self) -> Option<&[u8]> {
        self.bipartition.as_deref()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].contains(v)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            out.extend(self.adj[u].iter().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn all_vertices(&self) -> VertexSet {
        (0..self.n()).collect()
    }

    fn check_set(&self, s: &VertexSet) -> Result<(), GraphError> {
        match s.iter().find(|&v| v >= self.n()) {
            Some(v) => Err(GraphError::VertexOutOfRange { v, n: self.n() }),
            None => Ok(()),
        }
    }

    /// `G - S`: the subgraph induced on the complement of `removed`, ids
    /// compacted in increasing order.
    pub fn delete_vertices(&self, removed: &VertexSet) -> Result<(Graph, IdMap), GraphError> {
        self.check_set(removed)?;
        let mut forward = vec![None; self.n()];
        let mut next = 0;
        for (v, slot) in forward.iter_mut().enumerate() {
            if !removed.contains(v) {
                *slot = Some(next);
                next += 1;
            }
        }
        let map = IdMap {
            forward,
            new_len: next,
        };
        Ok((self.remap(&map), map))
    }

    /// Relabels through `map`, merging vertices sent to the same id. The
    /// caller guarantees no edge joins two vertices with the same image.
    fn remap(&self, map: &IdMap) -> Graph {
        let mut adj = vec![VertexSet::with_capacity(map.new_len); map.new_len];
        for (u, v) in self.edges() {
            if let (Some(a), Some(b)) = (map.get(u), map.get(v)) {
                debug_assert_ne!(a, b);
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        let bipartition = self.bipartition.as_ref().and_then(|colors| {
            let mut out = vec![None; map.new_len];
            for (old, c) in colors.iter().enumerate() {
                if let Some(new) = map.get(old) {
                    match out[new] {
                        None => out[new] = Some(*c),
                        Some(prev) if prev != *c => return None,
                        _ => {}
                    }
                }
            }
            out.into_iter().collect::<Option<Vec<u8>>>()
        });
        Graph { adj, bipartition }
    }

    /// Collapses every group to a single vertex. Each merged vertex takes the
    /// smallest new id among its group's position in the compacted order;
    /// parallel edges are merged.
    pub fn identify(&self, groups: &[VertexSet]) -> Result<(Graph, IdMap), GraphError> {
        let n = self.n();
        let mut owner: Vec<Option<usize>> = vec![None; n];
        for (gi, g) in groups.iter().enumerate() {
            self.check_set(g)?;
            for v in g.iter() {
                if owner[v].is_some() {
                    return Err(GraphError::OverlappingGroups(v));
                }
                owner[v] = Some(gi);
            }
        }
        for g in groups {
            let members = g.to_vec();
            for (i, &a) in members.iter().enumerate() {
                if let Some(&b) = members[i + 1..].iter().find(|&&b| self.has_edge(a, b)) {
                    return Err(GraphError::LoopWouldForm(a, b));
                }
            }
        }
        // A group is represented by its smallest member; the others vanish.
        let mut forward = vec![None; n];
        let mut group_id: Vec<Option<Vertex>> = vec![None; groups.len()];
        let mut next = 0;
        for v in 0..n {
            match owner[v] {
                Some(gi) => {
                    if group_id[gi].is_none() {
                        group_id[gi] = Some(next);
                        next += 1;
                    }
                    forward[v] = group_id[gi];
                }
                None => {
                    forward[v] = Some(next);
                    next += 1;
                }
            }
        }
        let map = IdMap {
            forward,
            new_len: next,
        };
        Ok((self.remap(&map), map))
    }

    /// `G + uv`. Adding an existing edge returns an equal graph.
    pub fn add_edge(&self, u: Vertex, v: Vertex) -> Result<Graph, GraphError> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(GraphError::OutOfRange { u, v, n });
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        let mut g = self.clone();
        g.adj[u].insert(v);
        g.adj[v].insert(u);
        if let Some(c) = &g.bipartition {
            if c[u] == c[v] {
                g.bipartition = None;
            }
        }
        Ok(g)
    }

    /// A proper 2-coloring (vertex 0 of every component gets color 0), or
    /// `None` when the graph has an odd cycle.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let n = self.n();
        let mut color = vec![u8::MAX; n];
        let mut stack = Vec::new();
        for s in 0..n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for w in self.adj[u].iter() {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        stack.push(w);
                    } else if color[w] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// True iff `G[s]` is acyclic.
    pub fn induces_forest(&self, s: &VertexSet) -> bool {
        self.find_cycle_in(s).is_none()
    }

    /// Some cycle of `G[s]` as a vertex sequence, if one exists.
    pub fn find_cycle_in(&self, s: &VertexSet) -> Option<Vec<Vertex>> {
        let n = self.n();
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        for root in s.iter().filter(|&v| v < n) {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                for w in self.adj[u].iter().filter(|&w| s.contains(w)) {
                    if w == parent[u] {
                        continue;
                    }
                    if seen[w] {
                        return Some(self.cycle_through(&parent, u, w));
                    }
                    seen[w] = true;
                    parent[w] = u;
                    stack.push(w);
                }
            }
        }
        None
    }

    // Tree paths from u and w up to their common ancestor, closed by edge uw.
    fn cycle_through(&self, parent: &[usize], u: Vertex, w: Vertex) -> Vec<Vertex> {
        let up = |mut x: Vertex| {
            let mut path = vec![x];
            while parent[x] != usize::MAX {
                x = parent[x];
                path.push(x);
            }
            path
        };
        let (pu, pw) = (up(u), up(w));
        let on_w: VertexSet = pw.iter().copied().collect();
        let meet = *pu.iter().find(|x| on_w.contains(**x)).expect("same tree");
        let mut cycle: Vec<Vertex> = pu.iter().copied().take_while(|&x| x != meet).collect();
        cycle.push(meet);
        let tail: Vec<Vertex> = pw.iter().copied().take_while(|&x| x != meet).collect();
        cycle.extend(tail.into_iter().rev());
        cycle
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for w in self.adj[u].iter() {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Vertices at distance at most `radius` from `v`.
    pub fn ball(&self, v: Vertex, radius: usize) -> VertexSet {
        let mut ball: VertexSet = std::iter::once(v).collect();
        let mut frontier = vec![v];
        for _ in 0..radius {
            let mut next = Vec::new();
            for u in frontier {
                for w in self.adj[u].iter() {
                    if ball.insert(w) {
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        ball
    }

    /// Number of edges with both ends in `s`.
    pub fn induced_edge_count(&self, s: &VertexSet) -> usize {
        s.iter().map(|v| self.adj[v].intersection_len(s)).sum::<usize>() / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn set_equality_ignores_capacity() {
        let mut a = VertexSet::with_capacity(200);
        let b = VertexSet::new();
        assert_eq!(a, b);
        a.insert(130);
        a.remove(130);
        assert_eq!(a, b);
        let c: VertexSet = [3, 70].into_iter().collect();
        let mut d = VertexSet::with_capacity(300);
        d.extend([70, 3]);
        assert_eq!(c, d);
    }

    pub(crate) fn cube() -> Graph {
        let mut edges = Vec::new();
        for u in 0..8usize {
            for b in 0..3 {
                let v = u ^ (1 << b);
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(8, &edges).unwrap()
    }

    fn set(vs: &[Vertex]) -> VertexSet {
        vs.iter().copied().collect()
    }

    #[test]
    fn build_cycle_and_single_vertex() {
        let c4 = cycle(4);
        assert_eq!(c4.edge_count(), 4);
        assert!((0..4).all(|v| c4.degree(v) == 2));
        let k1 = Graph::new(1, &[]).unwrap();
        assert_eq!((k1.n(), k1.edge_count()), (1, 0));
    }

    #[test]
    fn build_cube_degree_census() {
        let q3 = cube();
        assert_eq!(q3.edge_count(), 12);
        assert!((0..8).all(|v| q3.degree(v) == 3));
    }

    #[test]
    fn build_rejects_bad_pairs() {
        assert_eq!(Graph::new(3, &[(1, 1)]), Err(GraphError::Loop(1)));
        assert_eq!(
            Graph::new(3, &[(0, 3)]),
            Err(GraphError::OutOfRange { u: 0, v: 3, n: 3 })
        );
    }

    #[test]
    fn duplicate_edges_merge() {
        let g = Graph::new(2, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn delete_from_cycle() {
        let (p3, map) = cycle(4).delete_vertices(&set(&[1])).unwrap();
        assert_eq!(p3.edges(), vec![(0, 2), (1, 2)]);
        assert_eq!(map.get(1), None);
        assert_eq!(map.get(3), Some(2));

        let (k2, _) = cycle(4).delete_vertices(&set(&[1, 2])).unwrap();
        assert_eq!(k2.edges(), vec![(0, 1)]);

        let (same, map) = cube().delete_vertices(&VertexSet::new()).unwrap();
        assert_eq!(same, cube());
        assert_eq!(map, IdMap::identity(8));
    }

    #[test]
    fn identify_opposite_cycle_vertices() {
        let (p3, map) = cycle(4).identify(&[set(&[0, 2])]).unwrap();
        assert_eq!(p3.n(), 3);
        assert_eq!(p3.edge_count(), 2);
        assert_eq!(map.get(0), map.get(2));

        let c6 = cycle(6);
        let (g, _) = c6.identify(&[set(&[0, 2]), set(&[3, 5])]).unwrap();
        // Collapse oracle: count distinct image pairs directly.
        let image = |v: usize| match v {
            0 | 2 => 0,
            3 | 5 => 3,
            x => x,
        };
        let mut pairs: Vec<(usize, usize)> = c6
            .edges()
            .into_iter()
            .map(|(u, v)| {
                let (a, b) = (image(u), image(v));
                (a.min(b), a.max(b))
            })
            .collect();
        pairs.sort();
        pairs.dedup();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), pairs.len());

        assert_eq!(c6.identify(&[]).unwrap().0, c6);
    }

    #[test]
    fn identify_rejects_adjacent_members_and_overlap() {
        let c4 = cycle(4);
        assert_eq!(
            c4.identify(&[set(&[0, 1])]).unwrap_err(),
            GraphError::LoopWouldForm(0, 1)
        );
        assert_eq!(
            c4.identify(&[set(&[0, 2]), set(&[2])]).unwrap_err(),
            GraphError::OverlappingGroups(2)
        );
    }

    #[test]
    fn add_edge_cases() {
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let k3 = p3.add_edge(0, 2).unwrap();
        assert_eq!(k3.edge_count(), 3);
        let c4 = cycle(4);
        assert_eq!(c4.add_edge(0, 1).unwrap(), c4);
        let theta = cycle(6).add_edge(0, 3).unwrap();
        assert_eq!(theta.degree(0), 3);
        assert_eq!(theta.degree(3), 3);
        assert_eq!(c4.add_edge(2, 2), Err(GraphError::Loop(2)));
    }

    #[test]
    fn bipartite_checks() {
        assert_eq!(cycle(4).bipartition(), Some(vec![0, 1, 0, 1]));
        assert_eq!(cycle(3).bipartition(), None);
        let colors = cube().bipartition().unwrap();
        for v in 0..8usize {
            assert_eq!(colors[v] as u32, v.count_ones() % 2);
        }
    }

    #[test]
    fn forest_checks() {
        let c4 = cycle(4);
        assert!(c4.induces_forest(&set(&[0, 1, 2])));
        assert!(!c4.induces_forest(&set(&[0, 1, 2, 3])));
        // 000,001,011,010 is a face of the cube; add two more vertices.
        let q3 = cube();
        let s = set(&[0, 1, 3, 2, 4, 7]);
        let cycle = q3.find_cycle_in(&s).unwrap();
        assert!(cycle.len() >= 4);
        for w in cycle.windows(2) {
            assert!(q3.has_edge(w[0], w[1]));
        }
        assert!(q3.has_edge(cycle[0], *cycle.last().unwrap()));
    }

    #[test]
    fn bipartition_survives_surgery() {
        let c6 = cycle(6).with_bipartition(vec![0, 1, 0, 1, 0, 1]).unwrap();
        let (g, _) = c6.identify(&[set(&[0, 2])]).unwrap();
        assert!(g.stored_bipartition().is_some());
        let g = c6.add_edge(0, 2).unwrap();
        assert!(g.stored_bipartition().is_none());
        assert!(cycle(4).with_bipartition(vec![0, 0, 1, 1]).is_err());
    }
}
