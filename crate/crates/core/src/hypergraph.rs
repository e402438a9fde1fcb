//! 3-uniform hypergraphs and the simple graphs derived from them.
//!
//! Vertices are dense indices `0..n`. A [`SkeletonGraph`] keeps the same index
//! space as the hypergraph it came from and marks removed vertices as absent,
//! so a link graph `H_u` can be queried with the original vertex ids.

use std::collections::HashSet;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Sorts a triple into canonical order.
#[inline]
pub fn sorted3(a: Vertex, b: Vertex, c: Vertex) -> [Vertex; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

#[inline]
pub fn sorted2(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A 3-uniform hypergraph on the vertex set `0..n`.
///
/// Immutable after construction. Triples are stored sorted, with a hash index
/// for membership and a per-vertex incidence list.
#[derive(Debug, Clone)]
pub struct Hypergraph3 {
    n: usize,
    edges: Vec<[Vertex; 3]>,
    index: HashSet<[Vertex; 3]>,
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for Hypergraph3 {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.index == other.index
    }
}

impl Eq for Hypergraph3 {}

impl Hypergraph3 {
    /// Builds a hypergraph, rejecting degenerate or repeated triples.
    pub fn new(n: usize, triples: impl IntoIterator<Item = [Vertex; 3]>) -> Result<Self> {
        let mut edges = Vec::new();
        let mut index = HashSet::new();
        let mut incidence = vec![Vec::new(); n];
        for t in triples {
            for &x in &t {
                if x >= n {
                    return Err(Error::UnknownVertex(x));
                }
            }
            let s = sorted3(t[0], t[1], t[2]);
            if s[0] == s[1] || s[1] == s[2] {
                return Err(Error::DegenerateEdge(t.to_vec()));
            }
            if !index.insert(s) {
                return Err(Error::DuplicateEdge(s.to_vec()));
            }
            let id = edges.len();
            for &x in &s {
                incidence[x].push(id);
            }
            edges.push(s);
        }
        Ok(Self {
            n,
            edges,
            index,
            incidence,
        })
    }

    /// The complete 3-uniform hypergraph `K_n^(3)`.
    pub fn complete(n: usize) -> Self {
        let mut triples = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    triples.push([a, b, c]);
                }
            }
        }
        Self::new(n, triples).expect("complete hypergraph is well formed")
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Triples in insertion order, each sorted.
    pub fn edges(&self) -> &[[Vertex; 3]] {
        &self.edges
    }

    pub fn contains(&self, a: Vertex, b: Vertex, c: Vertex) -> bool {
        self.index.contains(&sorted3(a, b, c))
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        v < self.n
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// Triples containing `v`.
    pub fn incident(&self, v: Vertex) -> impl Iterator<Item = [Vertex; 3]> + '_ {
        self.incidence[v].iter().map(move |&i| self.edges[i])
    }

    /// Number of triples containing `v`, i.e. `e(H_v)`.
    pub fn degree(&self, v: Vertex) -> usize {
        self.incidence[v].len()
    }

    /// The 1-skeleton: every pair covered by some triple.
    pub fn skeleton(&self) -> SkeletonGraph {
        let mut pairs = Vec::with_capacity(self.edges.len() * 3);
        for &[a, b, c] in &self.edges {
            pairs.push((a, b));
            pairs.push((a, c));
            pairs.push((b, c));
        }
        SkeletonGraph::from_pairs_dedup(vec![true; self.n], pairs)
    }

    /// The link graph `H_u` on `V(H) \ {u}`.
    pub fn link(&self, u: Vertex) -> Result<SkeletonGraph> {
        self.check_vertex(u)?;
        let mut present = vec![true; self.n];
        present[u] = false;
        let pairs = self.incident(u).map(|t| opposite(t, u)).collect();
        Ok(SkeletonGraph::from_pairs_dedup(present, pairs))
    }

    /// `H_v ∩ H_{v'}` on `V(H) \ {v, v'}`.
    pub fn link_intersection(&self, v: Vertex, v2: Vertex) -> Result<SkeletonGraph> {
        self.check_vertex(v)?;
        self.check_vertex(v2)?;
        if v == v2 {
            return Err(Error::RepeatedVertex(v));
        }
        let mut present = vec![true; self.n];
        present[v] = false;
        present[v2] = false;
        // Iterate over the sparser of the two links.
        let (a, b) = if self.degree(v) <= self.degree(v2) {
            (v, v2)
        } else {
            (v2, v)
        };
        let pairs = self
            .incident(a)
            .map(|t| opposite(t, a))
            .filter(|&(x, y)| x != b && y != b && self.contains(b, x, y))
            .collect();
        Ok(SkeletonGraph::from_pairs_dedup(present, pairs))
    }
}

/// The pair of `t` opposite to `v`.
#[inline]
fn opposite(t: [Vertex; 3], v: Vertex) -> (Vertex, Vertex) {
    match t {
        [a, b, c] if a == v => (b, c),
        [a, b, c] if b == v => (a, c),
        [a, b, _] => (a, b),
    }
}

/// A simple graph on a subset of `0..capacity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonGraph {
    present: Vec<bool>,
    adj: Vec<Vec<Vertex>>,
    num_edges: usize,
}

impl SkeletonGraph {
    /// Builds a graph on all of `0..n`, rejecting loops and repeated edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        Self::with_vertices(vec![true; n], edges)
    }

    /// Builds a graph on the vertices flagged in `present`.
    pub fn with_vertices(
        present: Vec<bool>,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self> {
        let n = present.len();
        let mut seen = HashSet::new();
        let mut pairs = Vec::new();
        for (a, b) in edges {
            for x in [a, b] {
                if x >= n || !present[x] {
                    return Err(Error::UnknownVertex(x));
                }
            }
            if a == b {
                return Err(Error::DegenerateEdge(vec![a, b]));
            }
            let e = sorted2(a, b);
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(vec![e.0, e.1]));
            }
            pairs.push(e);
        }
        Ok(Self::from_pairs_dedup(present, pairs))
    }

    /// Pairs are assumed valid; duplicates are merged.
    pub(crate) fn from_pairs_dedup(present: Vec<bool>, pairs: Vec<(Vertex, Vertex)>) -> Self {
        let n = present.len();
        let mut adj = vec![Vec::new(); n];
        for (a, b) in pairs {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut num_edges = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            num_edges += list.len();
        }
        Self {
            present,
            adj,
            num_edges: num_edges / 2,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_pairs_dedup(vec![true; n], Vec::new())
    }

    /// Size of the underlying index space (not the number of vertices).
    pub fn capacity(&self) -> usize {
        self.present.len()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        v < self.present.len() && self.present[v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.present.len()).filter(move |&v| self.present[v])
    }

    pub fn num_vertices(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        a < self.adj.len() && self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    /// `N_G(vs)`: vertices adjacent to every query vertex.
    pub fn common_neighborhood(&self, vs: &[Vertex]) -> Result<Vec<Vertex>> {
        for (i, &v) in vs.iter().enumerate() {
            if !self.contains_vertex(v) {
                return Err(Error::UnknownVertex(v));
            }
            if vs[..i].contains(&v) {
                return Err(Error::RepeatedVertex(v));
            }
        }
        let Some((&first, rest)) = vs.split_first() else {
            return Ok(self.vertices().collect());
        };
        let mut common: Vec<Vertex> = self.adj[first].clone();
        for &v in rest {
            common.retain(|w| self.adj[v].binary_search(w).is_ok());
        }
        Ok(common)
    }

    /// `codeg_G(vs) = |N_G(vs)|`.
    pub fn codegree(&self, vs: &[Vertex]) -> Result<usize> {
        self.common_neighborhood(vs).map(|c| c.len())
    }

    /// Whether `a` and `b` are joined by a path of length at least 2 whose
    /// internal vertices satisfy `allowed` (and are never `a` or `b`).
    ///
    /// A shortest walk in the graph with the edge `ab` removed is a simple path
    /// with at least one internal vertex, so plain BFS suffices.
    pub fn long_path_exists(&self, a: Vertex, b: Vertex, allowed: impl Fn(Vertex) -> bool) -> bool {
        self.long_path(a, b, allowed).is_some()
    }

    /// A shortest path `a = x_0, ..., x_k = b` with `k >= 2` and internal
    /// vertices satisfying `allowed`.
    pub fn long_path(
        &self,
        a: Vertex,
        b: Vertex,
        allowed: impl Fn(Vertex) -> bool,
    ) -> Option<Vec<Vertex>> {
        if a == b || !self.contains_vertex(a) || !self.contains_vertex(b) {
            return None;
        }
        let n = self.capacity();
        let mut parent = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        parent[a] = a;
        for &x in &self.adj[a] {
            if x != b && allowed(x) && parent[x] == usize::MAX {
                parent[x] = a;
                queue.push_back(x);
            }
        }
        while let Some(x) = queue.pop_front() {
            if self.has_edge(x, b) {
                let mut path = vec![b, x];
                let mut cur = x;
                while parent[cur] != cur {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &y in &self.adj[x] {
                if y != b && parent[y] == usize::MAX && allowed(y) {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        None
    }
}
