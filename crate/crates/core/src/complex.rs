//! Pure 2-dimensional simplicial complexes given by their triangles.
//!
//! Recognition is combinatorial: a connected complex in which every edge lies
//! in at most two triangles and every vertex link is a single path or a single
//! cycle is a surface (with boundary when some link is a path). Among those,
//! Euler characteristic and the number of boundary cycles pick out disks, and
//! closed surfaces are told apart by Euler characteristic and orientability.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{sorted2, sorted3, Vertex};

pub type Edge = (Vertex, Vertex);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoComplex {
    triangles: Vec<[Vertex; 3]>,
    edges: BTreeMap<Edge, usize>,
    vertices: BTreeSet<Vertex>,
}

impl TwoComplex {
    /// Builds a complex from triangles; repeated triangles are merged.
    ///
    /// Panics on a triangle that repeats a vertex. Use [`TwoComplex::try_new`]
    /// for untrusted input.
    pub fn new(triangles: impl IntoIterator<Item = [Vertex; 3]>) -> Self {
        let mut ts: Vec<[Vertex; 3]> = triangles
            .into_iter()
            .map(|[a, b, c]| sorted3(a, b, c))
            .collect();
        ts.sort_unstable();
        ts.dedup();
        for t in &ts {
            assert!(t[0] != t[1] && t[1] != t[2], "degenerate triangle {t:?}");
        }
        Self::from_sorted(ts)
    }

    /// Like [`TwoComplex::new`] but rejects degenerate and repeated triangles.
    pub fn try_new(triangles: impl IntoIterator<Item = [Vertex; 3]>) -> Result<Self> {
        let mut ts = Vec::new();
        for [a, b, c] in triangles {
            let t = sorted3(a, b, c);
            if t[0] == t[1] || t[1] == t[2] {
                return Err(Error::DegenerateEdge(vec![a, b, c]));
            }
            ts.push(t);
        }
        ts.sort_unstable();
        for w in ts.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateEdge(w[0].to_vec()));
            }
        }
        Ok(Self::from_sorted(ts))
    }

    fn from_sorted(triangles: Vec<[Vertex; 3]>) -> Self {
        let mut edges = BTreeMap::new();
        let mut vertices = BTreeSet::new();
        for &[a, b, c] in &triangles {
            for e in [(a, b), (a, c), (b, c)] {
                *edges.entry(e).or_insert(0) += 1;
            }
            vertices.extend([a, b, c]);
        }
        Self {
            triangles,
            edges,
            vertices,
        }
    }

    /// Sorted triangles, each sorted.
    pub fn triangles(&self) -> &[[Vertex; 3]] {
        &self.triangles
    }

    /// Edges with the number of triangles containing each.
    pub fn edge_incidence(&self) -> &BTreeMap<Edge, usize> {
        &self.edges
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn contains_triangle(&self, t: [Vertex; 3]) -> bool {
        self.triangles
            .binary_search(&sorted3(t[0], t[1], t[2]))
            .is_ok()
    }

    pub fn contains_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.edges.contains_key(&sorted2(a, b))
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Union of triangle sets.
    pub fn union(&self, other: &TwoComplex) -> TwoComplex {
        TwoComplex::new(self.triangles.iter().chain(other.triangles.iter()).copied())
    }

    /// The link of `v`: for every triangle `vab`, the edge `ab`.
    pub fn vertex_link(&self, v: Vertex) -> Vec<Edge> {
        self.triangles
            .iter()
            .filter(|t| t.contains(&v))
            .map(|t| {
                let mut rest = t.iter().copied().filter(|&x| x != v);
                let a = rest.next().unwrap();
                let b = rest.next().unwrap();
                (a, b)
            })
            .collect()
    }

    /// Edges lying in exactly one triangle, and the cyclic vertex order when
    /// they form one simple cycle.
    pub fn boundary(&self) -> Boundary {
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|&(_, &c)| c == 1)
            .map(|(&e, _)| e)
            .collect();
        let cycle = single_cycle(&edges);
        Boundary { edges, cycle }
    }

    pub fn classify(&self) -> Classification {
        let euler = self.euler_characteristic();
        let other = |boundary_components| Classification {
            kind: ComplexKind::Other,
            euler,
            orientable: None,
            boundary_components,
        };
        let boundary = self.boundary();
        let boundary_components = count_components(&boundary.edges);
        if self.is_empty() || !self.is_connected() {
            return other(boundary_components);
        }
        if self.edges.values().any(|&c| c > 2) {
            return other(boundary_components);
        }
        let mut all_cycles = true;
        for &v in &self.vertices {
            match link_shape(&self.vertex_link(v)) {
                LinkShape::Cycle => {}
                LinkShape::Path => all_cycles = false,
                LinkShape::Neither => return other(boundary_components),
            }
        }
        let orientable = Some(self.propagate_orientation());
        if boundary.edges.is_empty() {
            debug_assert!(all_cycles);
            return Classification {
                kind: ComplexKind::ClosedSurface,
                euler,
                orientable,
                boundary_components: 0,
            };
        }
        let kind = if boundary_components == 1 && euler == 1 {
            ComplexKind::Disk
        } else {
            ComplexKind::SurfaceWithBoundary
        };
        Classification {
            kind,
            euler,
            orientable,
            boundary_components,
        }
    }

    /// Orientability of a closed surface.
    pub fn orientability(&self) -> Result<bool> {
        if self.classify().kind != ComplexKind::ClosedSurface {
            return Err(Error::NotClosed);
        }
        Ok(self.propagate_orientation())
    }

    /// A disk with at least two triangles whose boundary cycle is an induced
    /// subgraph of its 1-skeleton.
    pub fn is_boundary_inducing(&self) -> Result<bool> {
        if self.classify().kind != ComplexKind::Disk {
            return Err(Error::NotADisk);
        }
        if self.triangles.len() < 2 {
            return Ok(false);
        }
        let boundary: BTreeSet<Vertex> = self
            .edges
            .iter()
            .filter(|&(_, &c)| c == 1)
            .flat_map(|(&(a, b), _)| [a, b])
            .collect();
        Ok(self
            .edges
            .iter()
            .all(|(&(a, b), &c)| c == 1 || !(boundary.contains(&a) && boundary.contains(&b))))
    }

    /// Vertices, edges and triangles of the generated complex.
    pub fn closure(&self) -> SimplicialComplex {
        SimplicialComplex {
            vertices: self.vertices.clone(),
            edges: self.edges.keys().copied().collect(),
            triangles: self.triangles.iter().copied().collect(),
        }
    }

    fn is_connected(&self) -> bool {
        let edges: Vec<Edge> = self.edges.keys().copied().collect();
        count_components(&edges) == 1
    }

    /// Tries to orient every triangle so that each edge shared by two
    /// triangles is traversed once in each direction. Edges in more than two
    /// triangles are ignored; callers only use this on surfaces.
    fn propagate_orientation(&self) -> bool {
        let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
        for (i, &[a, b, c]) in self.triangles.iter().enumerate() {
            for e in [(a, b), (b, c), (a, c)] {
                by_edge.entry(e).or_default().push(i);
            }
        }
        // Direction of edge (x<y) in the cyclic order (a,b,c): +1 for ab, bc; -1 for ac.
        let dir = |t: [Vertex; 3], e: Edge| -> i8 {
            if e == (t[0], t[2]) {
                -1
            } else {
                1
            }
        };
        let mut sign: Vec<i8> = vec![0; self.triangles.len()];
        for start in 0..self.triangles.len() {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                let t = self.triangles[i];
                for e in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                    let sharing = &by_edge[&e];
                    if sharing.len() != 2 {
                        continue;
                    }
                    let j = if sharing[0] == i {
                        sharing[1]
                    } else {
                        sharing[0]
                    };
                    let want = -sign[i] * dir(t, e) * dir(self.triangles[j], e);
                    if sign[j] == 0 {
                        sign[j] = want;
                        queue.push_back(j);
                    } else if sign[j] != want {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundary {
    pub edges: Vec<Edge>,
    /// Cyclic order starting at the smallest vertex, heading to its smaller
    /// neighbor; `None` unless the edges form exactly one simple cycle.
    pub cycle: Option<Vec<Vertex>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComplexKind {
    Disk,
    ClosedSurface,
    SurfaceWithBoundary,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: ComplexKind,
    pub euler: i64,
    pub orientable: Option<bool>,
    pub boundary_components: usize,
}

impl Classification {
    /// Names the closed surface for the three cases the search targets.
    pub fn surface_name(&self) -> Option<&'static str> {
        if self.kind != ComplexKind::ClosedSurface {
            return None;
        }
        match (self.euler, self.orientable) {
            (2, Some(true)) => Some("sphere"),
            (0, Some(true)) => Some("torus"),
            (1, Some(false)) => Some("projective-plane"),
            _ => None,
        }
    }
}

enum LinkShape {
    Path,
    Cycle,
    Neither,
}

fn link_shape(edges: &[Edge]) -> LinkShape {
    let mut degree: BTreeMap<Vertex, usize> = BTreeMap::new();
    for &(a, b) in edges {
        *degree.entry(a).or_default() += 1;
        *degree.entry(b).or_default() += 1;
    }
    if edges.is_empty() || degree.values().any(|&d| d > 2) || count_components(edges) != 1 {
        return LinkShape::Neither;
    }
    if edges.len() == degree.len() {
        LinkShape::Cycle
    } else {
        LinkShape::Path
    }
}

/// Connected components of the graph spanned by `edges` (isolated vertices
/// are not part of it).
fn count_components(edges: &[Edge]) -> usize {
    let mut ids: HashMap<Vertex, usize> = HashMap::new();
    for &(a, b) in edges {
        let n = ids.len();
        ids.entry(a).or_insert(n);
        let n = ids.len();
        ids.entry(b).or_insert(n);
    }
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = ids.len();
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, ids[&a]), find(&mut parent, ids[&b]));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components
}

fn single_cycle(edges: &[Edge]) -> Option<Vec<Vertex>> {
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if edges.len() < 3 || adj.values().any(|n| n.len() != 2) || count_components(edges) != 1 {
        return None;
    }
    let (&start, nbrs) = adj.iter().next()?;
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = *nbrs.iter().min().unwrap();
    while cur != start {
        cycle.push(cur);
        let next = adj[&cur].iter().copied().find(|&x| x != prev).unwrap();
        prev = cur;
        cur = next;
    }
    Some(cycle)
}

/// A general simplicial complex of dimension at most 2, used to compare
/// intersections of disks with 1-dimensional complexes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub vertices: BTreeSet<Vertex>,
    pub edges: BTreeSet<Edge>,
    pub triangles: BTreeSet<[Vertex; 3]>,
}

impl SimplicialComplex {
    /// The 1-complex of a closed walk given by its cyclic vertex sequence.
    pub fn from_cycle(cycle: &[Vertex]) -> Self {
        let k = cycle.len();
        Self {
            vertices: cycle.iter().copied().collect(),
            edges: (0..k)
                .map(|i| sorted2(cycle[i], cycle[(i + 1) % k]))
                .collect(),
            triangles: BTreeSet::new(),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            vertices: self
                .vertices
                .intersection(&other.vertices)
                .copied()
                .collect(),
            edges: self.edges.intersection(&other.edges).copied().collect(),
            triangles: self
                .triangles
                .intersection(&other.triangles)
                .copied()
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// The simplices common to both complexes, in every dimension.
pub fn complex_intersection(x1: &TwoComplex, x2: &TwoComplex) -> SimplicialComplex {
    x1.closure().intersection(&x2.closure())
}
