use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hypergraph::{SkeletonGraph, Vertex};

/// Role of a vertex of `Γ_t`; indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GammaRole {
    Single(usize),
    Pair(usize, usize),
    Triple(usize, usize, usize),
}

impl GammaRole {
    /// `v1`, `v1-2`, `v1-2-3` (1-based).
    pub fn label(&self) -> String {
        match *self {
            GammaRole::Single(i) => format!("v{}", i + 1),
            GammaRole::Pair(i, j) => format!("v{}-{}", i + 1, j + 1),
            GammaRole::Triple(i, j, k) => format!("v{}-{}-{}", i + 1, j + 1, k + 1),
        }
    }
}

/// `Γ_t`: vertices `v_i`, `v_ij`, `v_ijk`; `v_ij` is joined to `v_i` and
/// `v_j`, and `v_ijk` to `v_i`, `v_j`, `v_k`.
#[derive(Debug, Clone)]
pub struct GammaGraph {
    pub t: usize,
    /// Role of each vertex: singletons, then pairs, then triples, each in
    /// lexicographic order.
    pub roles: Vec<GammaRole>,
    pub graph: SkeletonGraph,
    /// Special cycles `v_i v_ij v_j v_ijk`, grouped by triple `i<j<k` and
    /// ordered `ij`, `ik`, `jk` within a triple.
    pub special_cycles: Vec<[Vertex; 4]>,
    index: HashMap<GammaRole, Vertex>,
}

impl GammaGraph {
    pub fn vertex(&self, role: GammaRole) -> Option<Vertex> {
        self.index.get(&role).copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.roles.len()
    }

    /// Two-colouring check by breadth-first search.
    pub fn is_bipartite(&self) -> bool {
        let n = self.roles.len();
        let mut colour = vec![u8::MAX; n];
        for s in 0..n {
            if colour[s] != u8::MAX {
                continue;
            }
            colour[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in self.graph.neighbors(x) {
                    if colour[y] == u8::MAX {
                        colour[y] = 1 - colour[x];
                        queue.push_back(y);
                    } else if colour[y] == colour[x] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn gamma(t: usize) -> Result<GammaGraph> {
    if t < 3 {
        return Err(Error::InvalidParameter(format!(
            "Γ_t needs t >= 3, got {t}"
        )));
    }
    let mut roles = Vec::new();
    roles.extend((0..t).map(GammaRole::Single));
    for i in 0..t {
        for j in i + 1..t {
            roles.push(GammaRole::Pair(i, j));
        }
    }
    for i in 0..t {
        for j in i + 1..t {
            for k in j + 1..t {
                roles.push(GammaRole::Triple(i, j, k));
            }
        }
    }
    let index: HashMap<GammaRole, Vertex> =
        roles.iter().enumerate().map(|(v, &r)| (r, v)).collect();
    let single = |i: usize| index[&GammaRole::Single(i)];
    let mut edges = Vec::new();
    let mut special_cycles = Vec::new();
    for (x, &role) in roles.iter().enumerate() {
        match role {
            GammaRole::Single(_) => {}
            GammaRole::Pair(i, j) => edges.extend([(x, single(i)), (x, single(j))]),
            GammaRole::Triple(i, j, k) => {
                edges.extend([(x, single(i)), (x, single(j)), (x, single(k))]);
                for (a, b) in [(i, j), (i, k), (j, k)] {
                    let pair = index[&GammaRole::Pair(a, b)];
                    special_cycles.push([single(a), pair, single(b), x]);
                }
            }
        }
    }
    let graph = SkeletonGraph::new(roles.len(), edges)?;
    Ok(GammaGraph {
        t,
        roles,
        graph,
        special_cycles,
        index,
    })
}
