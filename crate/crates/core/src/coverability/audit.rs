use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::admissibility::{admissibility_profile, AdmissibilityProfile, EXACT_VERTEX_LIMIT};
use super::{exact_rational, format_fraction};
use crate::error::{Error, Result};
use crate::hypergraph::{SkeletonGraph, Vertex};

/// An unlabeled path `x y z` with centre `y`, stored with `x < z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathOfLength2 {
    pub x: Vertex,
    pub y: Vertex,
    pub z: Vertex,
}

/// Result of a weighted audit: `Σ 1/deg(y)` over the flagged paths against
/// the bound `3n / (2 p² ε)` (with `p = ε = 1` for the plain cycle audit).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub n: usize,
    pub p: BigRational,
    pub epsilon: BigRational,
    pub weighted_sum: BigRational,
    /// Common denominator used when printing the sum: the lcm of the centre
    /// degrees of the flagged paths, so `102/15` prints as such.
    pub denominator: BigInt,
    pub bound: BigRational,
    pub holds: bool,
    pub inadmissible: Vec<PathOfLength2>,
}

impl AuditReport {
    fn build(
        g: &SkeletonGraph,
        p: BigRational,
        epsilon: BigRational,
        mut inadmissible: Vec<PathOfLength2>,
    ) -> Self {
        inadmissible.sort_unstable();
        let mut weighted_sum = BigRational::zero();
        let mut denominator = BigInt::one();
        for path in &inadmissible {
            let d = BigInt::from(g.degree(path.y));
            weighted_sum += BigRational::new(BigInt::one(), d.clone());
            denominator = denominator.lcm(&d);
        }
        let n = g.num_vertices();
        let bound = BigRational::from_integer(BigInt::from(3 * n))
            / (BigRational::from_integer(2.into()) * &p * &p * &epsilon);
        let holds = weighted_sum < bound;
        Self {
            n,
            p,
            epsilon,
            weighted_sum,
            denominator,
            bound,
            holds,
            inadmissible,
        }
    }

    /// The weighted sum as `num/den` over [`AuditReport::denominator`].
    pub fn weighted_sum_fraction(&self) -> String {
        let scale = &self.denominator / self.weighted_sum.denom();
        format!("{}/{}", self.weighted_sum.numer() * scale, self.denominator)
    }

    pub fn bound_fraction(&self) -> String {
        format_fraction(&self.bound)
    }
}

/// Paths `x y z` such that `G - y` has no path of length at least 2 from `x`
/// to `z`, i.e. paths lying on no cycle of length at least 4.
///
/// For each centre `y` this computes the components and bridges of `G - y`
/// once: `x` and `z` are separated iff they lie in different components or
/// `xz` is an edge and a bridge.
pub fn inadmissible_p2_audit(g: &SkeletonGraph) -> AuditReport {
    let mut flagged = Vec::new();
    for y in g.vertices() {
        let nbrs = g.neighbors(y);
        if nbrs.len() < 2 {
            continue;
        }
        let (comp, bridges) = components_and_bridges(g, y);
        for (i, &x) in nbrs.iter().enumerate() {
            for &z in &nbrs[i + 1..] {
                let separated = comp[x] != comp[z] || bridges.contains(&(x, z));
                if separated {
                    flagged.push(PathOfLength2 { x, y, z });
                }
            }
        }
    }
    AuditReport::build(g, BigRational::one(), BigRational::one(), flagged)
}

/// Same result as [`inadmissible_p2_audit`], one breadth-first search per path.
pub fn inadmissible_p2_audit_brute(g: &SkeletonGraph) -> AuditReport {
    let mut flagged = Vec::new();
    for y in g.vertices() {
        let nbrs = g.neighbors(y);
        for (i, &x) in nbrs.iter().enumerate() {
            for &z in &nbrs[i + 1..] {
                if !g.long_path_exists(x, z, |w| w != y) {
                    flagged.push(PathOfLength2 { x, y, z });
                }
            }
        }
    }
    AuditReport::build(g, BigRational::one(), BigRational::one(), flagged)
}

/// Component labels and bridge set (as `(a, b)` with `a < b`) of `G - y`.
fn components_and_bridges(g: &SkeletonGraph, y: Vertex) -> (Vec<usize>, HashSet<(Vertex, Vertex)>) {
    let n = g.capacity();
    let mut comp = vec![usize::MAX; n];
    let mut disc = vec![0usize; n];
    let mut low = vec![0usize; n];
    let mut bridges = HashSet::new();
    let mut time = 1;
    let mut label = 0;
    for root in g.vertices() {
        if root == y || disc[root] != 0 {
            continue;
        }
        // Iterative DFS; each frame is (vertex, parent, next neighbor index).
        let mut stack: Vec<(Vertex, Vertex, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        comp[root] = label;
        while let Some(frame) = stack.last_mut() {
            let (v, parent, idx) = *frame;
            let nbrs = g.neighbors(v);
            if idx < nbrs.len() {
                frame.2 += 1;
                let w = nbrs[idx];
                if w == y || w == parent {
                    continue;
                }
                if disc[w] == 0 {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    comp[w] = label;
                    stack.push((w, v, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        bridges.insert((parent.min(v), parent.max(v)));
                    }
                }
            }
        }
        label += 1;
    }
    (comp, bridges)
}

/// Paths whose exact admissibility probability is below `1 - ε`, weighted
/// against `3n / (2 p² ε)`. Graphs with more than 25 vertices are rejected.
pub fn weighted_inadmissibility_audit(
    g: &SkeletonGraph,
    p: f64,
    epsilon: f64,
) -> Result<AuditReport> {
    Ok(weighted_inadmissibility_grid(g, &[(p, epsilon)])?.remove(0))
}

/// [`weighted_inadmissibility_audit`] over several `(p, ε)` pairs, computing
/// each path's subset profile once.
pub fn weighted_inadmissibility_grid(
    g: &SkeletonGraph,
    grid: &[(f64, f64)],
) -> Result<Vec<AuditReport>> {
    let n = g.num_vertices();
    if n > EXACT_VERTEX_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXACT_VERTEX_LIMIT,
        });
    }
    for &(p, e) in grid {
        if !(p > 0.0 && p <= 1.0 && e > 0.0 && e <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "audit needs 0 < p <= 1 and 0 < epsilon <= 1, got ({p}, {e})"
            )));
        }
    }
    let mut profiles: HashMap<PathOfLength2, AdmissibilityProfile> = HashMap::new();
    for y in g.vertices() {
        let nbrs = g.neighbors(y);
        for (i, &x) in nbrs.iter().enumerate() {
            for &z in &nbrs[i + 1..] {
                let profile = if g.long_path_exists(x, z, |w| w != y) {
                    admissibility_profile(g, x, y, z)?
                } else {
                    // No sample can help; skip the enumeration.
                    let free = n.saturating_sub(3);
                    AdmissibilityProfile {
                        free,
                        counts: vec![0; free + 1],
                    }
                };
                profiles.insert(PathOfLength2 { x, y, z }, profile);
            }
        }
    }
    Ok(grid
        .iter()
        .map(|&(p, e)| {
            let (p, e) = (exact_rational(p), exact_rational(e));
            let threshold = BigRational::one() - &e;
            let flagged = profiles
                .iter()
                .filter(|(_, prof)| prof.probability(&p) < threshold)
                .map(|(&path, _)| path)
                .collect();
            AuditReport::build(g, p, e, flagged)
        })
        .collect())
}
