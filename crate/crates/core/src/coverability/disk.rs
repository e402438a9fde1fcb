use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::admissibility::EXACT_VERTEX_LIMIT;
use super::pyramid::pyramid_disk;
use super::{count_successes, exact_rational, CoverabilityEstimate, EstimatorParams, Strategy};
use crate::complex::{ComplexKind, SimplicialComplex, TwoComplex};
use crate::error::{Error, Result};
use crate::hypergraph::{sorted2, sorted3, Hypergraph3, SkeletonGraph, Vertex};

/// A 4-cycle `c0 c1 c2 c3` given in cyclic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FourCycle(pub [Vertex; 4]);

impl FourCycle {
    pub fn new(a: Vertex, b: Vertex, c: Vertex, d: Vertex) -> Self {
        Self([a, b, c, d])
    }

    pub fn vertices(&self) -> [Vertex; 4] {
        self.0
    }

    /// The two ways to pick opposite apexes: `(apex, apex', end, end')`.
    pub fn apex_splits(&self) -> [(Vertex, Vertex, Vertex, Vertex); 2] {
        let [a, b, c, d] = self.0;
        [(a, c, b, d), (b, d, a, c)]
    }

    pub fn edges(&self) -> [(Vertex, Vertex); 4] {
        let [a, b, c, d] = self.0;
        [sorted2(a, b), sorted2(b, c), sorted2(c, d), sorted2(d, a)]
    }

    /// Smallest of the eight rotations and reflections.
    pub fn canonical(&self) -> Self {
        let mut best = self.0;
        for start in 0..4 {
            for dir in [1usize, 3] {
                let cand: [Vertex; 4] = std::array::from_fn(|i| self.0[(start + dir * i) % 4]);
                best = best.min(cand);
            }
        }
        Self(best)
    }

    pub fn as_complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_cycle(&self.0)
    }
}

fn pair_covered(h: &Hypergraph3, a: Vertex, b: Vertex) -> bool {
    h.contains_vertex(a) && h.incident(a).any(|t| t.contains(&b))
}

/// Checks that the four vertices are distinct and consecutive ones are
/// adjacent in the skeleton of `h`.
pub fn check_four_cycle(h: &Hypergraph3, c: &FourCycle) -> Result<()> {
    let vs = c.vertices();
    let distinct = vs.iter().collect::<BTreeSet<_>>().len() == 4;
    if distinct && c.edges().iter().all(|&(a, b)| pair_covered(h, a, b)) {
        Ok(())
    } else {
        Err(Error::NotACycle(vs.to_vec()))
    }
}

/// Link intersections for both apex splits of a cycle, computed once.
pub(crate) struct PyramidOracle {
    splits: Vec<(Vertex, Vertex, Vertex, Vertex, SkeletonGraph)>,
}

impl PyramidOracle {
    pub(crate) fn new(h: &Hypergraph3, c: &FourCycle) -> Result<Self> {
        let splits = c
            .apex_splits()
            .into_iter()
            .map(|(v, v2, w, w2)| Ok((v, v2, w, w2, h.link_intersection(v, v2)?)))
            .collect::<Result<_>>()?;
        Ok(Self { splits })
    }

    pub(crate) fn exists(&self, allowed: impl Fn(Vertex) -> bool + Copy) -> bool {
        self.splits
            .iter()
            .any(|(_, _, w, w2, l)| l.long_path_exists(*w, *w2, allowed))
    }

    pub(crate) fn find(&self, allowed: impl Fn(Vertex) -> bool + Copy) -> Option<TwoComplex> {
        self.splits.iter().find_map(|(v, v2, w, w2, l)| {
            let path = l.long_path(*w, *w2, allowed)?;
            Some(pyramid_disk(*v, *v2, &path).expect("path in link intersection avoids apexes"))
        })
    }
}

/// A boundary-inducing pyramid disk over `c` whose interior satisfies
/// `allowed`, trying both apex splits.
pub fn find_pyramid_disk(
    h: &Hypergraph3,
    c: &FourCycle,
    allowed: impl Fn(Vertex) -> bool + Copy,
) -> Result<Option<TwoComplex>> {
    check_four_cycle(h, c)?;
    Ok(PyramidOracle::new(h, c)?.find(allowed))
}

/// Monte Carlo estimate of `Pr[A_C]` for a 4-cycle `C`: the fraction of
/// samples `U` whose vertices contain the interior of a boundary-inducing
/// disk bounded by `C`.
pub fn sample_disk_coverability(
    h: &Hypergraph3,
    c: &FourCycle,
    params: &EstimatorParams,
) -> Result<CoverabilityEstimate> {
    params.validate()?;
    check_four_cycle(h, c)?;
    let oracle = PyramidOracle::new(h, c)?;
    let successes = count_successes(params, h.num_vertices(), |sample| {
        if oracle.exists(|x| sample[x]) {
            return true;
        }
        match params.strategy {
            Strategy::PyramidOnly => false,
            Strategy::ExhaustiveSmall { max_interior } => {
                find_small_disk(h, c, max_interior, |x| sample[x]).is_some()
            }
        }
    });
    Ok(CoverabilityEstimate::from_counts(
        successes,
        params.trials,
        params.epsilon,
    ))
}

/// Exact probability that a `p`-sample contains a pyramid interior over `c`
/// (either apex split). At most 25 vertices.
pub fn exact_pyramid_coverability(h: &Hypergraph3, c: &FourCycle, p: f64) -> Result<BigRational> {
    let n = h.num_vertices();
    if n > EXACT_VERTEX_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXACT_VERTEX_LIMIT,
        });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} not in [0,1]")));
    }
    check_four_cycle(h, c)?;
    let oracle = PyramidOracle::new(h, c)?;
    // Cycle vertices are never interior, so only the others are enumerated.
    let free: Vec<Vertex> = (0..n).filter(|x| !c.0.contains(x)).collect();
    let mut counts = vec![0u64; free.len() + 1];
    let mut sample = vec![false; n];
    for mask in 0u32..(1u32 << free.len()) {
        for (i, &x) in free.iter().enumerate() {
            sample[x] = mask >> i & 1 == 1;
        }
        if oracle.exists(|x| sample[x]) {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    let p = exact_rational(p);
    let q = BigRational::one() - &p;
    let mut total = BigRational::zero();
    for (k, &cnt) in counts.iter().enumerate() {
        if cnt > 0 {
            total += num_traits::pow(p.clone(), k)
                * num_traits::pow(q.clone(), free.len() - k)
                * BigInt::from(cnt);
        }
    }
    Ok(total)
}

/// Exhaustive search for a boundary-inducing disk `D ⊆ H` with `∂D = c`, at
/// most `max_interior` interior vertices, all satisfying `allowed`.
///
/// Grows the triangle set by always closing an open edge (an uncovered cycle
/// edge, or an interior edge with one triangle), so every such disk is
/// reachable. Exponential; intended for small instances and as an oracle.
pub fn find_small_disk(
    h: &Hypergraph3,
    c: &FourCycle,
    max_interior: usize,
    allowed: impl Fn(Vertex) -> bool,
) -> Option<TwoComplex> {
    if check_four_cycle(h, c).is_err() {
        return None;
    }
    let mut search = DiskSearch {
        h,
        cycle: c.0,
        cycle_edges: c.edges().into_iter().collect(),
        max_interior,
        max_faces: 2 * max_interior + 2,
        allowed: &allowed,
        triangles: Vec::new(),
        counts: BTreeMap::new(),
        interior: BTreeMap::new(),
    };
    search.run()
}

struct DiskSearch<'a, F: Fn(Vertex) -> bool> {
    h: &'a Hypergraph3,
    cycle: [Vertex; 4],
    cycle_edges: BTreeSet<(Vertex, Vertex)>,
    max_interior: usize,
    max_faces: usize,
    allowed: &'a F,
    triangles: Vec<[Vertex; 3]>,
    counts: BTreeMap<(Vertex, Vertex), usize>,
    interior: BTreeMap<Vertex, usize>,
}

impl<F: Fn(Vertex) -> bool> DiskSearch<'_, F> {
    fn open_edge(&self) -> Option<(Vertex, Vertex)> {
        if let Some(&e) = self
            .cycle_edges
            .iter()
            .find(|e| self.counts.get(e).copied().unwrap_or(0) == 0)
        {
            return Some(e);
        }
        self.counts
            .iter()
            .find(|(e, &k)| k == 1 && !self.cycle_edges.contains(e))
            .map(|(&e, _)| e)
    }

    fn is_chord(&self, e: (Vertex, Vertex)) -> bool {
        self.cycle.contains(&e.0) && self.cycle.contains(&e.1) && !self.cycle_edges.contains(&e)
    }

    fn fits(&self, t: [Vertex; 3]) -> bool {
        if self.triangles.contains(&t) {
            return false;
        }
        let [a, b, c] = t;
        [(a, b), (a, c), (b, c)].into_iter().all(|e| {
            let cap = if self.cycle_edges.contains(&e) { 1 } else { 2 };
            !self.is_chord(e) && self.counts.get(&e).copied().unwrap_or(0) < cap
        })
    }

    fn push(&mut self, t: [Vertex; 3]) {
        let [a, b, c] = t;
        for e in [(a, b), (a, c), (b, c)] {
            *self.counts.entry(e).or_insert(0) += 1;
        }
        for x in t {
            if !self.cycle.contains(&x) {
                *self.interior.entry(x).or_insert(0) += 1;
            }
        }
        self.triangles.push(t);
    }

    fn pop(&mut self) {
        let [a, b, c] = self.triangles.pop().expect("pop after push");
        for e in [(a, b), (a, c), (b, c)] {
            let k = self.counts.get_mut(&e).unwrap();
            *k -= 1;
            if *k == 0 {
                self.counts.remove(&e);
            }
        }
        for x in [a, b, c] {
            if let Some(k) = self.interior.get_mut(&x) {
                *k -= 1;
                if *k == 0 {
                    self.interior.remove(&x);
                }
            }
        }
    }

    fn run(&mut self) -> Option<TwoComplex> {
        let Some((a, b)) = self.open_edge() else {
            return self.accept();
        };
        if self.triangles.len() >= self.max_faces {
            return None;
        }
        let candidates: Vec<Vertex> = self
            .h
            .incident(a)
            .filter(|t| t.contains(&b))
            .map(|t| t.into_iter().find(|&x| x != a && x != b).unwrap())
            .collect();
        for z in candidates {
            let is_new_interior = !self.cycle.contains(&z) && !self.interior.contains_key(&z);
            if is_new_interior && (self.interior.len() >= self.max_interior || !(self.allowed)(z)) {
                continue;
            }
            let t = sorted3(a, b, z);
            if !self.fits(t) {
                continue;
            }
            self.push(t);
            if let Some(d) = self.run() {
                return Some(d);
            }
            self.pop();
        }
        None
    }

    fn accept(&self) -> Option<TwoComplex> {
        let d = TwoComplex::new(self.triangles.iter().copied());
        let c = d.classify();
        if c.kind != ComplexKind::Disk {
            return None;
        }
        let boundary: BTreeSet<_> = d.boundary().edges.into_iter().collect();
        if boundary != self.cycle_edges || d.is_boundary_inducing() != Ok(true) {
            return None;
        }
        Some(d)
    }
}
