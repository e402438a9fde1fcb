use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{count_successes, exact_rational, CoverabilityEstimate, EstimatorParams};
use crate::error::{Error, Result};
use crate::hypergraph::{SkeletonGraph, Vertex};

/// Largest graph accepted by the subset-enumeration routines.
pub const EXACT_VERTEX_LIMIT: usize = 25;

fn check_path(g: &SkeletonGraph, w: Vertex, u: Vertex, w2: Vertex) -> Result<()> {
    let ok = w != w2
        && g.contains_vertex(w)
        && g.contains_vertex(u)
        && g.contains_vertex(w2)
        && g.has_edge(w, u)
        && g.has_edge(u, w2);
    if ok {
        Ok(())
    } else {
        Err(Error::NotAPath(vec![w, u, w2]))
    }
}

/// Monte Carlo estimate of `Pr[A_{wuw'}]`: sample `U ⊆ V(G) \ {u}` and ask for
/// a path `w ... w'` of length at least 2 with all internal vertices in `U`.
pub fn sample_admissibility(
    g: &SkeletonGraph,
    w: Vertex,
    u: Vertex,
    w2: Vertex,
    params: &EstimatorParams,
) -> Result<CoverabilityEstimate> {
    params.validate()?;
    check_path(g, w, u, w2)?;
    let successes = count_successes(params, g.capacity(), |sample| {
        g.long_path_exists(w, w2, |x| x != u && sample[x])
    });
    Ok(CoverabilityEstimate::from_counts(
        successes,
        params.trials,
        params.epsilon,
    ))
}

/// For each `k`, how many `k`-subsets of `V(G) \ {u, w, w'}` make the event
/// hold. Membership of `w` and `w'` themselves never matters, so the exact
/// probability for any `p` is `Σ_k counts[k] p^k (1-p)^(free-k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityProfile {
    pub free: usize,
    pub counts: Vec<u64>,
}

impl AdmissibilityProfile {
    pub fn probability(&self, p: &BigRational) -> BigRational {
        let q = BigRational::one() - p;
        let mut total = BigRational::zero();
        for (k, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = num_traits::pow(p.clone(), k) * num_traits::pow(q.clone(), self.free - k);
            total += term * BigInt::from(c);
        }
        total
    }
}

pub fn admissibility_profile(
    g: &SkeletonGraph,
    w: Vertex,
    u: Vertex,
    w2: Vertex,
) -> Result<AdmissibilityProfile> {
    let n = g.num_vertices();
    if n > EXACT_VERTEX_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXACT_VERTEX_LIMIT,
        });
    }
    check_path(g, w, u, w2)?;
    let free: Vec<Vertex> = g
        .vertices()
        .filter(|&x| x != u && x != w && x != w2)
        .collect();
    let mut bit = vec![usize::MAX; g.capacity()];
    for (i, &x) in free.iter().enumerate() {
        bit[x] = i;
    }
    let mask_of = |list: &[Vertex]| -> u32 {
        list.iter()
            .filter(|&&x| bit[x] != usize::MAX)
            .fold(0u32, |m, &x| m | (1 << bit[x]))
    };
    let adj: Vec<u32> = free.iter().map(|&x| mask_of(g.neighbors(x))).collect();
    let start = mask_of(g.neighbors(w));
    let target = mask_of(g.neighbors(w2));

    let mut counts = vec![0u64; free.len() + 1];
    for sample in 0u32..(1u32 << free.len()) {
        // Grow the set of sampled vertices reachable from w through the sample.
        let mut reach = start & sample;
        let mut frontier = reach;
        while frontier != 0 && reach & target == 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[i];
            }
            next &= sample & !reach;
            reach |= next;
            frontier = next;
        }
        if reach & target != 0 {
            counts[sample.count_ones() as usize] += 1;
        }
    }
    Ok(AdmissibilityProfile {
        free: free.len(),
        counts,
    })
}

/// Exact `Pr[A_{wuw'}]` by subset enumeration (at most 25 vertices).
pub fn exact_admissibility(
    g: &SkeletonGraph,
    w: Vertex,
    u: Vertex,
    w2: Vertex,
    p: f64,
) -> Result<BigRational> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} not in [0,1]")));
    }
    Ok(admissibility_profile(g, w, u, w2)?.probability(&exact_rational(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph3;
    use num_traits::ToPrimitive;

    fn c4() -> SkeletonGraph {
        // w=0, u=1, w'=2, x=3
        SkeletonGraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn four_cycle_probability_is_p() {
        let g = c4();
        assert_eq!(
            exact_admissibility(&g, 0, 1, 2, 0.3).unwrap(),
            exact_rational(0.3)
        );
        let params = EstimatorParams::new(0.3, 0.5, 20_000, 11).unwrap();
        let est = sample_admissibility(&g, 0, 1, 2, &params).unwrap();
        assert!((est.estimate - 0.3).abs() < 0.02, "{}", est.estimate);
    }

    #[test]
    fn direct_edge_never_counts() {
        let g = SkeletonGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(exact_admissibility(&g, 0, 1, 2, 0.9).unwrap().is_zero());
    }

    #[test]
    fn triangle_plus_common_neighbor() {
        // triangle w u w' (0 1 2) plus x = 3 adjacent to w and w'
        let g = SkeletonGraph::new(4, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 2)]).unwrap();
        // Enumerate U ⊆ {0, 2, 3} by hand: the event holds iff 3 ∈ U.
        let p = exact_rational(0.4);
        let one = BigRational::one();
        let mut expected = BigRational::zero();
        for mask in 0..8u32 {
            let pick = |i: u32| mask >> i & 1 == 1;
            let weight = (0..3).fold(one.clone(), |acc, i| {
                acc * if pick(i) { p.clone() } else { &one - &p }
            });
            if pick(2) {
                expected += weight;
            }
        }
        assert_eq!(exact_admissibility(&g, 0, 1, 2, 0.4).unwrap(), expected);
    }

    #[test]
    fn disconnected_endpoints_give_zero() {
        // w=0 and w'=2 only meet through u=1
        let g = SkeletonGraph::new(5, [(0, 1), (1, 2), (0, 3), (2, 4)]).unwrap();
        assert!(exact_admissibility(&g, 0, 1, 2, 0.7).unwrap().is_zero());
        let params = EstimatorParams::new(0.7, 0.5, 500, 1).unwrap();
        assert_eq!(
            sample_admissibility(&g, 0, 1, 2, &params)
                .unwrap()
                .successes,
            0
        );
    }

    #[test]
    fn k5_estimate_matches_exact() {
        let g = Hypergraph3::complete(5).skeleton();
        let exact = exact_admissibility(&g, 0, 1, 2, 0.5)
            .unwrap()
            .to_f64()
            .unwrap();
        // two free vertices, each alone suffices
        assert!((exact - 0.75).abs() < 1e-12);
        let params = EstimatorParams::new(0.5, 0.5, 10_000, 5).unwrap();
        let est = sample_admissibility(&g, 0, 1, 2, &params).unwrap().estimate;
        assert!((est - exact).abs() < 0.05);
    }

    #[test]
    fn errors() {
        let g = c4();
        assert!(matches!(
            sample_admissibility(&g, 0, 2, 1, &EstimatorParams::new(0.5, 0.5, 1, 0).unwrap()),
            Err(Error::NotAPath(_))
        ));
        let big = SkeletonGraph::empty(26);
        assert!(matches!(
            exact_admissibility(&big, 0, 1, 2, 0.5),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = Hypergraph3::complete(7).skeleton();
        let params = EstimatorParams::new(0.2, 0.5, 300, 42).unwrap();
        let a = sample_admissibility(&g, 0, 1, 2, &params).unwrap();
        let b = sample_admissibility(&g, 0, 1, 2, &params).unwrap();
        assert_eq!(a, b);
    }
}
