use num_rational::Rational64;
use rand::seq::index;

use super::disk::{sample_disk_coverability, FourCycle};
use super::EstimatorParams;
use crate::error::Result;
use crate::hypergraph::{Hypergraph3, SkeletonGraph, Vertex};
use crate::rng;

/// `ξ(v,v')`, `codeg(v,v')` and `ψ(v,v') = ξ / codeg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairStats {
    pub xi: usize,
    pub codeg: usize,
    pub psi: Rational64,
    /// Pairs `{w,w'}` actually tested; below `C(codeg,2)` only when sampled.
    pub pairs_tested: usize,
}

impl PairStats {
    fn zero(codeg: usize) -> Self {
        Self {
            xi: 0,
            codeg,
            psi: Rational64::from_integer(0),
            pairs_tested: 0,
        }
    }
}

fn cycle_is_coverable(h: &Hypergraph3, c: &FourCycle, params: &EstimatorParams) -> bool {
    let key = c
        .canonical()
        .0
        .iter()
        .fold(params.seed, |acc, &x| rng::mix64(acc ^ x as u64));
    let params = params.with_seed(key);
    // A cycle missing from the skeleton of H cannot be covered.
    sample_disk_coverability(h, c, &params)
        .map(|e| e.decided_coverable)
        .unwrap_or(false)
}

/// Counts the pairs `{w,w'} ⊆ N_G(v,v')` whose 4-cycle `v w v' w'` is not
/// decided coverable in `h`. Each cycle gets its own seed derived from the
/// cycle, so the answer does not depend on enumeration order.
pub fn pair_psi(
    h: &Hypergraph3,
    g: &SkeletonGraph,
    v: Vertex,
    v2: Vertex,
    params: &EstimatorParams,
) -> Result<PairStats> {
    params.validate()?;
    let common = g.common_neighborhood(&[v, v2])?;
    let codeg = common.len();
    if codeg == 0 {
        return Ok(PairStats::zero(0));
    }
    let mut xi = 0;
    let mut tested = 0;
    for (i, &w) in common.iter().enumerate() {
        for &w2 in &common[i + 1..] {
            tested += 1;
            if !cycle_is_coverable(h, &FourCycle::new(v, w, v2, w2), params) {
                xi += 1;
            }
        }
    }
    Ok(PairStats {
        xi,
        codeg,
        psi: Rational64::new(xi as i64, codeg as i64),
        pairs_tested: tested,
    })
}

/// Estimates `ψ(v,v')` from at most `max_pairs` pairs drawn without
/// replacement: `ψ ≈ bad · C(codeg,2) / (tested · codeg)`.
pub fn pair_psi_sampled(
    h: &Hypergraph3,
    g: &SkeletonGraph,
    v: Vertex,
    v2: Vertex,
    params: &EstimatorParams,
    max_pairs: usize,
) -> Result<PairStats> {
    params.validate()?;
    let common = g.common_neighborhood(&[v, v2])?;
    let codeg = common.len();
    let total = codeg * codeg.saturating_sub(1) / 2;
    if total == 0 || max_pairs == 0 {
        return Ok(PairStats::zero(codeg));
    }
    if total <= max_pairs {
        return pair_psi(h, g, v, v2, params);
    }
    let key = rng::mix64(v.min(v2) as u64) ^ rng::mix64(!(v.max(v2) as u64));
    let mut r = rng::indexed(rng::derive(params.seed, rng::STREAM_DRC), key);
    let mut picks = index::sample(&mut r, total, max_pairs).into_vec();
    picks.sort_unstable();
    let mut bad = 0;
    for k in &picks {
        let (i, j) = unrank_pair(*k, codeg);
        let c = FourCycle::new(v, common[i], v2, common[j]);
        if !cycle_is_coverable(h, &c, params) {
            bad += 1;
        }
    }
    Ok(PairStats {
        xi: bad,
        codeg,
        psi: Rational64::new((bad * (codeg - 1)) as i64, (2 * max_pairs) as i64),
        pairs_tested: max_pairs,
    })
}

/// The `k`-th pair `(i, j)`, `i < j < m`, in lexicographic order.
fn unrank_pair(mut k: usize, m: usize) -> (usize, usize) {
    for i in 0..m {
        let row = m - 1 - i;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
    }
    unreachable!("pair index out of range")
}

/// `φ = (ψ12 + ψ13 + ψ23) / codeg3`, or 0 when `codeg3 = 0`.
pub fn triple_phi(psis: [Rational64; 3], codeg3: usize) -> Rational64 {
    if codeg3 == 0 {
        return Rational64::from_integer(0);
    }
    (psis[0] + psis[1] + psis[2]) / Rational64::from_integer(codeg3 as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverability::Strategy;

    /// Vertices: v=0, v'=1, a=2, b=3, c=4, x1=5, x2=6, y1=7, y2=8.
    /// Pyramids with apexes (a,b) over v-x1-x2-v' and (a,c) over v-y1-y2-v'.
    fn two_pyramid_instance() -> Hypergraph3 {
        let mut ts = Vec::new();
        for apex in [2, 3] {
            ts.extend([[apex, 0, 5], [apex, 5, 6], [apex, 6, 1]]);
        }
        for apex in [4] {
            ts.extend([[apex, 0, 7], [apex, 7, 8], [apex, 8, 1]]);
        }
        ts.extend([[2, 0, 7], [2, 7, 8], [2, 8, 1]]);
        Hypergraph3::new(9, ts).unwrap()
    }

    #[test]
    fn zero_codegree() {
        let h = Hypergraph3::new(4, [[0, 2, 3]]).unwrap();
        let g = h.skeleton();
        let params = EstimatorParams::new(0.5, 0.5, 10, 0).unwrap();
        let s = pair_psi(&h, &g, 0, 1, &params).unwrap();
        assert_eq!((s.xi, s.codeg, s.psi), (0, 0, Rational64::from_integer(0)));
    }

    #[test]
    fn one_of_three_cycles_uncovered() {
        let h = two_pyramid_instance();
        assert_eq!(h.num_edges(), 12);
        let g = h.skeleton();
        let params = EstimatorParams::new(0.99, 0.1, 400, 4).unwrap();
        let s = pair_psi(&h, &g, 0, 1, &params).unwrap();
        assert_eq!((s.xi, s.codeg), (1, 3));
        assert_eq!(s.psi, Rational64::new(1, 3));
        // The only disk over v b v' c has five interior vertices.
        let small = params.with_strategy(Strategy::ExhaustiveSmall { max_interior: 3 });
        assert_eq!(pair_psi(&h, &g, 0, 1, &small).unwrap().xi, 1);
    }

    #[test]
    fn complete_hypergraph_has_zero_psi() {
        let h = Hypergraph3::complete(9);
        let g = h.skeleton();
        let params = EstimatorParams::new(0.5, 0.1, 200, 0).unwrap();
        assert_eq!(pair_psi(&h, &g, 0, 1, &params).unwrap().xi, 0);
        let s = pair_psi_sampled(&h, &g, 0, 1, &params, 5).unwrap();
        assert_eq!((s.xi, s.pairs_tested), (0, 5));
    }

    #[test]
    fn phi_arithmetic() {
        let z = Rational64::from_integer(0);
        assert_eq!(triple_phi([z, z, z], 4), z);
        assert_eq!(
            triple_phi([Rational64::new(1, 2), z, z], 2),
            Rational64::new(1, 4)
        );
        assert_eq!(triple_phi([Rational64::new(1, 2), z, z], 0), z);
    }

    #[test]
    fn unrank_covers_all_pairs() {
        let m = 6;
        let pairs: Vec<_> = (0..m * (m - 1) / 2).map(|k| unrank_pair(k, m)).collect();
        let mut expected = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                expected.push((i, j));
            }
        }
        assert_eq!(pairs, expected);
    }
}
