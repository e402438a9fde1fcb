use rand::seq::SliceRandom;

use super::{certify, Attempt, SearchFailure, SearchOutcome, SearchParams, Stage, Target};
use crate::coverability::{pyramid_disk, FourCycle};
use crate::error::Result;
use crate::hypergraph::{Hypergraph3, Vertex};
use crate::rng;

/// Two pyramids over one 4-cycle `v w v' w'` with disjoint interiors.
///
/// Apex pairs `(v,v')` are visited in a seeded random order. In
/// `L = H_v ∩ H_v'`, a path `w x w'` plus a second path from `w` to `w'` of
/// length at least 2 avoiding `x` gives two pyramids whose union is a sphere.
pub fn find_sphere(h: &Hypergraph3, params: &SearchParams) -> Result<SearchOutcome> {
    let live: Vec<Vertex> = (0..h.num_vertices())
        .filter(|&x| h.degree(x) >= 2)
        .collect();
    let mut pairs: Vec<(Vertex, Vertex)> = Vec::new();
    for (i, &a) in live.iter().enumerate() {
        for &b in &live[i + 1..] {
            pairs.push((a, b));
        }
    }
    let mut r = rng::indexed(rng::derive(params.seed, rng::STREAM_SPHERE), 0);
    pairs.shuffle(&mut r);
    if let Some(budget) = params.sphere_pairs {
        pairs.truncate(budget);
    }
    let examined = pairs.len();
    for (v, v2) in pairs {
        let l = h.link_intersection(v, v2)?;
        if l.num_edges() < 4 {
            continue;
        }
        for x in l.vertices() {
            let nbrs = l.neighbors(x);
            for (i, &w) in nbrs.iter().enumerate() {
                for &w2 in &nbrs[i + 1..] {
                    let Some(other) = l.long_path(w, w2, |y| y != x) else {
                        continue;
                    };
                    let first = pyramid_disk(v, v2, &[w, x, w2])?;
                    let second = pyramid_disk(v, v2, &other)?;
                    let cycle = FourCycle::new(v, w, v2, w2);
                    let embedding = [("a", v), ("b", w), ("c", v2), ("d", w2)]
                        .into_iter()
                        .map(|(k, x)| (k.to_string(), x))
                        .collect();
                    let attempt = certify(
                        h,
                        Target::Sphere,
                        embedding,
                        vec![cycle, cycle],
                        vec![first, second],
                        params.seed,
                        0,
                    )?;
                    if let Attempt::Found(cert) = attempt {
                        return Ok(Ok(cert));
                    }
                }
            }
        }
    }
    Ok(Err(SearchFailure {
        target: Target::Sphere.to_string(),
        stage: Stage::ApexPair,
        retries: 0,
        detail: format!(
            "none of {examined} apex pairs has a cycle of length >= 4 in its link intersection"
        ),
        glue: None,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::TwoComplex;

    #[test]
    fn two_pyramids_make_a_sphere() {
        // apexes 0, 1 over paths 2-3-4 and 2-5-4
        let h = Hypergraph3::new(
            6,
            [
                [0, 2, 3],
                [0, 3, 4],
                [1, 2, 3],
                [1, 3, 4],
                [0, 2, 5],
                [0, 5, 4],
                [1, 2, 5],
                [1, 5, 4],
            ],
        )
        .unwrap();
        let cert = find_sphere(&h, &SearchParams::surface()).unwrap().unwrap();
        let c = TwoComplex::new(cert.disks.iter().flatten().copied()).classify();
        assert_eq!((c.euler, c.orientable), (2, Some(true)));
    }

    #[test]
    fn single_pyramid_fails() {
        let h = Hypergraph3::new(5, [[0, 2, 3], [0, 3, 4], [1, 2, 3], [1, 3, 4]]).unwrap();
        assert!(find_sphere(&h, &SearchParams::surface()).unwrap().is_err());
    }

    #[test]
    fn complete_ten() {
        let h = Hypergraph3::complete(10);
        assert!(find_sphere(&h, &SearchParams::surface().with_seed(4))
            .unwrap()
            .is_ok());
    }
}
