use std::collections::BTreeMap;

use rand::seq::{index, SliceRandom};

use super::{glue_and_certify, run_retries, Attempt, SearchOutcome, SearchParams, Stage, Target};
use crate::coverability::{sample_admissibility, sample_disk_coverability, FourCycle};
use crate::error::Result;
use crate::hypergraph::{Hypergraph3, Vertex};
use crate::rng;

// Pattern vertices: 0 = u, 1 = u', 2 = v, 3.. = w1, w2, ...
const NAMES: [&str; 9] = ["u", "u'", "v", "w1", "w2", "w3", "w4", "w5", "w6"];

const TORUS_CYCLES: [[usize; 4]; 9] = [
    [1, 3, 2, 7], // u' w1 v w5
    [0, 3, 1, 4], // u w1 u' w2
    [1, 4, 2, 5], // u' w2 v w3
    [0, 5, 2, 7], // u w3 v w5
    [0, 5, 1, 6], // u w3 u' w4
    [0, 3, 2, 6], // u w1 v w4
    [0, 7, 1, 8], // u w5 u' w6
    [1, 6, 2, 8], // u' w4 v w6
    [0, 4, 2, 8], // u w2 v w6
];

const RP2_CYCLES: [[usize; 4]; 6] = [
    [0, 3, 2, 5], // u w1 v w3
    [1, 4, 2, 5], // u' w2 v w3
    [0, 5, 1, 6], // u w3 u' w4
    [0, 3, 1, 4], // u w1 u' w2
    [0, 4, 2, 6], // u w2 v w4
    [1, 3, 2, 6], // u' w1 v w4
];

struct Pattern {
    target: Target,
    hub_degree: usize,
    cycles: &'static [[usize; 4]],
    /// Pairs `(w_a, w_b)` whose path `w_a v w_b` must be admissible in `G`.
    hub_paths: &'static [(usize, usize)],
}

const TORUS: Pattern = Pattern {
    target: Target::Torus,
    hub_degree: 6,
    cycles: &TORUS_CYCLES,
    hub_paths: &[(3, 4), (5, 6), (7, 8)],
};

const RP2: Pattern = Pattern {
    target: Target::ProjectivePlane,
    hub_degree: 4,
    cycles: &RP2_CYCLES,
    hub_paths: &[(3, 4), (5, 6)],
};

/// Torus from nine 4-cycles on `u, u', v, w1..w6`.
///
/// Per retry: (1) pick the pair `(u,u')` with the largest link intersection
/// `G = H_u ∩ H_u'` among sampled pairs; (2) find a hub `v` and neighbours
/// `w1..w6` in `G` with `w1 v w2`, `w3 v w4`, `w5 v w6` admissible; (3) test
/// the nine cycles for coverability; (4) glue and verify.
pub fn find_torus(h: &Hypergraph3, params: &SearchParams) -> Result<SearchOutcome> {
    find_surface(h, params, &TORUS)
}

/// Projective plane from six 4-cycles on `u, u', v, w1..w4`, same pipeline.
pub fn find_projective_plane(h: &Hypergraph3, params: &SearchParams) -> Result<SearchOutcome> {
    find_surface(h, params, &RP2)
}

fn find_surface(
    h: &Hypergraph3,
    params: &SearchParams,
    pattern: &Pattern,
) -> Result<SearchOutcome> {
    params.validate()?;
    run_retries(pattern.target, params.max_retries, |retry| {
        attempt(h, params, pattern, retry)
    })
}

fn attempt(
    h: &Hypergraph3,
    params: &SearchParams,
    pattern: &Pattern,
    retry: usize,
) -> Result<Attempt> {
    // Stage 1: apex pair.
    let mut r = rng::indexed(
        rng::derive(params.seed, rng::STREAM_LINK_CHOICE),
        retry as u64,
    );
    let live: Vec<Vertex> = (0..h.num_vertices()).filter(|&x| h.degree(x) > 0).collect();
    if live.len() < 2 {
        return Ok(Attempt::stopped(
            Stage::ApexPair,
            "fewer than two non-isolated vertices",
        ));
    }
    let mut best: Option<(usize, Vertex, Vertex)> = None;
    for _ in 0..params.pair_candidates.max(1) {
        let pick = index::sample(&mut r, live.len(), 2);
        let (a, b) = (live[pick.index(0)], live[pick.index(1)]);
        let edges = h.link_intersection(a, b)?.num_edges();
        if best.map_or(true, |(e, _, _)| edges > e) {
            best = Some((edges, a, b));
        }
    }
    let (edges, u, u2) = best.expect("at least one candidate");
    if edges == 0 {
        return Ok(Attempt::stopped(
            Stage::ApexPair,
            "sampled link intersections are empty",
        ));
    }
    let g = h.link_intersection(u, u2)?;

    // Stage 2: hub and its neighbours.
    let need = pattern.hub_degree;
    let mut r = rng::indexed(rng::derive(params.seed, rng::STREAM_HUB), retry as u64);
    let mut hubs: Vec<Vertex> = g.vertices().filter(|&x| g.degree(x) >= need).collect();
    if hubs.is_empty() {
        return Ok(Attempt::stopped(
            Stage::Hub,
            format!("no vertex with {need} neighbours in G"),
        ));
    }
    hubs.shuffle(&mut r);
    hubs.sort_by_key(|&x| std::cmp::Reverse(g.degree(x)));
    hubs.truncate(params.hub_candidates.max(1));

    let mut reached = Stage::Hub;
    let mut detail = String::from("no admissible hub paths");
    for &v in &hubs {
        let nbrs = g.neighbors(v);
        for _ in 0..params.hub_draws.max(1) {
            let mut pattern_vertices = vec![u, u2, v];
            let pick = index::sample(&mut r, nbrs.len(), need);
            pattern_vertices.extend(pick.iter().map(|i| nbrs[i]));
            let mut admissible = true;
            for &(a, b) in pattern.hub_paths {
                let (wa, wb) = (pattern_vertices[a], pattern_vertices[b]);
                let key = rng::mix64(
                    rng::derive(params.seed, retry as u64) ^ rng::mix64(wa.min(wb) as u64),
                ) ^ rng::mix64(!(wa.max(wb) as u64))
                    ^ v as u64;
                let est = sample_admissibility(&g, wa, v, wb, &params.estimator(key)?)?;
                if !est.decided_coverable {
                    admissible = false;
                    break;
                }
            }
            if !admissible {
                continue;
            }

            // Stage 3: coverability of every cycle.
            let cycles: Vec<FourCycle> = pattern
                .cycles
                .iter()
                .map(|c| FourCycle(c.map(|i| pattern_vertices[i])))
                .collect();
            let mut uncovered = None;
            for c in &cycles {
                let est =
                    sample_disk_coverability(h, c, &params.estimator(params.cycle_key(retry, c))?)?;
                if !est.decided_coverable {
                    uncovered = Some(*c);
                    break;
                }
            }
            if let Some(c) = uncovered {
                reached = Stage::Coverability;
                detail = format!("cycle {:?} not coverable", c.0);
                continue;
            }

            // Stages 4 and 5: glue and verify.
            let embedding: BTreeMap<String, Vertex> = pattern_vertices
                .iter()
                .enumerate()
                .map(|(i, &x)| (NAMES[i].to_string(), x))
                .collect();
            let outcome = glue_and_certify(h, pattern.target, embedding, cycles, params, retry)?;
            match outcome {
                Attempt::Found(_) => return Ok(outcome),
                Attempt::Stopped { stage, .. } if stage > reached => return Ok(outcome),
                Attempt::Stopped { .. } => {}
            }
        }
    }
    Ok(Attempt::stopped(reached, detail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::TwoComplex;
    use std::collections::BTreeMap as Map;

    fn pattern_is_closed_surface(cycles: &[[usize; 4]], euler: i64) {
        let mut edges: Map<(usize, usize), usize> = Map::new();
        let mut verts = std::collections::BTreeSet::new();
        for c in cycles {
            for i in 0..4 {
                let (a, b) = (c[i], c[(i + 1) % 4]);
                *edges.entry((a.min(b), a.max(b))).or_default() += 1;
                verts.insert(a);
            }
        }
        assert!(edges.values().all(|&k| k == 2), "{edges:?}");
        assert_eq!(
            verts.len() as i64 - edges.len() as i64 + cycles.len() as i64,
            euler
        );
    }

    #[test]
    fn cycle_lists_form_surfaces() {
        pattern_is_closed_surface(&TORUS_CYCLES, 0);
        pattern_is_closed_surface(&RP2_CYCLES, 1);
    }

    fn desk(seed: u64) -> SearchParams {
        SearchParams::surface()
            .with_p_epsilon(0.5, 0.1)
            .with_seed(seed)
    }

    fn union(cert: &crate::search::HomeomorphCertificate) -> TwoComplex {
        TwoComplex::new(cert.disks.iter().flatten().copied())
    }

    #[test]
    fn torus_on_complete_twenty() {
        let h = Hypergraph3::complete(20);
        let cert = find_torus(&h, &desk(3)).unwrap().unwrap();
        let c = union(&cert).classify();
        assert_eq!((c.euler, c.orientable), (0, Some(true)));
        assert_eq!(cert.disks.len(), 9);
    }

    #[test]
    fn projective_plane_on_complete_fifteen() {
        let h = Hypergraph3::complete(15);
        let cert = find_projective_plane(&h, &desk(3)).unwrap().unwrap();
        let c = union(&cert).classify();
        assert_eq!((c.euler, c.orientable), (1, Some(false)));
        assert_eq!(cert.disks.len(), 6);
    }

    #[test]
    fn single_pyramid_has_no_hub() {
        let h = Hypergraph3::new(5, [[0, 2, 3], [0, 3, 4], [1, 2, 3], [1, 3, 4]]).unwrap();
        let failure = find_torus(&h, &desk(0)).unwrap().unwrap_err();
        assert!(failure.stage <= Stage::Hub, "{failure:?}");
    }
}
