use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::Rational64;
use rand::seq::index;
use rand::Rng as _;

use super::gamma::{gamma, GammaGraph, GammaRole};
use super::{glue_and_certify, run_retries, Attempt, SearchOutcome, SearchParams, Stage, Target};
use crate::coverability::{pair_psi_sampled, sample_disk_coverability, triple_phi, FourCycle};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph3, SkeletonGraph, Vertex};
use crate::rng;

/// Randomized search for a homeomorph of `K_t^(3)`.
///
/// Per retry: (1) take the link `G = H_u` of the densest of a few sampled
/// vertices; (2) dependent random choice: pick `w`, draw `v_1..v_t` from
/// `N_G(w)` until every triple has codegree above `r` and the sampled
/// `φ`-sum is below `1/6`; (3) draw `v_ij ∈ N_G(v_i,v_j)` and
/// `v_ijk ∈ N_G(v_i,v_j,v_k)`, redrawing everything on a collision or when a
/// special 4-cycle fails the coverability test; (4) glue one disk per special
/// cycle and verify.
pub fn find_k_t_homeomorph(h: &Hypergraph3, params: &SearchParams) -> Result<SearchOutcome> {
    if params.t < 3 {
        return Err(Error::InvalidParameter(format!(
            "t must be at least 3, got {}",
            params.t
        )));
    }
    params.validate()?;
    let gam = gamma(params.t)?;
    run_retries(Target::Ktt(params.t), params.max_retries, |retry| {
        attempt(h, params, &gam, retry)
    })
}

fn attempt(
    h: &Hypergraph3,
    params: &SearchParams,
    gam: &GammaGraph,
    retry: usize,
) -> Result<Attempt> {
    let t = params.t;
    let n = h.num_vertices();

    // Stage 1: link vertex.
    let mut r = rng::indexed(
        rng::derive(params.seed, rng::STREAM_LINK_CHOICE),
        retry as u64,
    );
    let candidates: Vec<Vertex> = if n <= params.link_candidates {
        (0..n).collect()
    } else {
        index::sample(&mut r, n, params.link_candidates).into_vec()
    };
    let Some(u) = candidates
        .iter()
        .copied()
        .filter(|&u| h.degree(u) > 0)
        .max_by_key(|&u| (h.degree(u), std::cmp::Reverse(u)))
    else {
        return Ok(Attempt::stopped(
            Stage::LinkChoice,
            "every sampled link is empty",
        ));
    };
    let g = h.link(u)?;

    // Stage 2: v_1..v_t by dependent random choice.
    let Some(vs) = choose_singletons(h, &g, params, retry)? else {
        return Ok(Attempt::stopped(
            Stage::DependentChoice,
            format!("no t-set in a neighbourhood passed the codegree and φ tests (u = {u})"),
        ));
    };

    // Stage 3: the remaining vertices of Γ_t.
    let mut r = rng::indexed(rng::derive(params.seed, rng::STREAM_EMBED), retry as u64);
    let mut pools: HashMap<GammaRole, Vec<Vertex>> = HashMap::new();
    for &role in &gam.roles {
        let query: Vec<Vertex> = match role {
            GammaRole::Single(_) => continue,
            GammaRole::Pair(i, j) => vec![vs[i], vs[j]],
            GammaRole::Triple(i, j, k) => vec![vs[i], vs[j], vs[k]],
        };
        let pool = g.common_neighborhood(&query)?;
        if pool.is_empty() {
            return Ok(Attempt::stopped(
                Stage::Embedding,
                format!("{} has no candidates", role.label()),
            ));
        }
        pools.insert(role, pool);
    }
    let mut collision_free = false;
    let mut last_uncovered = None;
    for _ in 0..params.redraw_budget {
        let image: Vec<Vertex> = gam
            .roles
            .iter()
            .map(|role| match role {
                GammaRole::Single(i) => vs[*i],
                other => {
                    let pool = &pools[other];
                    pool[r.gen_range(0..pool.len())]
                }
            })
            .collect();
        if image.iter().collect::<HashSet<_>>().len() != image.len() {
            continue;
        }
        collision_free = true;
        let cycles: Vec<FourCycle> = gam
            .special_cycles
            .iter()
            .map(|c| FourCycle(c.map(|x| image[x])))
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
            last_uncovered = Some(c);
            continue;
        }
        // Stage 4: glue and verify.
        let embedding: BTreeMap<String, Vertex> = gam
            .roles
            .iter()
            .zip(&image)
            .map(|(role, &x)| (role.label(), x))
            .collect();
        return glue_and_certify(h, Target::Ktt(t), embedding, cycles, params, retry);
    }
    Ok(if collision_free {
        Attempt::stopped(
            Stage::Coverability,
            format!(
                "special cycle {:?} not coverable",
                last_uncovered.map(|c| c.0)
            ),
        )
    } else {
        Attempt::stopped(Stage::Embedding, "every draw had a vertex collision")
    })
}

/// Draws `v_1..v_t` from `N_G(w)` for random `w` until all triple codegrees
/// exceed `r` and `Σ φ < 1/6` with `ψ` estimated from sampled pairs.
fn choose_singletons(
    h: &Hypergraph3,
    g: &SkeletonGraph,
    params: &SearchParams,
    retry: usize,
) -> Result<Option<Vec<Vertex>>> {
    let t = params.t;
    let pool: Vec<Vertex> = g.vertices().filter(|&w| g.degree(w) >= t).collect();
    if pool.is_empty() {
        return Ok(None);
    }
    let mut r = rng::indexed(rng::derive(params.seed, rng::STREAM_DRC), retry as u64);
    let est = params.estimator(rng::derive(params.seed ^ retry as u64, rng::STREAM_DRC))?;
    let mut psi_cache: HashMap<(Vertex, Vertex), Rational64> = HashMap::new();
    let limit = Rational64::new(1, 6);
    'draw: for _ in 0..params.selection_draws {
        let w = pool[r.gen_range(0..pool.len())];
        let nbrs = g.neighbors(w);
        let mut vs: Vec<Vertex> = index::sample(&mut r, nbrs.len(), t)
            .into_iter()
            .map(|i| nbrs[i])
            .collect();
        vs.sort_unstable();
        let mut phi_sum = Rational64::from_integer(0);
        for i in 0..t {
            for j in i + 1..t {
                for k in j + 1..t {
                    let codeg3 = g.codegree(&[vs[i], vs[j], vs[k]])?;
                    if codeg3 <= params.r {
                        continue 'draw;
                    }
                    let mut psis = [Rational64::from_integer(0); 3];
                    for (slot, (a, b)) in [(vs[i], vs[j]), (vs[i], vs[k]), (vs[j], vs[k])]
                        .into_iter()
                        .enumerate()
                    {
                        psis[slot] = match psi_cache.get(&(a, b)) {
                            Some(&psi) => psi,
                            None => {
                                let psi = pair_psi_sampled(h, g, a, b, &est, params.max_pairs)?.psi;
                                psi_cache.insert((a, b), psi);
                                psi
                            }
                        };
                    }
                    phi_sum += triple_phi(psis, codeg3);
                    if phi_sum >= limit {
                        continue 'draw;
                    }
                }
            }
        }
        return Ok(Some(vs));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_certificate;

    fn desk_params(t: usize, seed: u64) -> SearchParams {
        SearchParams::ktt(t)
            .with_p_epsilon(0.5, 0.1)
            .with_seed(seed)
    }

    #[test]
    fn k3_on_complete_twenty() {
        let h = Hypergraph3::complete(20);
        let cert = find_k_t_homeomorph(&h, &desk_params(3, 1))
            .unwrap()
            .unwrap();
        assert_eq!(cert.disks.len(), 3);
        assert_eq!(cert.embedding.len(), 7);
        assert!(verify_certificate(&h, &cert).unwrap().passed);
    }

    #[test]
    fn empty_links_fail_at_stage_one() {
        let h = Hypergraph3::new(10, []).unwrap();
        let failure = find_k_t_homeomorph(&h, &desk_params(4, 0))
            .unwrap()
            .unwrap_err();
        assert_eq!(failure.stage, Stage::LinkChoice);
    }

    #[test]
    fn deterministic_per_seed() {
        let h = Hypergraph3::complete(16);
        let a = find_k_t_homeomorph(&h, &desk_params(3, 5)).unwrap();
        let b = find_k_t_homeomorph(&h, &desk_params(3, 5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn default_parameters_stop_early_at_desk_scale() {
        // p = 1/27 leaves most 4-cycles uncovered on 14 vertices.
        let h = Hypergraph3::complete(14);
        let params = SearchParams::ktt(3).with_seed(0);
        let failure = find_k_t_homeomorph(&h, &params).unwrap().unwrap_err();
        assert!(failure.stage <= Stage::Coverability, "{failure:?}");
    }
}
