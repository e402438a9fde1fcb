//! Randomized searches for homeomorphs: `K_t^(3)` via an embedding of `Γ_t`
//! in a link graph, the torus and projective plane from two apexes and a hub,
//! and the sphere from two pyramids over one 4-cycle.
//!
//! Every search returns either a certificate that has already passed
//! [`crate::verify::verify_certificate`] or a [`SearchFailure`] naming the
//! furthest stage reached. Randomness is keyed by `(seed, retry)`.

mod certificate;
mod gamma;
mod glue;
mod ktt;
mod sphere;
mod surfaces;

pub use certificate::{HomeomorphCertificate, Target, CERT_VERSION};
pub use gamma::{gamma, GammaGraph, GammaRole};
pub use glue::{glue_disks, interiors, CycleDiagnostic, GlueFailure};
pub use ktt::find_k_t_homeomorph;
pub use sphere::find_sphere;
pub use surfaces::{find_projective_plane, find_torus};

use std::fmt;

use serde::Serialize;

use crate::complex::TwoComplex;
use crate::coverability::{EstimatorParams, FourCycle};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;
use crate::rng;
use crate::verify::verify_certificate;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchParams {
    /// Target clique size for `K_t^(3)`.
    pub t: usize,
    pub p: f64,
    pub epsilon: f64,
    /// Codegree floor for triples `v_i v_j v_k`.
    pub r: usize,
    /// Monte Carlo trials per coverability or admissibility test.
    pub trials: usize,
    pub seed: u64,
    pub max_retries: usize,
    /// Vertices sampled when choosing the link vertex `u`.
    pub link_candidates: usize,
    /// Pairs `{w,w'}` sampled per `ψ` estimate.
    pub max_pairs: usize,
    /// Draws of `w` (and `v_1..v_t` from `N(w)`) per retry.
    pub selection_draws: usize,
    /// Redraws of the `v_ij`, `v_ijk` per retry.
    pub redraw_budget: usize,
    /// Partition attempts per gluing.
    pub glue_retries: usize,
    /// Apex pairs sampled by the surface builders.
    pub pair_candidates: usize,
    /// Hubs tried per retry, and neighbour draws per hub.
    pub hub_candidates: usize,
    pub hub_draws: usize,
    /// Apex pairs examined by the sphere finder (`None`: all of them).
    pub sphere_pairs: Option<usize>,
}

impl SearchParams {
    /// Defaults for `K_t^(3)`: `p = t^-3`, `ε = 2 t^-6`.
    pub fn ktt(t: usize) -> Self {
        let tf = t.max(1) as f64;
        Self {
            t,
            p: tf.powi(-3),
            epsilon: 2.0 * tf.powi(-6),
            ..Self::surface()
        }
    }

    /// Defaults for the torus and projective plane: `p = 1/18`, `ε = 1/163`.
    pub fn surface() -> Self {
        Self {
            t: 3,
            p: 1.0 / 18.0,
            epsilon: 1.0 / 163.0,
            r: 2,
            trials: 200,
            seed: 0,
            max_retries: 10,
            link_candidates: 16,
            max_pairs: 20,
            selection_draws: 50,
            redraw_budget: 200,
            glue_retries: 20,
            pair_candidates: 16,
            hub_candidates: 8,
            hub_draws: 20,
            sphere_pairs: None,
        }
    }

    pub fn with_p_epsilon(mut self, p: f64, epsilon: f64) -> Self {
        self.p = p;
        self.epsilon = epsilon;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.estimator(0)?;
        if self.max_retries == 0 {
            return Err(Error::InvalidParameter(
                "max_retries must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Estimator parameters for one test, seeded by `key`.
    pub(crate) fn estimator(&self, key: u64) -> Result<EstimatorParams> {
        EstimatorParams::new(self.p, self.epsilon, self.trials, key)
    }

    /// Estimator seed for a 4-cycle, independent of the cycle's rotation.
    pub(crate) fn cycle_key(&self, retry: usize, c: &FourCycle) -> u64 {
        c.canonical()
            .0
            .iter()
            .fold(rng::derive(self.seed, retry as u64), |acc, &x| {
                rng::mix64(acc ^ x as u64)
            })
    }
}

/// Pipeline stages, in the order the searches pass through them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    LinkChoice,
    ApexPair,
    DependentChoice,
    Hub,
    Embedding,
    Coverability,
    Gluing,
    Verification,
    Complete,
}

impl Stage {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stage::LinkChoice => "link-choice",
            Stage::ApexPair => "apex-pair",
            Stage::DependentChoice => "dependent-choice",
            Stage::Hub => "hub",
            Stage::Embedding => "embedding",
            Stage::Coverability => "coverability",
            Stage::Gluing => "gluing",
            Stage::Verification => "verification",
            Stage::Complete => "complete",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A search that ran out of budget. `stage` is the stage at which the most
/// advanced retry stopped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchFailure {
    pub target: String,
    pub stage: Stage,
    pub retries: usize,
    pub detail: String,
    pub glue: Option<GlueFailure>,
}

pub type SearchOutcome = std::result::Result<HomeomorphCertificate, SearchFailure>;

/// Outcome of one retry.
pub(crate) enum Attempt {
    Found(HomeomorphCertificate),
    Stopped {
        stage: Stage,
        detail: String,
        glue: Option<GlueFailure>,
    },
}

impl Attempt {
    pub(crate) fn stopped(stage: Stage, detail: impl Into<String>) -> Self {
        Attempt::Stopped {
            stage,
            detail: detail.into(),
            glue: None,
        }
    }
}

/// Runs `attempt(retry)` for each retry in order and returns the first
/// success, or the failure from the most advanced retry.
pub(crate) fn run_retries(
    target: Target,
    max_retries: usize,
    mut attempt: impl FnMut(usize) -> Result<Attempt>,
) -> Result<SearchOutcome> {
    let mut best: Option<(Stage, String, Option<GlueFailure>)> = None;
    for retry in 0..max_retries {
        match attempt(retry)? {
            Attempt::Found(cert) => return Ok(Ok(cert)),
            Attempt::Stopped {
                stage,
                detail,
                glue,
            } => {
                if best.as_ref().map_or(true, |b| stage > b.0) {
                    best = Some((stage, detail, glue));
                }
            }
        }
    }
    let (stage, detail, glue) = best.unwrap_or((Stage::LinkChoice, "no retries".into(), None));
    Ok(Err(SearchFailure {
        target: target.to_string(),
        stage,
        retries: max_retries,
        detail,
        glue,
    }))
}

/// Glues disks onto `cycles`, packages the certificate and verifies it.
pub(crate) fn glue_and_certify(
    h: &Hypergraph3,
    target: Target,
    embedding: std::collections::BTreeMap<String, usize>,
    cycles: Vec<FourCycle>,
    params: &SearchParams,
    retry: usize,
) -> Result<Attempt> {
    let glue_seed = rng::derive(params.seed, retry as u64);
    let disks = match glue_disks(h, &cycles, params.glue_retries, glue_seed)? {
        Ok(d) => d,
        Err(failure) => {
            return Ok(Attempt::Stopped {
                stage: Stage::Gluing,
                detail: format!("cycles without disks: {:?}", failure.flagged()),
                glue: Some(failure),
            })
        }
    };
    certify(h, target, embedding, cycles, disks, params.seed, retry)
}

pub(crate) fn certify(
    h: &Hypergraph3,
    target: Target,
    embedding: std::collections::BTreeMap<String, usize>,
    cycles: Vec<FourCycle>,
    disks: Vec<TwoComplex>,
    seed: u64,
    retry: usize,
) -> Result<Attempt> {
    let cert = HomeomorphCertificate {
        target,
        embedding,
        cycles,
        disks: disks.iter().map(|d| d.triangles().to_vec()).collect(),
        seed,
        retries: retry,
    };
    let report = verify_certificate(h, &cert)?;
    if report.passed {
        Ok(Attempt::Found(cert))
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        Ok(Attempt::stopped(
            Stage::Verification,
            format!("failed checks: {failed:?}"),
        ))
    }
}

/// Runs the finder for `target`; for `K_t^(3)` the clique size comes from
/// the target, not from `params.t`.
pub fn find(h: &Hypergraph3, target: Target, params: &SearchParams) -> Result<SearchOutcome> {
    match target {
        Target::Ktt(t) => find_k_t_homeomorph(h, &SearchParams { t, ..*params }),
        Target::Torus => find_torus(h, params),
        Target::ProjectivePlane => find_projective_plane(h, params),
        Target::Sphere => find_sphere(h, params),
    }
}
