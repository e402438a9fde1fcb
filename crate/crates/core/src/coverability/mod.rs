//! Admissibility of length-2 paths and disk-coverability of 4-cycles.
//!
//! Probabilities are estimated by Monte Carlo with per-trial generators keyed
//! by `(seed, trial)`, or computed exactly by subset enumeration on small
//! instances. Exact values are kept as big rationals so that the strict
//! inequalities checked by the audits cannot be flipped by rounding.

mod admissibility;
mod audit;
mod disk;
mod pyramid;
mod stats;

pub use admissibility::{
    admissibility_profile, exact_admissibility, sample_admissibility, AdmissibilityProfile,
    EXACT_VERTEX_LIMIT,
};
pub use audit::{
    inadmissible_p2_audit, inadmissible_p2_audit_brute, weighted_inadmissibility_audit,
    weighted_inadmissibility_grid, AuditReport, PathOfLength2,
};
pub(crate) use disk::PyramidOracle;
pub use disk::{
    check_four_cycle, exact_pyramid_coverability, find_pyramid_disk, find_small_disk,
    sample_disk_coverability, FourCycle,
};
pub use pyramid::pyramid_disk;
pub use stats::{pair_psi, pair_psi_sampled, triple_phi, PairStats};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng;

/// Which disks count when testing a 4-cycle for coverability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Pyramid disks over either pair of opposite vertices.
    PyramidOnly,
    /// Pyramids plus every boundary-inducing disk with at most
    /// `max_interior` interior vertices. Exponential; meant as an oracle.
    ExhaustiveSmall { max_interior: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorParams {
    pub p: f64,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub strategy: Strategy,
}

impl EstimatorParams {
    pub fn new(p: f64, epsilon: f64, trials: usize, seed: u64) -> Result<Self> {
        let params = Self {
            p,
            epsilon,
            trials,
            seed,
            strategy: Strategy::PyramidOnly,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "p = {} not in (0,1)",
                self.p
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon = {} not in (0,1)",
                self.epsilon
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverabilityEstimate {
    pub successes: usize,
    pub trials: usize,
    pub estimate: f64,
    pub decided_coverable: bool,
}

impl CoverabilityEstimate {
    /// Point-estimate decision: coverable iff the success rate is at least
    /// `1 - epsilon`. Compared in integers to avoid float noise at the cut.
    pub fn from_counts(successes: usize, trials: usize, epsilon: f64) -> Self {
        let estimate = successes as f64 / trials as f64;
        let eps = exact_rational(epsilon);
        let lhs = BigRational::from_integer(BigInt::from(successes));
        let rhs = (BigRational::from_integer(1.into()) - eps) * BigInt::from(trials);
        Self {
            successes,
            trials,
            estimate,
            decided_coverable: lhs >= rhs,
        }
    }
}

/// Counts the trials in which `event` holds for a vertex sample on
/// `0..capacity` drawn with inclusion probability `params.p`.
///
/// Trial `i` always sees the same sample, so the count does not depend on how
/// rayon schedules the work.
pub(crate) fn count_successes(
    params: &EstimatorParams,
    capacity: usize,
    event: impl Fn(&[bool]) -> bool + Sync,
) -> usize {
    let seed = rng::derive(params.seed, rng::STREAM_ESTIMATOR);
    let p = params.p;
    (0..params.trials as u64)
        .into_par_iter()
        .filter(|&i| {
            let mut r = rng::indexed(seed, i);
            let sample: Vec<bool> = (0..capacity).map(|_| r.gen_bool(p)).collect();
            event(&sample)
        })
        .count()
}

/// The decimal value a user most likely meant by `x` (`0.3` becomes `3/10`,
/// not the nearest binary fraction).
pub fn exact_rational(x: f64) -> BigRational {
    // Continued-fraction convergents until within 1e-12 (relative).
    let tol = 1e-12 * x.abs().max(1.0);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rest = x.abs();
    for _ in 0..64 {
        let a = rest.floor();
        let (h2, k2) = (a as i128 * h1 + h0, a as i128 * k1 + k0);
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (h1 as f64 / k1 as f64 - x.abs()).abs() <= tol || rest - a < 1e-300 {
            break;
        }
        rest = 1.0 / (rest - a);
    }
    let r = Ratio::new(if x < 0.0 { -h1 } else { h1 }, k1);
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Formats `num/den` with the fraction reduced.
pub fn format_fraction(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}
