use std::collections::BTreeSet;

use rand::Rng as _;
use serde::Serialize;

use crate::complex::TwoComplex;
use crate::coverability::{check_four_cycle, FourCycle, PyramidOracle};
use crate::error::Result;
use crate::hypergraph::{Hypergraph3, Vertex};
use crate::rng;

/// Why gluing failed, per cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleDiagnostic {
    pub index: usize,
    pub cycle: [Vertex; 4],
    /// Whether any pyramid over the cycle avoids all cycle vertices at all.
    pub has_any_disk: bool,
    /// Attempts in which this cycle was left without a disk.
    pub failed_attempts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlueFailure {
    pub attempts: usize,
    pub cycles: Vec<CycleDiagnostic>,
}

impl GlueFailure {
    /// Indices of cycles that failed in the last attempt or have no disk.
    pub fn flagged(&self) -> Vec<usize> {
        self.cycles
            .iter()
            .filter(|d| !d.has_any_disk || d.failed_attempts == self.attempts)
            .map(|d| d.index)
            .collect()
    }
}

/// One boundary-inducing disk per cycle, with interiors pairwise disjoint
/// and disjoint from `W`, the union of the cycle vertices.
///
/// Each attempt assigns every vertex outside `W` to one of `k` parts at
/// random and looks for a pyramid over cycle `i` with interior in part `i`.
/// Cycles left without a disk may then take any vertex not yet used by
/// another disk. Attempt `a` draws its partition from `(seed, a)`.
pub fn glue_disks(
    h: &Hypergraph3,
    cycles: &[FourCycle],
    max_retries: usize,
    seed: u64,
) -> Result<std::result::Result<Vec<TwoComplex>, GlueFailure>> {
    for c in cycles {
        check_four_cycle(h, c)?;
    }
    let k = cycles.len();
    if k == 0 {
        return Ok(Ok(Vec::new()));
    }
    let n = h.num_vertices();
    let mut in_w = vec![false; n];
    for c in cycles {
        for x in c.vertices() {
            in_w[x] = true;
        }
    }
    let oracles = cycles
        .iter()
        .map(|c| PyramidOracle::new(h, c))
        .collect::<Result<Vec<_>>>()?;
    let base = rng::derive(seed, rng::STREAM_GLUE);
    let mut failed = vec![0usize; k];
    let attempts = max_retries.max(1);
    for attempt in 0..attempts {
        let mut r = rng::indexed(base, attempt as u64);
        let part: Vec<usize> = (0..n).map(|_| r.gen_range(0..k)).collect();
        let mut disks: Vec<Option<TwoComplex>> = oracles
            .iter()
            .enumerate()
            .map(|(i, o)| o.find(|x| !in_w[x] && part[x] == i))
            .collect();
        let mut used = vec![false; n];
        for d in disks.iter().flatten() {
            mark_interior(d, &in_w, &mut used);
        }
        for i in 0..k {
            if disks[i].is_none() {
                if let Some(d) = oracles[i].find(|x| !in_w[x] && !used[x]) {
                    mark_interior(&d, &in_w, &mut used);
                    disks[i] = Some(d);
                }
            }
        }
        if disks.iter().all(Option::is_some) {
            return Ok(Ok(disks.into_iter().map(Option::unwrap).collect()));
        }
        for (i, d) in disks.iter().enumerate() {
            if d.is_none() {
                failed[i] += 1;
            }
        }
    }
    let diagnostics = cycles
        .iter()
        .enumerate()
        .map(|(i, c)| CycleDiagnostic {
            index: i,
            cycle: c.vertices(),
            has_any_disk: oracles[i].exists(|x| !in_w[x]),
            failed_attempts: failed[i],
        })
        .collect();
    Ok(Err(GlueFailure {
        attempts,
        cycles: diagnostics,
    }))
}

fn mark_interior(d: &TwoComplex, in_w: &[bool], used: &mut [bool]) {
    for &x in d.vertices() {
        if !in_w[x] {
            used[x] = true;
        }
    }
}

/// Interior vertices of each disk (vertices off its boundary cycle).
pub fn interiors(cycles: &[FourCycle], disks: &[TwoComplex]) -> Vec<BTreeSet<Vertex>> {
    cycles
        .iter()
        .zip(disks)
        .map(|(c, d)| {
            d.vertices()
                .iter()
                .copied()
                .filter(|x| !c.vertices().contains(x))
                .collect()
        })
        .collect()
}
