//! Re-checks a certificate from scratch against the hypergraph, using only
//! the hypergraph and complex primitives.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::complex::{complex_intersection, ComplexKind, SimplicialComplex, TwoComplex};
use crate::error::{Error, Result};
use crate::hypergraph::{sorted2, Hypergraph3, Vertex};
use crate::search::{HomeomorphCertificate, Target};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<Check>,
    pub target_confirmed: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const CHECK_TRIANGLES: &str = "triangles-in-hypergraph";
pub const CHECK_DISKS: &str = "disks-bound-cycles";
pub const CHECK_INTERSECTIONS: &str = "pairwise-intersections";
pub const CHECK_PATTERN: &str = "pattern";

/// Runs, in order: (a) every triangle is an edge of `h`; (b) each disk is a
/// boundary-inducing disk bounded by its cycle; (c) any two disks meet
/// exactly in the intersection of their cycles; (d) the pattern: the image
/// of `Γ_t` for `K_t^(3)`, or the closed surface type of the union.
///
/// A certificate with mismatched counts or vertices outside `h` is an error,
/// not a failed check.
pub fn verify_certificate(
    h: &Hypergraph3,
    cert: &HomeomorphCertificate,
) -> Result<VerificationReport> {
    cert.check_shape()?;
    if let Target::Ktt(t) = cert.target {
        if t < 3 {
            return Err(Error::MalformedCertificate(format!(
                "ktt target needs t >= 3, got {t}"
            )));
        }
    }
    let n = h.num_vertices();
    let out_of_range = cert
        .embedding
        .values()
        .chain(cert.cycles.iter().flat_map(|c| c.0.iter()))
        .find(|&&x| x >= n);
    if let Some(&x) = out_of_range {
        return Err(Error::MalformedCertificate(format!(
            "vertex {x} is not in the hypergraph"
        )));
    }

    let mut checks = vec![
        check_triangles(h, cert),
        check_disks(cert),
        check_intersections(cert),
    ];
    let pattern = match cert.target {
        Target::Ktt(t) => check_ktt_pattern(h, cert, t),
        Target::Torus => check_surface(cert, 0, false),
        Target::ProjectivePlane => check_surface(cert, 1, true),
        Target::Sphere => check_surface(cert, 2, false),
    };
    let target_confirmed = pattern.passed;
    checks.push(pattern);
    Ok(VerificationReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
        target_confirmed,
    })
}

fn check(name: &str, failures: Vec<String>, ok_detail: String) -> Check {
    Check {
        name: name.into(),
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            ok_detail
        } else {
            failures.join("; ")
        },
    }
}

fn check_triangles(h: &Hypergraph3, cert: &HomeomorphCertificate) -> Check {
    let mut failures = Vec::new();
    let mut total = 0;
    for (i, disk) in cert.disks.iter().enumerate() {
        for &[a, b, c] in disk {
            total += 1;
            let inside = [a, b, c].iter().all(|&x| x < h.num_vertices()) && h.contains(a, b, c);
            if !inside {
                failures.push(format!("disk {i}: {:?} is not an edge", [a, b, c]));
            }
        }
    }
    check(CHECK_TRIANGLES, failures, format!("{total} triangles"))
}

fn cycle_edges(c: &[Vertex; 4]) -> BTreeSet<(Vertex, Vertex)> {
    (0..4).map(|i| sorted2(c[i], c[(i + 1) % 4])).collect()
}

fn check_disks(cert: &HomeomorphCertificate) -> Check {
    let mut failures = Vec::new();
    for (i, (cycle, tris)) in cert.cycles.iter().zip(&cert.disks).enumerate() {
        let distinct: BTreeSet<_> = cycle.0.iter().collect();
        if distinct.len() != 4 {
            failures.push(format!("disk {i}: cycle {:?} repeats a vertex", cycle.0));
            continue;
        }
        let disk = match TwoComplex::try_new(tris.iter().copied()) {
            Ok(d) => d,
            Err(e) => {
                failures.push(format!("disk {i}: {e}"));
                continue;
            }
        };
        let class = disk.classify();
        if class.kind != ComplexKind::Disk {
            failures.push(format!("disk {i}: classified as {:?}", class.kind));
            continue;
        }
        let boundary: BTreeSet<_> = disk.boundary().edges.into_iter().collect();
        if boundary != cycle_edges(&cycle.0) {
            failures.push(format!(
                "disk {i}: boundary differs from cycle {:?}",
                cycle.0
            ));
            continue;
        }
        if disk.is_boundary_inducing() != Ok(true) {
            failures.push(format!("disk {i}: not boundary-inducing"));
        }
    }
    check(CHECK_DISKS, failures, format!("{} disks", cert.disks.len()))
}

/// Disk complexes for the intersection check; degenerate triangles were
/// already reported by the disk check and are dropped here.
fn disk_complexes(cert: &HomeomorphCertificate) -> Vec<TwoComplex> {
    cert.disks
        .iter()
        .map(|tris| {
            TwoComplex::new(
                tris.iter()
                    .copied()
                    .filter(|t| t[0] != t[1] && t[1] != t[2] && t[0] != t[2]),
            )
        })
        .collect()
}

fn check_intersections(cert: &HomeomorphCertificate) -> Check {
    let complexes = disk_complexes(cert);
    let cycles: Vec<SimplicialComplex> = cert
        .cycles
        .iter()
        .map(|c| SimplicialComplex::from_cycle(&c.0))
        .collect();
    let mut failures = Vec::new();
    let mut pairs = 0;
    for i in 0..complexes.len() {
        for j in i + 1..complexes.len() {
            pairs += 1;
            let expected = cycles[i].intersection(&cycles[j]);
            let forward = complex_intersection(&complexes[i], &complexes[j]);
            let backward = complex_intersection(&complexes[j], &complexes[i]);
            if forward != expected || backward != expected {
                failures.push(format!("disks {i} and {j} meet outside their cycles"));
            }
        }
    }
    check(CHECK_INTERSECTIONS, failures, format!("{pairs} pairs"))
}

fn skeleton_edge(h: &Hypergraph3, a: Vertex, b: Vertex) -> bool {
    a != b && h.incident(a).any(|t| t.contains(&b))
}

/// The special cycles of `Γ_t` as label quadruples.
fn expected_special_cycles(
    t: usize,
) -> (BTreeSet<String>, Vec<[String; 4]>, Vec<(String, String)>) {
    let single = |i: usize| format!("v{}", i + 1);
    let pair = |i: usize, j: usize| format!("v{}-{}", i + 1, j + 1);
    let mut labels = BTreeSet::new();
    let mut cycles = Vec::new();
    let mut edges = Vec::new();
    for i in 0..t {
        labels.insert(single(i));
        for j in i + 1..t {
            labels.insert(pair(i, j));
            edges.push((pair(i, j), single(i)));
            edges.push((pair(i, j), single(j)));
            for k in j + 1..t {
                let triple = format!("v{}-{}-{}", i + 1, j + 1, k + 1);
                labels.insert(triple.clone());
                for m in [i, j, k] {
                    edges.push((triple.clone(), single(m)));
                }
                for (a, b) in [(i, j), (i, k), (j, k)] {
                    cycles.push([single(a), pair(a, b), single(b), triple.clone()]);
                }
            }
        }
    }
    (labels, cycles, edges)
}

fn canonical(c: [Vertex; 4]) -> [Vertex; 4] {
    let mut best = c;
    for start in 0..4 {
        for dir in [1, 3] {
            let cand: [Vertex; 4] = std::array::from_fn(|i| c[(start + dir * i) % 4]);
            best = best.min(cand);
        }
    }
    best
}

fn check_ktt_pattern(h: &Hypergraph3, cert: &HomeomorphCertificate, t: usize) -> Check {
    let (labels, cycles, edges) = expected_special_cycles(t);
    let mut failures = Vec::new();
    let keys: BTreeSet<String> = cert.embedding.keys().cloned().collect();
    if keys != labels {
        failures.push(format!(
            "embedding has {} labels, Γ_{t} has {}",
            keys.len(),
            labels.len()
        ));
        return check(CHECK_PATTERN, failures, String::new());
    }
    let image: BTreeSet<Vertex> = cert.embedding.values().copied().collect();
    if image.len() != cert.embedding.len() {
        failures.push("embedding is not injective".into());
    }
    let at = |s: &String| cert.embedding[s];
    for (a, b) in &edges {
        if !skeleton_edge(h, at(a), at(b)) {
            failures.push(format!("edge {a} {b} maps to a non-edge"));
        }
    }
    let mut want: Vec<[Vertex; 4]> = cycles
        .iter()
        .map(|c| canonical(c.clone().map(|s| at(&s))))
        .collect();
    let mut have: Vec<[Vertex; 4]> = cert.cycles.iter().map(|c| canonical(c.0)).collect();
    want.sort_unstable();
    have.sort_unstable();
    if want != have {
        failures.push("cycle list is not the image of the special cycles".into());
    }
    check(
        CHECK_PATTERN,
        failures,
        format!(
            "Γ_{t} embedded on {} vertices, {} special cycles",
            labels.len(),
            cycles.len()
        ),
    )
}

fn check_surface(cert: &HomeomorphCertificate, euler: i64, non_orientable: bool) -> Check {
    let union = TwoComplex::new(
        disk_complexes(cert)
            .iter()
            .flat_map(|d| d.triangles().to_vec()),
    );
    let class = union.classify();
    let want_orientable = !non_orientable;
    let ok = class.kind == ComplexKind::ClosedSurface
        && class.euler == euler
        && class.orientable == Some(want_orientable);
    let detail = format!(
        "union: {:?}, euler {}, orientable {:?}",
        class.kind, class.euler, class.orientable
    );
    Check {
        name: CHECK_PATTERN.into(),
        passed: ok,
        detail,
    }
}

/// Summary used by the CLI: names of failed checks keyed by check name.
pub fn failed_checks(report: &VerificationReport) -> BTreeMap<String, String> {
    report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| (c.name.clone(), c.detail.clone()))
        .collect()
}
