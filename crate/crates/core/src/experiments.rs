//! Instance generators, corpus audits and threshold sweeps.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::coverability::{inadmissible_p2_audit, weighted_inadmissibility_grid, AuditReport};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph3, SkeletonGraph, Vertex};
use crate::rng;
use crate::search::{find, SearchParams, Target};

pub const SWEEP_HEADER: &str = "n,c,p,trial,target,found,stage,seconds";
pub const AUDIT_HEADER: &str = "graph_id,n,p,epsilon,weighted_sum,bound,holds";

/// Calibration grid for `p = c / √n`.
pub const DEFAULT_C_GRID: [f64; 5] = [0.2, 0.5, 1.0, 2.0, 4.0];

/// Largest graph that also gets the exact `(p, ε)` audit.
pub const GRID_AUDIT_MAX_N: usize = 14;

/// `G^(3)(n, p)`: every triple, in lexicographic order, kept with
/// probability `p`.
pub fn random_hypergraph(n: usize, p: f64, seed: u64) -> Result<Hypergraph3> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "p must lie in [0, 1], got {p}"
        )));
    }
    let mut r = rng::indexed(rng::derive(seed, rng::STREAM_GENERATOR), 0);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if r.gen_bool(p) {
                    edges.push([a, b, c]);
                }
            }
        }
    }
    Hypergraph3::new(n, edges)
}

/// `G(n, q)`: every pair kept with probability `q`.
pub fn random_graph(n: usize, q: f64, seed: u64) -> Result<SkeletonGraph> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "q must lie in [0, 1], got {q}"
        )));
    }
    let mut r = rng::indexed(rng::derive(seed, rng::STREAM_GENERATOR), 1);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if r.gen_bool(q) {
                edges.push((a, b));
            }
        }
    }
    SkeletonGraph::new(n, edges)
}

/// A clique on `√n` vertices with the other `n - √n` vertices hanging off
/// clique vertex 0.
pub fn clique_pendant_graph(n: usize) -> Result<SkeletonGraph> {
    let k = (n as f64).sqrt().round() as usize;
    if n < 4 || k * k != n {
        return Err(Error::InvalidParameter(format!(
            "n must be a perfect square >= 4, got {n}"
        )));
    }
    let mut edges = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            edges.push((a, b));
        }
    }
    edges.extend((k..n).map(|x| (0, x)));
    SkeletonGraph::new(n, edges)
}

/// Every unlabelled tree on `1..=max_n` vertices, one representative each.
pub fn all_free_trees(max_n: usize) -> Vec<SkeletonGraph> {
    let mut out = Vec::new();
    if max_n == 0 {
        return out;
    }
    // Trees as parent arrays: vertex i > 0 hangs off parent[i] < i.
    let mut level: Vec<Vec<Vertex>> = vec![vec![]];
    for n in 1..=max_n {
        if n > 1 {
            let mut seen = BTreeSet::new();
            let mut next = Vec::new();
            for tree in &level {
                for p in 0..n - 1 {
                    let mut grown = tree.clone();
                    grown.push(p);
                    if seen.insert(tree_code(&grown)) {
                        next.push(grown);
                    }
                }
            }
            level = next;
        }
        for tree in &level {
            let edges = tree.iter().enumerate().map(|(i, &p)| (p, i + 1));
            out.push(SkeletonGraph::new(n, edges).expect("tree edges are valid"));
        }
    }
    out
}

/// Canonical form of an unrooted tree: the smaller AHU string over its
/// centres.
fn tree_code(parents: &[Vertex]) -> String {
    let n = parents.len() + 1;
    let mut adj = vec![Vec::new(); n];
    for (i, &p) in parents.iter().enumerate() {
        adj[p].push(i + 1);
        adj[i + 1].push(p);
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut leaves: Vec<Vertex> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= leaves.len();
        let mut next = Vec::new();
        for &leaf in &leaves {
            degree[leaf] = 0;
            for &x in &adj[leaf] {
                if degree[x] > 0 {
                    degree[x] -= 1;
                    if degree[x] == 1 {
                        next.push(x);
                    }
                }
            }
        }
        leaves = next;
    }
    leaves
        .iter()
        .map(|&c| rooted_code(&adj, c, usize::MAX))
        .min()
        .unwrap_or_default()
}

fn rooted_code(adj: &[Vec<Vertex>], v: Vertex, parent: Vertex) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&x| x != parent)
        .map(|&x| rooted_code(adj, x, v))
        .collect();
    kids.sort_unstable();
    format!("({})", kids.concat())
}

/// One named input of an audit corpus; unreadable inputs carry their error.
pub type CorpusEntry = (String, Result<SkeletonGraph>);

/// Seeded `G(n, q)` graphs with `n` uniform in `n_range` and average degree
/// uniform in `[0.5, 6]`.
pub fn random_graph_corpus(count: usize, n_range: (usize, usize), seed: u64) -> Vec<CorpusEntry> {
    (0..count)
        .map(|i| {
            let mut r = rng::indexed(rng::derive(seed, rng::STREAM_GENERATOR), 2 + i as u64);
            let n = r.gen_range(n_range.0..=n_range.1);
            let q = (r.gen_range(0.5..6.0) / (n.max(2) - 1) as f64).min(1.0);
            let graph_seed = r.gen();
            (format!("gnq-{i}"), random_graph(n, q, graph_seed))
        })
        .collect()
}

/// Seeded random graphs, all trees on at most 10 vertices and the
/// clique-pendant graphs on 16, 25 and 36 vertices.
pub fn standard_corpus(random_count: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut corpus = random_graph_corpus(random_count, (10, 200), seed);
    for (i, tree) in all_free_trees(10).into_iter().enumerate() {
        corpus.push((format!("tree-{}-{i}", tree.num_vertices()), Ok(tree)));
    }
    for n in [16, 25, 36] {
        corpus.push((format!("clique-pendant-{n}"), clique_pendant_graph(n)));
    }
    corpus
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditRow {
    pub graph_id: String,
    pub n: Option<usize>,
    pub p: String,
    pub epsilon: String,
    pub weighted_sum: String,
    pub bound: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl AuditRow {
    fn from_report(graph_id: &str, report: &AuditReport) -> Self {
        Self {
            graph_id: graph_id.to_string(),
            n: Some(report.n),
            p: crate::coverability::format_fraction(&report.p),
            epsilon: crate::coverability::format_fraction(&report.epsilon),
            weighted_sum: report.weighted_sum_fraction(),
            bound: report.bound_fraction(),
            holds: report.holds,
            error: None,
        }
    }

    fn failed(graph_id: &str, e: &Error) -> Self {
        Self {
            graph_id: graph_id.to_string(),
            n: None,
            p: String::new(),
            epsilon: String::new(),
            weighted_sum: String::new(),
            bound: String::new(),
            holds: false,
            error: Some(e.to_string()),
        }
    }
}

/// The cycle audit on every graph (reported with `p = ε = 1`), plus the
/// exact `(p, ε)` audit for every grid point on graphs with at most
/// [`GRID_AUDIT_MAX_N`] vertices. Rows follow corpus order.
pub fn audit_corpus(corpus: &[CorpusEntry], grid: &[(f64, f64)]) -> Vec<AuditRow> {
    corpus
        .par_iter()
        .map(|(id, g)| match g {
            Err(e) => vec![AuditRow::failed(id, e)],
            Ok(g) => {
                let mut rows = vec![AuditRow::from_report(id, &inadmissible_p2_audit(g))];
                if g.num_vertices() <= GRID_AUDIT_MAX_N && !grid.is_empty() {
                    match weighted_inadmissibility_grid(g, grid) {
                        Ok(reports) => {
                            rows.extend(reports.iter().map(|r| AuditRow::from_report(id, r)))
                        }
                        Err(e) => rows.push(AuditRow::failed(id, &e)),
                    }
                }
                rows
            }
        })
        .collect::<Vec<_>>()
        .concat()
}

pub fn audit_csv(rows: &[AuditRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(AUDIT_HEADER.split(','))
        .expect("write to memory");
    for r in rows {
        let n = r.n.map(|n| n.to_string()).unwrap_or_default();
        let sum = match &r.error {
            Some(e) => format!("error: {e}"),
            None => r.weighted_sum.clone(),
        };
        let holds = if r.holds { "true" } else { "false" };
        w.write_record([&r.graph_id, &n, &r.p, &r.epsilon, &sum, &r.bound, holds])
            .expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub target: Target,
    pub ns: Vec<usize>,
    pub cs: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Finder parameters; `seed` is replaced per trial.
    pub params: SearchParams,
    /// Record wall-clock seconds per trial. Off by default so that output
    /// is reproducible byte for byte.
    pub timing: bool,
}

impl SweepConfig {
    pub fn new(target: Target, ns: Vec<usize>, trials: usize, seed: u64) -> Self {
        let params = match target {
            Target::Ktt(t) => SearchParams::ktt(t),
            _ => SearchParams::surface(),
        };
        Self {
            target,
            ns,
            cs: DEFAULT_C_GRID.to_vec(),
            trials,
            seed,
            params,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub c: f64,
    pub p: f64,
    /// `c / √n` fell outside `[0, 1]` and was clamped.
    pub clamped: bool,
    pub trial: usize,
    pub target: String,
    pub found: bool,
    pub stage: String,
    pub seconds: Option<f64>,
}

/// `p = c / √n` clamped to `[0, 1]`, and whether clamping happened.
pub fn sweep_probability(n: usize, c: f64) -> (f64, bool) {
    let p = c / (n as f64).sqrt();
    if p > 1.0 {
        (1.0, true)
    } else if p.is_nan() || p < 0.0 {
        (0.0, true)
    } else {
        (p, false)
    }
}

fn cell_seed(seed: u64, n: usize, c: f64, trial: usize) -> u64 {
    [n as u64, c.to_bits(), trial as u64]
        .iter()
        .fold(rng::derive(seed, rng::STREAM_GENERATOR), |acc, &x| {
            rng::mix64(acc ^ x)
        })
}

/// Runs the finder on `G^(3)(n, c/√n)` for every `(n, c, trial)`, in
/// parallel. Rows are sorted by `(n, c, trial)`.
pub fn threshold_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    if let Target::Ktt(t) = config.target {
        if t < 3 {
            return Err(Error::InvalidParameter(format!(
                "t must be at least 3, got {t}"
            )));
        }
    }
    config.params.validate()?;
    let cells: Vec<(usize, f64, usize)> = config
        .ns
        .iter()
        .flat_map(|&n| {
            config
                .cs
                .iter()
                .flat_map(move |&c| (0..config.trials).map(move |trial| (n, c, trial)))
        })
        .collect();
    let mut rows = cells
        .par_iter()
        .map(|&(n, c, trial)| {
            let (p, clamped) = sweep_probability(n, c);
            let key = cell_seed(config.seed, n, c, trial);
            let start = Instant::now();
            let h = random_hypergraph(n, p, key)?;
            let params = config.params.with_seed(key);
            let outcome = find(&h, config.target, &params)?;
            let seconds = config.timing.then(|| start.elapsed().as_secs_f64());
            let (found, stage) = match &outcome {
                Ok(_) => (true, "complete".to_string()),
                Err(f) => (false, f.stage.to_string()),
            };
            Ok(SweepRow {
                n,
                c,
                p,
                clamped,
                trial,
                target: config.target.to_string(),
                found,
                stage,
                seconds,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        (a.n, a.c, a.trial)
            .partial_cmp(&(b.n, b.c, b.trial))
            .expect("grid values are finite")
    });
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER.split(','))
        .expect("write to memory");
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.c.to_string(),
            r.p.to_string(),
            r.trial.to_string(),
            r.target.clone(),
            r.found.to_string(),
            r.stage.clone(),
            r.seconds.map(|s| format!("{s:.6}")).unwrap_or_default(),
        ])
        .expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

/// Found-rate per `(n, c)` cell, in row order.
pub fn found_rates(rows: &[SweepRow]) -> Vec<(usize, f64, f64)> {
    let mut out: Vec<(usize, f64, usize, usize)> = Vec::new();
    for r in rows {
        match out.last_mut() {
            Some(last) if last.0 == r.n && last.1 == r.c => {
                last.2 += r.found as usize;
                last.3 += 1;
            }
            _ => out.push((r.n, r.c, r.found as usize, 1)),
        }
    }
    out.into_iter()
        .map(|(n, c, hits, total)| (n, c, hits as f64 / total as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_hypergraph_extremes() {
        assert_eq!(random_hypergraph(8, 0.0, 1).unwrap().num_edges(), 0);
        assert_eq!(
            random_hypergraph(8, 1.0, 1).unwrap(),
            Hypergraph3::complete(8)
        );
        assert!(random_hypergraph(8, 1.5, 1).is_err());
        assert_eq!(
            random_hypergraph(12, 0.3, 9).unwrap(),
            random_hypergraph(12, 0.3, 9).unwrap()
        );
    }

    #[test]
    fn clique_pendant_shape() {
        let g = clique_pendant_graph(16).unwrap();
        assert_eq!(g.degree(0), 15);
        assert_eq!(g.num_edges(), 6 + 12);
        let g = clique_pendant_graph(4).unwrap();
        assert_eq!(g.num_edges(), 1 + 2);
        assert!(clique_pendant_graph(15).is_err());
        assert!(clique_pendant_graph(1).is_err());
    }

    #[test]
    fn tree_counts() {
        let trees = all_free_trees(10);
        let mut counts = vec![0; 11];
        for t in &trees {
            assert_eq!(t.num_edges() + 1, t.num_vertices());
            counts[t.num_vertices()] += 1;
        }
        assert_eq!(&counts[1..], &[1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
    }

    #[test]
    fn corpus_rows() {
        let corpus = vec![
            ("cp16".to_string(), clique_pendant_graph(16)),
            ("empty".to_string(), SkeletonGraph::new(5, [])),
            ("bad".to_string(), clique_pendant_graph(15)),
        ];
        let rows = audit_corpus(&corpus, &[(0.5, 0.2)]);
        assert_eq!(rows[0].weighted_sum, "102/15");
        assert_eq!(rows[1].weighted_sum, "0/1");
        assert_eq!(rows[2].p, "1/2");
        assert!(rows[3].error.is_some());
        let csv = audit_csv(&rows);
        assert!(csv.starts_with(AUDIT_HEADER));
        assert_eq!(csv.lines().count(), 1 + rows.len());
    }

    #[test]
    fn sweep_clamps_and_sorts() {
        assert_eq!(sweep_probability(4, 4.0), (1.0, true));
        assert_eq!(sweep_probability(16, 2.0), (0.5, false));
        let mut config = SweepConfig::new(Target::Sphere, vec![9, 8], 2, 3);
        config.cs = vec![4.0, 0.2];
        let rows = threshold_sweep(&config).unwrap();
        assert_eq!(rows.len(), 8);
        let keys: Vec<_> = rows.iter().map(|r| (r.n, r.c, r.trial)).collect();
        assert_eq!(keys[0], (8, 0.2, 0));
        assert_eq!(keys[7], (9, 4.0, 1));
        assert!(rows
            .iter()
            .filter(|r| r.c == 4.0)
            .all(|r| r.clamped && r.p == 1.0));
        let csv = sweep_csv(&rows);
        assert!(csv.starts_with(SWEEP_HEADER));
        assert_eq!(csv, sweep_csv(&threshold_sweep(&config).unwrap()));
    }
}
