use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hypertopo::complex::TwoComplex;
use hypertopo::coverability::{
    exact_admissibility, exact_pyramid_coverability, format_fraction, sample_admissibility,
    sample_disk_coverability, CoverabilityEstimate, EstimatorParams, FourCycle, Strategy,
};
use hypertopo::experiments::{
    audit_corpus, audit_csv, clique_pendant_graph, random_hypergraph, standard_corpus, sweep_csv,
    threshold_sweep, CorpusEntry, SweepConfig,
};
use hypertopo::io::{self, Labels};
use hypertopo::search::{find, HomeomorphCertificate, SearchParams, Target};
use hypertopo::verify::verify_certificate;
use hypertopo::{Error, Hypergraph3};

#[derive(Parser)]
#[command(
    name = "hypertopo",
    version,
    about = "Disks, coverability and homeomorph search in 3-uniform hypergraphs"
)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo trials per estimate.
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true)]
    p: Option<f64>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetArg {
    Ktt,
    Torus,
    Rp2,
    Sphere,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Gnp3,
    CliquePendant,
    Complete,
}

#[derive(Subcommand)]
enum Command {
    /// 1-skeleton of a hypergraph, as an edge list.
    Skeleton { file: PathBuf },
    /// Link of a vertex, or the intersection of two links.
    Link {
        file: PathBuf,
        vertex: String,
        other: Option<String>,
    },
    /// Classify a triangle list.
    Classify { file: PathBuf },
    /// Whether a triangle list is a boundary-inducing disk, optionally with a
    /// given boundary cycle.
    CheckDisk {
        file: PathBuf,
        #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"])]
        cycle: Option<Vec<String>>,
    },
    /// Disk-coverability of a 4-cycle in the 1-skeleton.
    Coverability {
        file: PathBuf,
        #[arg(num_args = 4, value_names = ["A", "B", "C", "D"], required = true)]
        cycle: Vec<String>,
        /// Also accept non-pyramid disks with at most this many interior vertices.
        #[arg(long)]
        max_interior: Option<usize>,
        /// Exact pyramid coverability by subset enumeration (at most 25 vertices).
        #[arg(long)]
        exact: bool,
    },
    /// Admissibility of a path `w u w'` in a graph given as an edge list.
    Admissibility {
        file: PathBuf,
        #[arg(num_args = 3, value_names = ["W", "U", "W2"], required = true)]
        path: Vec<String>,
        #[arg(long)]
        exact: bool,
    },
    /// Weighted audits of inadmissible paths over edge-list files, or over the
    /// built-in corpus when no file is given.
    Audit {
        files: Vec<PathBuf>,
        /// Random graphs in the built-in corpus.
        #[arg(long, default_value_t = 500)]
        random: usize,
        /// Exact (p, ε) audit over {0.3,0.5,0.7}×{0.2,0.4,0.6} for graphs on at
        /// most 14 vertices; --p/--epsilon select a single point instead.
        #[arg(long)]
        grid: bool,
    },
    /// Search for a homeomorph and print its certificate.
    Find {
        file: PathBuf,
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long, default_value_t = 3)]
        t: usize,
        #[arg(long)]
        retries: Option<usize>,
    },
    /// Re-check a certificate against its hypergraph.
    Verify { file: PathBuf, certificate: PathBuf },
    /// Generate a hypergraph (gnp3, complete) or graph (clique-pendant).
    Gen {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        n: usize,
    },
    /// Found-rate of a finder on G^(3)(n, c/√n).
    Sweep {
        #[arg(long, value_enum, default_value_t = TargetArg::Sphere)]
        target: TargetArg,
        #[arg(long, default_value_t = 3)]
        t: usize,
        #[arg(long = "n", num_args = 1.., required = true)]
        ns: Vec<usize>,
        #[arg(long = "c", num_args = 1..)]
        cs: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        trials_per_cell: usize,
        /// Fill the seconds column (output is then no longer reproducible).
        #[arg(long)]
        timing: bool,
    },
}

/// Failure to run at all (bad input, bad arguments): exit code 2.
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<bool, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn read_h3(path: &Path) -> Result<(Hypergraph3, Labels), UsageError> {
    io::parse_h3(&read(path)?).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn emit(cli: &Cli, text: &str) -> Result<(), UsageError> {
    match &cli.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(cli: &Cli, value: &serde_json::Value) -> Result<(), UsageError> {
    let mut text = serde_json::to_string_pretty(value).expect("json serializes");
    text.push('\n');
    emit(cli, &text)
}

fn estimator(cli: &Cli, default_p: f64, default_eps: f64) -> Result<EstimatorParams, UsageError> {
    Ok(EstimatorParams::new(
        cli.p.unwrap_or(default_p),
        cli.epsilon.unwrap_or(default_eps),
        cli.trials.unwrap_or(1000),
        cli.seed,
    )?)
}

fn target(arg: TargetArg, t: usize) -> Target {
    match arg {
        TargetArg::Ktt => Target::Ktt(t),
        TargetArg::Torus => Target::Torus,
        TargetArg::Rp2 => Target::ProjectivePlane,
        TargetArg::Sphere => Target::Sphere,
    }
}

fn search_params(cli: &Cli, target: Target) -> SearchParams {
    let mut params = match target {
        Target::Ktt(t) => SearchParams::ktt(t),
        _ => SearchParams::surface(),
    };
    params.seed = cli.seed;
    if let Some(p) = cli.p {
        params.p = p;
    }
    if let Some(e) = cli.epsilon {
        params.epsilon = e;
    }
    if let Some(trials) = cli.trials {
        params.trials = trials;
    }
    params
}

fn estimate_json(est: &CoverabilityEstimate, params: &EstimatorParams) -> serde_json::Value {
    json!({
        "p": params.p,
        "epsilon": params.epsilon,
        "trials": est.trials,
        "successes": est.successes,
        "estimate": est.estimate,
        "coverable": est.decided_coverable,
    })
}

fn estimate_text(est: &CoverabilityEstimate, params: &EstimatorParams) -> String {
    format!(
        "p = {}, epsilon = {}\nestimate = {}/{} = {}\ncoverable = {}\n",
        params.p, params.epsilon, est.successes, est.trials, est.estimate, est.decided_coverable
    )
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Skeleton { file } => {
            let (h, labels) = read_h3(file)?;
            emit(cli, &io::write_edge_list(&h.skeleton(), &labels))?;
            Ok(true)
        }
        Command::Link {
            file,
            vertex,
            other,
        } => {
            let (h, labels) = read_h3(file)?;
            let u = labels.require(vertex)?;
            let g = match other {
                None => h.link(u)?,
                Some(o) => h.link_intersection(u, labels.require(o)?)?,
            };
            emit(cli, &io::write_edge_list(&g, &labels))?;
            Ok(true)
        }
        Command::Classify { file } => {
            let (x, _) = io::parse_complex(&read(file)?)?;
            let c = x.classify();
            if cli.format == Format::Json {
                emit_json(
                    cli,
                    &json!({ "classification": c, "surface": c.surface_name() }),
                )?;
            } else {
                emit(
                    cli,
                    &format!(
                        "kind = {:?}\neuler = {}\norientable = {}\nboundary_components = {}\n",
                        c.kind,
                        c.euler,
                        c.orientable.map_or("n/a".into(), |o| o.to_string()),
                        c.boundary_components
                    ),
                )?;
            }
            Ok(true)
        }
        Command::CheckDisk { file, cycle } => {
            let (x, labels) = io::parse_complex(&read(file)?)?;
            check_disk(cli, &x, &labels, cycle.as_deref())
        }
        Command::Coverability {
            file,
            cycle,
            max_interior,
            exact,
        } => {
            let (h, labels) = read_h3(file)?;
            let ids: Vec<_> = cycle
                .iter()
                .map(|s| labels.require(s))
                .collect::<Result<_, _>>()?;
            let c = FourCycle::new(ids[0], ids[1], ids[2], ids[3]);
            let mut params = estimator(cli, 1.0 / 18.0, 1.0 / 163.0)?;
            if let Some(k) = max_interior {
                params = params.with_strategy(Strategy::ExhaustiveSmall { max_interior: *k });
            }
            let est = sample_disk_coverability(&h, &c, &params)?;
            let exact = if *exact {
                Some(format_fraction(&exact_pyramid_coverability(
                    &h, &c, params.p,
                )?))
            } else {
                None
            };
            if cli.format == Format::Json {
                let mut v = estimate_json(&est, &params);
                if let Some(x) = exact {
                    v["exact_pyramid"] = json!(x);
                }
                emit_json(cli, &v)?;
            } else {
                let mut text = estimate_text(&est, &params);
                if let Some(x) = exact {
                    text.push_str(&format!("exact pyramid probability = {x}\n"));
                }
                emit(cli, &text)?;
            }
            Ok(true)
        }
        Command::Admissibility { file, path, exact } => {
            let (g, labels) = io::parse_edge_list(&read(file)?)?;
            let ids: Vec<_> = path
                .iter()
                .map(|s| labels.require(s))
                .collect::<Result<_, _>>()?;
            let params = estimator(cli, 0.5, 0.1)?;
            let est = sample_admissibility(&g, ids[0], ids[1], ids[2], &params)?;
            let exact = if *exact {
                Some(format_fraction(&exact_admissibility(
                    &g, ids[0], ids[1], ids[2], params.p,
                )?))
            } else {
                None
            };
            if cli.format == Format::Json {
                let mut v = estimate_json(&est, &params);
                if let Some(x) = exact {
                    v["exact"] = json!(x);
                }
                emit_json(cli, &v)?;
            } else {
                let mut text = estimate_text(&est, &params);
                if let Some(x) = exact {
                    text.push_str(&format!("exact probability = {x}\n"));
                }
                emit(cli, &text)?;
            }
            Ok(true)
        }
        Command::Audit {
            files,
            random,
            grid,
        } => audit(cli, files, *random, *grid),
        Command::Find {
            file,
            target: arg,
            t,
            retries,
        } => {
            let (h, labels) = read_h3(file)?;
            let target = target(*arg, *t);
            let mut params = search_params(cli, target);
            if let Some(r) = retries {
                params.max_retries = *r;
            }
            match find(&h, target, &params)? {
                Ok(cert) => {
                    let report = verify_certificate(&h, &cert)?;
                    let report = serde_json::to_value(&report).expect("report serializes");
                    emit_json(cli, &cert.to_json(&labels, Some(report)))?;
                    Ok(true)
                }
                Err(failure) => {
                    if cli.format == Format::Json {
                        emit_json(
                            cli,
                            &serde_json::to_value(&failure).expect("failure serializes"),
                        )?;
                    } else {
                        emit(
                            cli,
                            &format!(
                                "not found: {} stopped at stage {} after {} retries\n{}\n",
                                failure.target, failure.stage, failure.retries, failure.detail
                            ),
                        )?;
                    }
                    Ok(false)
                }
            }
        }
        Command::Verify { file, certificate } => {
            let (h, labels) = read_h3(file)?;
            let doc: serde_json::Value = serde_json::from_str(&read(certificate)?)
                .map_err(|e| UsageError(format!("{}: {e}", certificate.display())))?;
            let cert = HomeomorphCertificate::from_json(&doc, &labels)?;
            let report = verify_certificate(&h, &cert)?;
            if cli.format == Format::Json {
                emit_json(
                    cli,
                    &serde_json::to_value(&report).expect("report serializes"),
                )?;
            } else {
                let mut text = String::new();
                for c in &report.checks {
                    let mark = if c.passed { "ok  " } else { "FAIL" };
                    text.push_str(&format!("{mark} {}: {}\n", c.name, c.detail));
                }
                text.push_str(&format!(
                    "{} {}\n",
                    cert.target,
                    if report.passed {
                        "verified"
                    } else {
                        "rejected"
                    }
                ));
                emit(cli, &text)?;
            }
            Ok(report.passed)
        }
        Command::Gen { model, n } => {
            let text = match model {
                Model::Gnp3 => {
                    let p = cli
                        .p
                        .ok_or_else(|| UsageError("gen --model gnp3 needs --p".into()))?;
                    io::write_h3(&random_hypergraph(*n, p, cli.seed)?, &Labels::numeric(*n))
                }
                Model::Complete => io::write_h3(&Hypergraph3::complete(*n), &Labels::numeric(*n)),
                Model::CliquePendant => {
                    io::write_edge_list(&clique_pendant_graph(*n)?, &Labels::numeric(*n))
                }
            };
            emit(cli, &text)?;
            Ok(true)
        }
        Command::Sweep {
            target: arg,
            t,
            ns,
            cs,
            trials_per_cell,
            timing,
        } => {
            let target = target(*arg, *t);
            let mut config = SweepConfig::new(target, ns.clone(), *trials_per_cell, cli.seed);
            if !cs.is_empty() {
                config.cs = cs.clone();
            }
            config.params = search_params(cli, target);
            config.timing = *timing;
            let rows = threshold_sweep(&config)?;
            for r in rows.iter().filter(|r| r.clamped && r.trial == 0) {
                eprintln!("warning: n = {}, c = {}: p clamped to {}", r.n, r.c, r.p);
            }
            if cli.format == Format::Json {
                emit_json(cli, &serde_json::to_value(&rows).expect("rows serialize"))?;
            } else {
                emit(cli, &sweep_csv(&rows))?;
            }
            Ok(true)
        }
    }
}

fn check_disk(cli: &Cli, x: &TwoComplex, labels: &Labels, cycle: Option<&[String]>) -> CmdResult {
    let class = x.classify();
    let is_disk = class.kind == hypertopo::ComplexKind::Disk;
    let inducing = is_disk && x.is_boundary_inducing().unwrap_or(false);
    let boundary: Vec<String> = x
        .boundary()
        .cycle
        .unwrap_or_default()
        .iter()
        .map(|&v| labels.name(v).to_string())
        .collect();
    let matches = match cycle {
        None => true,
        Some(names) => {
            let ids: Vec<_> = names
                .iter()
                .map(|s| labels.require(s))
                .collect::<Result<_, _>>()?;
            let c = FourCycle::new(ids[0], ids[1], ids[2], ids[3]);
            let mut want: Vec<_> = c.edges().to_vec();
            want.sort_unstable();
            is_disk && x.boundary().edges == want
        }
    };
    let ok = is_disk && inducing && matches;
    if cli.format == Format::Json {
        emit_json(
            cli,
            &json!({
                "disk": is_disk,
                "boundary_inducing": inducing,
                "boundary": boundary,
                "matches_cycle": cycle.map(|_| matches),
                "euler": class.euler,
            }),
        )?;
    } else {
        let mut text = format!(
            "disk = {is_disk}\nboundary_inducing = {inducing}\nboundary = {}\n",
            boundary.join(" ")
        );
        if cycle.is_some() {
            text.push_str(&format!("matches_cycle = {matches}\n"));
        }
        emit(cli, &text)?;
    }
    Ok(ok)
}

fn audit(cli: &Cli, files: &[PathBuf], random: usize, grid: bool) -> CmdResult {
    let corpus: Vec<CorpusEntry> = if files.is_empty() {
        standard_corpus(random, cli.seed)
    } else {
        files
            .iter()
            .map(|f| {
                let g = fs::read_to_string(f)
                    .map_err(Error::from)
                    .and_then(|text| io::parse_edge_list(&text))
                    .map(|(g, _)| g);
                (f.display().to_string(), g)
            })
            .collect()
    };
    let points: Vec<(f64, f64)> = match (cli.p, cli.epsilon) {
        (Some(p), Some(e)) => vec![(p, e)],
        (None, None) if grid => [0.3, 0.5, 0.7]
            .iter()
            .flat_map(|&p| [0.2, 0.4, 0.6].map(|e| (p, e)))
            .collect(),
        (None, None) => Vec::new(),
        _ => return Err(UsageError("--p and --epsilon go together".into())),
    };
    let rows = audit_corpus(&corpus, &points);
    if cli.format == Format::Json {
        emit_json(cli, &serde_json::to_value(&rows).expect("rows serialize"))?;
    } else {
        emit(cli, &audit_csv(&rows))?;
    }
    Ok(rows.iter().all(|r| r.holds))
}
