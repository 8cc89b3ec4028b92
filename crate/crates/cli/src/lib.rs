//! Command-line front end.
//!
//! Exit codes: 0 success, 1 computation failure, 2 usage error, 3 replay
//! mismatch.

pub mod cache;
pub mod graphs;
pub mod replay;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, Context};
use capbound::bounds::{
    fstar, fstar_full, load_minrank_table, make_theta_oracle, AlphaOracle, BoundOracle,
    CliqueCoverOracle, ExactMinrankOracle, FractionalAlphaOracle, SubsetFamily,
};
use capbound::combinatorics::{fractional_independence, maximum_independent_set};
use capbound::index_coding::{
    broadcast_report, fixture_report, scheme_from_cover, separation_witness, BoundReport,
    NamedFamily,
};
use capbound::minrank::{
    minrank_exact_small, minrank_upper, replay_deletion_proof, DeletionScript, FieldSpec,
    FittingMatrix,
};
use capbound::scalar::format_rational;
use capbound::theta::lovasz_theta;
use capbound::Graph;
use clap::{Parser, Subcommand, ValueEnum};

use cache::{Bits, Cache};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "capbound",
    version,
    about = "Certified bounds on Shannon capacity and broadcast rate"
)]
pub struct Cli {
    /// Target width of ϑ intervals.
    #[arg(long, global = true, default_value_t = 1e-7)]
    pub tolerance: f64,
    /// Seed for randomized corpora.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Ignore the cache directory.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a named graph: cycle N, path N, complete N, empty N, schlafli,
    /// fixture, separation.
    Gen {
        kind: String,
        size: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Rerun the labeling search instead of loading the shipped fixture.
        #[arg(long)]
        search: bool,
    },
    /// Independence number with a witness.
    Alpha { graph: String },
    /// Fractional independence number.
    Alphaf { graph: String },
    /// Certified ϑ interval.
    Theta { graph: String },
    /// Minrank: upper end from a matrix, lower end from a deletion script,
    /// exact value for small graphs.
    Minrank {
        graph: String,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        deletion_script: Option<PathBuf>,
    },
    /// f* of an oracle over a subset family.
    Fstar {
        graph: String,
        #[arg(long, value_enum, default_value_t = OracleKind::Minrank)]
        oracle: OracleKind,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        /// Certified minrank table; implies the minrank oracle.
        #[arg(long)]
        oracle_table: Option<PathBuf>,
        #[arg(long)]
        family: Option<PathBuf>,
        /// Every nonempty subset (at most 16 vertices).
        #[arg(long, conflicts_with = "family")]
        full: bool,
        /// Also print the concatenation plan.
        #[arg(long)]
        plan: bool,
        #[arg(long)]
        json: bool,
    },
    /// Strong product.
    Product {
        left: String,
        right: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Disjoint union.
    Union {
        left: String,
        right: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bound report. `@fixture` and `@separation` get their witness reports.
    Report {
        graph: String,
        #[arg(long = "field")]
        fields: Vec<FieldSpec>,
        #[arg(long)]
        oracle_table: Option<PathBuf>,
        #[arg(long)]
        family: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
        /// Directory for the report and its certificate files.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Recompute worked examples and compare.
    Replay { case: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Alpha,
    Alphaf,
    Cover,
    Theta,
    Minrank,
}

enum Failure {
    Usage(anyhow::Error),
    Compute(anyhow::Error),
    Mismatch,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<capbound::Error> for Failure {
    fn from(e: capbound::Error) -> Self {
        Failure::Compute(e.into())
    }
}

fn usage(e: anyhow::Error) -> Failure {
    Failure::Usage(e)
}

fn load(arg: &str) -> Result<Graph, Failure> {
    graphs::load(arg).map_err(usage)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(usage)
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn std::io::Write) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Compute),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Compute(e.into())),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cache = if cli.no_cache {
        Cache::disabled()
    } else {
        Cache::from_env()
    };
    match dispatch(&cli, &cache, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            EXIT_FAILURE
        }
        Err(Failure::Mismatch) => EXIT_MISMATCH,
    }
}

fn dispatch(cli: &Cli, cache: &Cache, out: &mut dyn std::io::Write) -> Result<(), Failure> {
    let tol = cli.tolerance;
    if !(capbound::theta::MIN_TOLERANCE..=capbound::theta::MAX_TOLERANCE).contains(&tol) {
        return Err(usage(anyhow!("--tolerance {tol} outside [1e-9, 1e-3]")));
    }
    macro_rules! say {
        ($($t:tt)*) => { writeln!(out, $($t)*).map_err(|e| Failure::Compute(e.into()))? };
    }
    match &cli.command {
        Command::Gen {
            kind,
            size,
            output,
            search,
        } => {
            let name = match size {
                Some(n) => format!("{kind}:{n}"),
                None => kind.clone(),
            };
            let g = if *search && kind == "fixture" {
                capbound::minrank::fixture::search_fixture()?.graph
            } else {
                graphs::named(&name).map_err(usage)?
            };
            emit(&g.to_text(), output.as_deref(), out)?;
        }
        Command::Alpha { graph } => {
            let g = load(graph)?;
            let s = maximum_independent_set(&g)?;
            say!("{}", s.len());
            say!("witness {}", g.format_set(&s));
        }
        Command::Alphaf { graph } => {
            let g = load(graph)?;
            let key = Cache::key(&g, "alphaf", "");
            let v: String = cache.get_or_compute(&key, || -> Result<_, Failure> {
                Ok(format_rational(&fractional_independence(&g)?.value))
            })?;
            say!("{v}");
        }
        Command::Theta { graph } => {
            let g = load(graph)?;
            let key = Cache::key(&g, "theta", &format!("{tol:e}"));
            let (lo, hi): (Bits, Bits) = cache.get_or_compute(&key, || -> Result<_, Failure> {
                let t = lovasz_theta(&g, tol)?;
                if !t.converged {
                    log::warn!("ϑ solver stopped before reaching the tolerance");
                }
                Ok((Bits(t.lower), Bits(t.upper)))
            })?;
            say!("[{}, {}]", lo.0, hi.0);
        }
        Command::Minrank {
            graph,
            field,
            matrix,
            deletion_script,
        } => {
            let g = load(graph)?;
            minrank_command(
                &g,
                *field,
                matrix.as_deref(),
                deletion_script.as_deref(),
                out,
            )?;
        }
        Command::Fstar {
            graph,
            oracle,
            field,
            oracle_table,
            family,
            full,
            plan,
            json,
        } => {
            let g = load(graph)?;
            let f: Arc<dyn BoundOracle> = match (oracle_table, oracle) {
                (Some(t), _) => Arc::new(load_minrank_table(t, &g, *field)?),
                (None, OracleKind::Alpha) => Arc::new(AlphaOracle),
                (None, OracleKind::Alphaf) => Arc::new(FractionalAlphaOracle),
                (None, OracleKind::Cover) => Arc::new(CliqueCoverOracle),
                (None, OracleKind::Theta) => Arc::new(make_theta_oracle(tol)?),
                (None, OracleKind::Minrank) => Arc::new(ExactMinrankOracle::new(*field)),
            };
            let r = if *full {
                fstar_full(&g, f.as_ref())?
            } else {
                let fam = match family {
                    Some(p) => {
                        SubsetFamily::parse_text(&read(p)?, &g).map_err(|e| usage(e.into()))?
                    }
                    None => SubsetFamily::default_for(&g, [])?,
                };
                fstar(&g, f.as_ref(), &fam)?
            };
            if *json {
                say!(
                    "{}",
                    serde_json::to_string_pretty(&r).map_err(|e| Failure::Compute(e.into()))?
                );
            } else {
                say!("{}", format_rational(&r.value));
                say!("oracle {}: {}", r.oracle, r.licence.describe());
                for (s, q, v) in r.support() {
                    say!(
                        "  q{} = {}  f = {}",
                        g.format_set(s),
                        format_rational(q),
                        format_rational(v)
                    );
                }
            }
            if *plan {
                let p = scheme_from_cover(&g, &r);
                say!(
                    "plan t = {}, {} sub-codes, rate {}",
                    p.t,
                    p.transmissions(),
                    format_rational(&p.total_rate)
                );
                for b in &p.blocks {
                    say!(
                        "  {} x {} at rate {}",
                        b.copies,
                        g.format_set(&b.set),
                        format_rational(&b.rate)
                    );
                }
            }
        }
        Command::Product {
            left,
            right,
            output,
        } => {
            let g = load(left)?.strong_product(&load(right)?);
            emit(&g.to_text(), output.as_deref(), out)?;
        }
        Command::Union {
            left,
            right,
            output,
        } => {
            let g = load(left)?.disjoint_union(&load(right)?);
            emit(&g.to_text(), output.as_deref(), out)?;
        }
        Command::Report {
            graph,
            fields,
            oracle_table,
            family,
            json,
            out_dir,
        } => {
            let report = build_report(graph, fields, oracle_table.as_deref(), family, tol)?;
            let violations = report.chain_violations();
            let text = if *json {
                report.to_json()
            } else {
                report.to_text()
            };
            match out_dir {
                Some(dir) => write_report(dir, &report, &text, *json)?,
                None => say!("{}", text.trim_end()),
            }
            if !violations.is_empty() {
                return Err(Failure::Compute(anyhow!(
                    "chain violated: {}",
                    violations.join("; ")
                )));
            }
        }
        Command::Replay { case } => {
            let settings = replay::Settings {
                tolerance: tol,
                seed: cli.seed,
                cache: cache.clone(),
            };
            let ids: Vec<&str> = if case == "all" {
                replay::CASES.to_vec()
            } else if replay::CASES.contains(&case.as_str()) {
                vec![case.as_str()]
            } else {
                return Err(usage(anyhow!(
                    "unknown replay case `{case}`; expected all or one of {}",
                    replay::CASES.join(", ")
                )));
            };
            let mut mismatch = false;
            for id in ids {
                for check in replay::run_case(id, &settings)? {
                    say!("{check}");
                    if !check.passed {
                        eprintln!("mismatch: {check}");
                        mismatch = true;
                    }
                }
            }
            if mismatch {
                return Err(Failure::Mismatch);
            }
        }
    }
    Ok(())
}

fn minrank_command(
    g: &Graph,
    field: FieldSpec,
    matrix: Option<&Path>,
    script: Option<&Path>,
    out: &mut dyn std::io::Write,
) -> Result<(), Failure> {
    let mut lower = None;
    let mut upper = None;
    if let Some(p) = matrix {
        let m = FittingMatrix::parse_text(&read(p)?, g.clone()).map_err(|e| usage(e.into()))?;
        if m.field() != field {
            return Err(usage(anyhow!("matrix is over {}, not {field}", m.field())));
        }
        upper = Some(minrank_upper(g, &m)?);
    }
    if let Some(p) = script {
        let s = DeletionScript::parse_text(&read(p)?, g).map_err(|e| usage(e.into()))?;
        let proof = replay_deletion_proof(g, &s)?;
        lower = Some(proof.alpha_residual);
    }
    if matrix.is_none() && script.is_none() {
        let e = minrank_exact_small(g, field)?;
        lower = Some(e.value);
        upper = Some(e.value);
    }
    let line = match (lower, upper) {
        (Some(l), Some(u)) if l == u => format!("{l}"),
        (Some(l), Some(u)) => format!("[{l}, {u}]"),
        (Some(l), None) => format!(">= {l}"),
        (None, Some(u)) => format!("<= {u}"),
        (None, None) => unreachable!(),
    };
    writeln!(out, "{line}").map_err(|e| Failure::Compute(e.into()))
}

fn build_report(
    graph: &str,
    fields: &[FieldSpec],
    table: Option<&Path>,
    families: &[PathBuf],
    tol: f64,
) -> Result<BoundReport, Failure> {
    match graph {
        "@fixture" => return Ok(fixture_report(&graphs::checked_fixture()?, tol)?),
        "@separation" => return Ok(separation_witness(tol)?.report),
        _ => {}
    }
    let g = load(graph)?;
    let mut oracles: Vec<Arc<dyn BoundOracle>> = Vec::new();
    let mut extra = Vec::new();
    if let Some(t) = table {
        let field = *fields
            .first()
            .ok_or_else(|| usage(anyhow!("--oracle-table needs --field")))?;
        let o = load_minrank_table(t, &g, field)?;
        extra.extend(o.table().keys().cloned());
        oracles.push(Arc::new(o));
    } else {
        for &field in fields {
            oracles.push(Arc::new(ExactMinrankOracle::new(field)));
        }
    }
    let mut named = vec![NamedFamily {
        name: "cliques+V".into(),
        family: SubsetFamily::default_for(&g, extra)?,
    }];
    for p in families {
        named.push(NamedFamily {
            name: p.display().to_string(),
            family: SubsetFamily::parse_text(&read(p)?, &g).map_err(|e| usage(e.into()))?,
        });
    }
    let id = Path::new(graph)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| graph.to_string());
    Ok(broadcast_report(&id, &g, fields, &oracles, &named, tol))
}

fn write_report(dir: &Path, report: &BoundReport, text: &str, json: bool) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Compute(anyhow!("writing {}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    for (name, contents) in &report.attachments {
        std::fs::write(dir.join(name), contents).map_err(io)?;
    }
    let file = if json { "report.json" } else { "report.txt" };
    std::fs::write(dir.join(file), text).map_err(io)
}
