//! `dirwalk rank|compile|sweep|verify`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 verification
//! failure. Vertices and paths are printed 1-based.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::centrality::{pagerank, CentralityReport, PageRankOptions};
use crate::compiler::{compile_evolution, CircuitIR, CompileOptions, ExpansionChoice};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::graph::{parse_graph, ParsedGraph};
use crate::jones::{self, QuquartState};
use crate::linalg::complexify;
use crate::par::Execution;
use crate::spectral::{ctqw_centrality, eigendecompose, uniform_state, DEFAULT_TOL};
use crate::verify::{verify_circuit, DEFAULT_SAMPLES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "dirwalk",
    version,
    about = "Quantum-walk centrality on directed graphs and its optical compilation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank the vertices of a graph.
    Rank(RankArgs),
    /// Compile the walk evolution of a 3- or 4-vertex graph into an optical circuit.
    Compile(CompileArgs),
    /// Simulate a compiled circuit over a time grid and write CSV.
    Sweep(SweepArgs),
    /// Check a compiled circuit against the dense evolution of a graph.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Pagerank,
    Ctqw,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Hand-chosen eigenbases for the two reference graphs, computed ones otherwise.
    Auto,
    /// Require a reference graph and its fixed four-mode embedding.
    Fixture,
    /// Computed eigenbasis with identity padding.
    Generic,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub method: MethodArg,
    #[arg(long, default_value_t = 0.85)]
    pub damping: f64,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// IR destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: ModeArg,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub ir: PathBuf,
    /// `START:STOP:N`, stop excluded; `pi` and multiples such as `2pi` are accepted.
    #[arg(long, default_value = "0:2pi:360")]
    pub grid: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Mean total counts per grid point; adds Poisson count columns.
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub ir: PathBuf,
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long)]
    pub json: bool,
}

/// Entry point used by the binary.
pub fn main_with_env() -> i32 {
    run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Rank(a) => cmd_rank(a, stdout, stderr),
        Command::Compile(a) => cmd_compile(a, stdout, stderr),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_DATA
        }
    }
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.into())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

fn load_graph(path: &Path, stderr: &mut dyn Write) -> Result<ParsedGraph> {
    let parsed = parse_graph(&read(path)?).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    })?;
    for w in &parsed.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    Ok(parsed)
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// One ranking in machine form, vertices 1-based.
#[derive(Debug, Serialize)]
struct RankEntry {
    method: String,
    scores: Vec<f64>,
    ranking: Vec<Vec<usize>>,
    tie_tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    damping: Option<f64>,
}

#[derive(Debug, Serialize)]
struct RankDocument {
    vertices: usize,
    edges: usize,
    reports: Vec<RankEntry>,
    warnings: Vec<String>,
}

impl RankEntry {
    fn new(r: &CentralityReport, damping: Option<f64>) -> Self {
        Self {
            method: r.method.to_string(),
            scores: r.scores.clone(),
            ranking: r
                .ranking
                .iter()
                .map(|g| g.iter().map(|v| v + 1).collect())
                .collect(),
            tie_tolerance: r.tie_tolerance,
            damping,
        }
    }
}

fn cmd_rank(a: &RankArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    if !(a.damping > 0.0 && a.damping <= 1.0) {
        return Err(Failure::Usage(format!(
            "--damping {} must lie in (0, 1]",
            a.damping
        )));
    }
    let parsed = load_graph(&a.graph, stderr)?;
    let g = &parsed.graph;
    let mut reports = Vec::new();
    if matches!(a.method, MethodArg::Pagerank | MethodArg::Both) {
        let opts = PageRankOptions {
            damping: a.damping,
            ..PageRankOptions::default()
        };
        reports.push((pagerank(g, &opts)?, Some(a.damping)));
    }
    if matches!(a.method, MethodArg::Ctqw | MethodArg::Both) {
        let dec = eigendecompose(&complexify(&g.hamiltonian()), DEFAULT_TOL)?;
        dec.require_evolvable()?;
        reports.push((
            ctqw_centrality(&dec, &uniform_state(g.vertex_count()))?,
            None,
        ));
    }

    let text = if a.json {
        let doc = RankDocument {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            reports: reports.iter().map(|(r, d)| RankEntry::new(r, *d)).collect(),
            warnings: parsed.warnings.clone(),
        };
        serde_json::to_string_pretty(&doc).map_err(Error::from)? + "\n"
    } else {
        rank_table(&reports.iter().map(|(r, _)| r).collect::<Vec<_>>())
    };
    emit(&text, a.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

/// Side-by-side scores with the 1-based rank group of each vertex.
fn rank_table(reports: &[&CentralityReport]) -> String {
    let mut out = String::from("vertex");
    for r in reports {
        write!(out, "  {:>10}  {:>5}", r.method.to_string(), "group").unwrap();
    }
    out.push('\n');
    let groups: Vec<Vec<usize>> = reports.iter().map(|r| r.group_of()).collect();
    let n = reports.first().map_or(0, |r| r.scores.len());
    for v in 0..n {
        write!(out, "{:>6}", v + 1).unwrap();
        for (r, g) in reports.iter().zip(&groups) {
            write!(out, "  {:>10.6}  {:>5}", r.scores[v], g[v] + 1).unwrap();
        }
        out.push('\n');
    }
    for r in reports {
        let groups: Vec<String> = r
            .ranking
            .iter()
            .map(|g| {
                format!(
                    "{{{}}}",
                    g.iter()
                        .map(|v| (v + 1).to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        writeln!(out, "{}: {}", r.method, groups.join(" > ")).unwrap();
    }
    out
}

fn cmd_compile(a: &CompileArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let parsed = load_graph(&a.graph, stderr)?;
    let h = complexify(&parsed.graph.hamiltonian());
    let n = h.nrows();
    if !(3..=4).contains(&n) {
        return Err(Error::UnsupportedDimension(n).into());
    }
    let reference = match a.mode {
        ModeArg::Generic => None,
        ModeArg::Auto => fixtures::reference_decomposition(&h),
        ModeArg::Fixture => Some(fixtures::reference_decomposition(&h).ok_or(Error::NotAFixture)?),
    };
    let expansion = match a.mode {
        ModeArg::Auto => ExpansionChoice::Auto,
        ModeArg::Fixture => ExpansionChoice::Fixture,
        ModeArg::Generic => ExpansionChoice::GenericPad,
    };
    let reference_decomposition = reference.is_some();
    let dec = match reference {
        Some(d) => d,
        None => eigendecompose(&h, DEFAULT_TOL)?,
    };
    let ir = compile_evolution(
        &dec,
        &CompileOptions {
            expansion,
            reference_decomposition,
            ..Default::default()
        },
    )?;
    let text = ir.to_json() + "\n";

    let summary = format!(
        "vertices {}  stages {}  total_scale {}  blocks {}",
        ir.vertices,
        ir.stages.len(),
        ir.total_scale,
        ir.block_order().join(" ")
    );
    match &a.out {
        Some(path) => {
            std::fs::write(path, &text)?;
            if a.json {
                let doc = serde_json::json!({
                    "out": path.display().to_string(),
                    "vertices": ir.vertices,
                    "stages": ir.stages.len(),
                    "total_scale": ir.total_scale,
                    "blocks": ir.block_order(),
                });
                writeln!(
                    stdout,
                    "{}",
                    serde_json::to_string_pretty(&doc).map_err(Error::from)?
                )?;
            } else {
                writeln!(stdout, "{summary}")?;
            }
        }
        None => {
            stdout.write_all(text.as_bytes())?;
            writeln!(stderr, "{summary}")?;
        }
    }
    Ok(EXIT_OK)
}

/// Parses `START:STOP:N`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("grid '{spec}' is not START:STOP:N"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, n] = parts.as_slice() else {
        return Err(bad());
    };
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    jones::time_grid(
        parse_time(start).ok_or_else(bad)?,
        parse_time(stop).ok_or_else(bad)?,
        n,
    )
}

/// A number, optionally followed by `pi` (`pi`, `2pi`, `0.5pi`, `-pi`).
fn parse_time(s: &str) -> Option<f64> {
    let s = s.trim();
    match s.strip_suffix("pi") {
        Some(coef) => {
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.trim_end_matches('*').parse().ok()?,
            };
            Some(c * PI)
        }
        None => s.parse().ok(),
    }
}

fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write) -> CmdResult {
    let grid = parse_grid(&a.grid).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(rate) = a.rate {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Failure::Usage(format!(
                "--rate {rate} must be non-negative"
            )));
        }
    }
    let ir = CircuitIR::from_json(&read(&a.ir)?)?;
    let mut table = jones::sweep(
        &ir,
        &QuquartState::uniform(&ir),
        &grid,
        Execution::default(),
    )?;
    if let Some(rate) = a.rate {
        table = table.with_counts(rate, &mut ChaCha8Rng::seed_from_u64(a.seed))?;
    }
    let text = if a.json {
        let doc = serde_json::json!({
            "table": table,
            "centrality": RankEntry::new(&table.centrality()?, None),
        });
        serde_json::to_string_pretty(&doc).map_err(Error::from)? + "\n"
    } else {
        table.to_csv()
    };
    emit(&text, a.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write) -> CmdResult {
    if a.samples == 0 {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    let ir = CircuitIR::from_json(&read(&a.ir)?)?;
    let parsed = load_graph(&a.graph, &mut std::io::sink())?;
    let h = complexify(&parsed.graph.hamiltonian());
    let report = verify_circuit(&ir, &h, a.samples, Execution::default())?;
    if a.json {
        writeln!(
            stdout,
            "{}",
            serde_json::to_string_pretty(&report).map_err(Error::from)?
        )?;
    } else {
        let verdict = if report.passed { "PASS" } else { "FAIL" };
        writeln!(
            stdout,
            "{verdict}  max error {:.3e} at t = {:.6} over {} samples (tolerance {:.0e})",
            report.max_error, report.worst_t, report.samples, report.tolerance
        )?;
        if let Some(f) = &report.fault {
            writeln!(
                stdout,
                "first differing stage: {} ({}, block {})",
                f.stage, f.kind, f.block
            )?;
        }
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY })
}
