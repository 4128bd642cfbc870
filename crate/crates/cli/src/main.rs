//! `graphreal`: solve edge-weight eigenvalue problems, extract extremal
//! realizations, check certificates and draw the results.
//!
//! Exit status: 0 on success, 2 when a certificate or property check fails,
//! 1 on any error (bad flags, unreadable input, solver failure).

mod input;
mod output;
mod properties;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use graphreal_core::certify::{check_kkt, check_max_certificate, check_min_certificate};
use graphreal_core::eopt::{solve, Sense, SolverOptions};
use graphreal_core::extract::{realize, Realization, DEFAULT_GROUP_TOL};
use graphreal_core::graph::WeightVector;

use input::GraphArgs;
use output::{emit, to_json, Certificate, ResultFile};

#[derive(Parser, Debug)]
#[command(name = "graphreal", version, about = "Extremal graph realizations via eigenvalue optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Maximize λ₂ of the weighted Laplacian and extract a maximal realization
    SolveMax(SolveArgs),
    /// Minimize λₙ of the weighted Laplacian and extract a minimal realization
    SolveMin(SolveArgs),
    /// Check a realization and weights against each other
    Certify(CertifyArgs),
    /// Draw given coordinates as SVG
    Render(RenderArgs),
    /// Run randomized property checks on a graph
    Properties(PropertiesArgs),
}

#[derive(Args, Debug)]
struct SolverArgs {
    /// Target duality gap
    #[arg(long, default_value_t = SolverOptions::default().tol_gap)]
    tol: f64,
    /// Initial barrier parameter
    #[arg(long, default_value_t = SolverOptions::default().mu0)]
    mu0: f64,
    /// Cap on barrier-parameter reductions
    #[arg(long, default_value_t = SolverOptions::default().max_outer)]
    max_outer: usize,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions { tol_gap: self.tol, mu0: self.mu0, max_outer: self.max_outer, ..SolverOptions::default() }
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Tolerance for the realization certificate
    #[arg(long, default_value_t = 1e-6)]
    cert_tol: f64,
    /// Result JSON path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also draw the realization here
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
    dims: u8,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SenseArg {
    Max,
    Min,
}

impl From<SenseArg> for Sense {
    fn from(s: SenseArg) -> Sense {
        match s {
            SenseArg::Max => Sense::MaxLambda2,
            SenseArg::Min => Sense::MinLambdaN,
        }
    }
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// JSON array of edge weights, or an object with a "w" key
    #[arg(long)]
    weights: PathBuf,
    /// JSON array of coordinate rows, or an object with an "X" key
    #[arg(long)]
    coords: PathBuf,
    #[arg(long, value_enum, default_value_t = SenseArg::Max)]
    sense: SenseArg,
    #[arg(long, default_value_t = 1e-6)]
    cert_tol: f64,
    /// Report JSON path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// JSON array of coordinate rows, or an object with an "X" key
    #[arg(long)]
    coords: PathBuf,
    /// Edge weights for the colormap; all edges red when omitted
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long)]
    svg: PathBuf,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
    dims: u8,
}

#[derive(Args, Debug)]
struct PropertiesArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random feasible pairs for the weak duality check
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Whether the run produced a passing verdict.
type Verdict = bool;

fn solve_cmd(args: &SolveArgs, sense: Sense) -> Result<Verdict> {
    let g = args.graph.load()?;
    let opts = args.solver.options();
    let result = solve(&g, g.phi(), sense, &opts)?;
    let realization = realize(&g, g.phi(), &result, DEFAULT_GROUP_TOL)?;
    let report = match sense {
        Sense::MaxLambda2 => check_max_certificate(&realization, &result.w_star, &g, g.phi(), args.cert_tol)?,
        Sense::MinLambdaN => check_min_certificate(&realization, &result.w_star, &g, g.phi(), args.cert_tol)?,
    };
    let kkt = check_kkt(&result, &g, g.phi(), 10.0 * opts.tol_gap)?;
    let certificate = Certificate::new(report, kkt);
    for c in certificate.realization.failures().chain(certificate.optimality.failures()) {
        log::warn!("certificate condition {} failed: residual {:e} > {:e}", c.name, c.residual, c.tolerance);
    }

    let file = ResultFile::new(&result, &realization, &certificate);
    emit(&to_json(&file)?, args.out.as_deref())?;
    if let Some(path) = &args.svg {
        let drawing = svg::render(&realization.x, result.w_star.values(), &g, args.dims as usize);
        emit(&drawing, Some(path))?;
    }
    Ok(certificate.overall)
}

fn certify_cmd(args: &CertifyArgs) -> Result<Verdict> {
    let g = args.graph.load()?;
    let w = input::read_weights(&args.weights)?;
    let x = input::read_coords(&args.coords)?;
    let sense = Sense::from(args.sense);
    let r = Realization::from_coords(&g, g.phi(), x, sense)?;
    let report = match sense {
        Sense::MaxLambda2 => check_max_certificate(&r, &w, &g, g.phi(), args.cert_tol)?,
        Sense::MinLambdaN => check_min_certificate(&r, &w, &g, g.phi(), args.cert_tol)?,
    };
    emit(&to_json(&report)?, args.out.as_deref())?;
    Ok(report.overall)
}

fn render_cmd(args: &RenderArgs) -> Result<Verdict> {
    let g = args.graph.load()?;
    let x = input::read_coords(&args.coords)?;
    anyhow::ensure!(x.rows() == g.n(), "coordinates have {} rows, graph has {} vertices", x.rows(), g.n());
    let w = match &args.weights {
        Some(p) => input::read_weights(p)?,
        None => WeightVector(vec![1.0; g.m()]),
    };
    anyhow::ensure!(w.len() == g.m(), "{} weights for {} edges", w.len(), g.m());
    emit(&svg::render(&x, w.values(), &g, args.dims as usize), Some(&args.svg))?;
    Ok(true)
}

fn properties_cmd(args: &PropertiesArgs) -> Result<Verdict> {
    let g = args.graph.load()?;
    let report = properties::run(&g, args.seed, args.samples, &args.solver.options())?;
    emit(&to_json(&report)?, args.out.as_deref())?;
    Ok(report.overall)
}

fn run(cli: &Cli) -> Result<Verdict> {
    match &cli.command {
        Command::SolveMax(a) => solve_cmd(a, Sense::MaxLambda2).context("solve-max"),
        Command::SolveMin(a) => solve_cmd(a, Sense::MinLambdaN).context("solve-min"),
        Command::Certify(a) => certify_cmd(a),
        Command::Render(a) => render_cmd(a),
        Command::Properties(a) => properties_cmd(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("certificate check failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
