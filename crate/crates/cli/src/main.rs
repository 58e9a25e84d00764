//! `geosolve`: instance generation, decomposition, solving, oracles,
//! verification and benchmarks. Exit status 0 means an answer was produced,
//! 2 means the instance is infeasible (or a check failed), 1 is an error.

mod bench;
mod solve;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use geosolve::decomposition::{build_weighted_treedepth, verify_decomposition, DecompositionExport, TreedepthDecomposition};
use geosolve::geometry::{
    generate_clustered_instance, generate_unit_ball_instance, grid_clique_partition, GeometricInstance,
    PartitionExport, QuotientGraph, DEFAULT_SIGMA,
};
use geosolve::problems::PreparedInstance;
use geosolve::Graph;
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "geosolve", version, about = "Exact solvers for intersection graphs of similarly sized fat objects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance of unit balls (or clustered balls).
    Gen(GenArgs),
    /// Build the clique partition and weighted treedepth decomposition.
    Decompose(DecomposeArgs),
    /// Run a solver.
    Solve(SolveArgs),
    /// Run the brute-force reference solver (small inputs only).
    Oracle(SolveArgs),
    /// Check a decomposition file against an instance.
    Verify(VerifyArgs),
    /// Time decomposition and solvers over instance sizes; writes CSV.
    Bench(bench::BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Expected balls per unit volume.
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    /// Group the balls into this many tight clusters instead.
    #[arg(long)]
    clusters: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SIGMA)]
    sigma: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SIGMA)]
    sigma: f64,
    /// Output of `decompose`.
    #[arg(long)]
    decomposition: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Is,
    Wis,
    Rds,
    Steiner,
    Cvc,
    Fvs,
    Oct,
    Coct,
    Cyclecover,
    Hamcycle,
    Hampath,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    TreedepthCnc,
}

#[derive(Args)]
pub struct SolveArgs {
    #[arg(value_enum)]
    problem: Problem,
    /// Instance JSON.
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    instance: Option<PathBuf>,
    /// Edge list (`n m` header, then one `u v` per line) instead of geometry.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Cliques per part for the partition of an edge-list input.
    #[arg(long, default_value_t = 1)]
    kappa: usize,
    #[arg(long, default_value_t = DEFAULT_SIGMA)]
    sigma: f64,
    /// Budget for the decision problems.
    #[arg(long)]
    k: Option<usize>,
    /// Domination radius.
    #[arg(long, default_value_t = 1)]
    r: usize,
    /// Comma-separated terminal vertices for Steiner Tree.
    #[arg(long, value_delimiter = ',')]
    terminals: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = BackendArg::Exact)]
    backend: BackendArg,
    /// Recover a solution for the Cut&Count problems.
    #[arg(long)]
    witness: bool,
    /// Cross-check the answer with the brute-force oracle when small enough.
    #[arg(long)]
    verify: bool,
    /// Run Monte Carlo trials on one thread.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Cycle problems: also write the kernel summary here.
    #[arg(long)]
    kernel_out: Option<PathBuf>,
}

/// Everything `decompose` writes.
#[derive(Serialize, Deserialize)]
struct DecompositionFile {
    partition: PartitionExport,
    decomposition: DecompositionExport,
    weighted_depth: f64,
    depth: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Honours `GEOSOLVE_THREADS` for the global rayon pool.
fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("GEOSOLVE_THREADS") else { return Ok(()) };
    let threads: usize = value.parse().with_context(|| format!("GEOSOLVE_THREADS={value} is not a number"))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen(a) => {
            let inst = match a.clusters {
                Some(c) => {
                    let per = if c == 0 { 0 } else { a.n.div_ceil(c) };
                    let side = (a.n as f64 / a.density).powf(1.0 / a.dim as f64).max(1.0);
                    let mut inst = generate_clustered_instance(c, per, a.dim, side, 0.5, a.seed);
                    inst.objects.truncate(a.n);
                    inst
                }
                None => generate_unit_ball_instance(a.n, a.dim, a.density, a.seed),
            };
            write_text(&a.out, &inst.to_json())?;
            Ok(true)
        }
        Command::Decompose(a) => {
            let inst = GeometricInstance::load(&a.instance, a.sigma)?;
            let g = inst.intersection_graph();
            let q = grid_clique_partition(&inst, &g)?;
            let td = build_weighted_treedepth(&q);
            verify_decomposition(&td, &q)?;
            let file = DecompositionFile {
                partition: q.export(),
                weighted_depth: td.weighted_depth(),
                depth: td.depth(),
                decomposition: td.export(),
            };
            write_text(&a.out, &serde_json::to_string_pretty(&file)?)?;
            Ok(true)
        }
        Command::Verify(a) => {
            let inst = GeometricInstance::load(&a.instance, a.sigma)?;
            let g = inst.intersection_graph();
            let text = std::fs::read_to_string(&a.decomposition)
                .with_context(|| format!("reading {}", a.decomposition.display()))?;
            let file: DecompositionFile = serde_json::from_str(&text)?;
            let cliques: Vec<Vec<Vec<usize>>> = file.partition.parts.iter().map(|p| vec![p.clone()]).collect();
            // Parts of a decomposition file need not be single cliques; fall
            // back to splitting them greedily.
            let q = QuotientGraph::from_cliques(&g, cliques).or_else(|_| rebuild_partition(&g, &file.partition))?;
            let td = TreedepthDecomposition::from_export(&file.decomposition)?;
            let verdict = verify_decomposition(&td, &q);
            let wtd_ok = (td.weighted_depth() - file.weighted_depth).abs() <= 1e-9;
            let report = serde_json::json!({
                "valid": verdict.is_ok(),
                "error": verdict.as_ref().err().map(|e| e.to_string()),
                "weighted_depth": td.weighted_depth(),
                "weighted_depth_matches": wtd_ok,
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(verdict.is_ok() && wtd_ok)
        }
        Command::Solve(a) => solve::solve(&a),
        Command::Oracle(a) => solve::oracle(&a),
        Command::Bench(a) => bench::run(&a),
    }
}

/// Partition from an export whose parts are unions of several cliques.
fn rebuild_partition(g: &Graph, export: &PartitionExport) -> geosolve::Result<QuotientGraph> {
    let mut cliques = Vec::new();
    for part in &export.parts {
        let mut cover: Vec<Vec<usize>> = Vec::new();
        for &v in part {
            match cover.iter_mut().find(|c| c.iter().all(|&u| g.has_edge(u, v))) {
                Some(c) => c.push(v),
                None => cover.push(vec![v]),
            }
        }
        cliques.push(cover);
    }
    QuotientGraph::from_cliques(g, cliques)
}

pub(crate) fn load_prepared(a: &SolveArgs) -> Result<(PreparedInstance, Option<GeometricInstance>)> {
    match (&a.instance, &a.graph) {
        (Some(path), _) => {
            let inst = GeometricInstance::load(path, a.sigma)?;
            Ok((PreparedInstance::from_geometry(&inst)?, Some(inst)))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let g = Graph::parse_edge_list(&text)?;
            Ok((PreparedInstance::from_graph(g, a.kappa)?, None))
        }
        (None, None) => anyhow::bail!("either --instance or --graph is required"),
    }
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
