//! `bench`: one CSV row per (size, repetition, solver).
//!
//! Columns: `size, rep, seed, solver, n, parts, kappa, delta, wtd, depth,
//! wall_ms, calls, peak_states, result, call_bound_log2`. `wtd` is the
//! weighted depth of the decomposition; `call_bound_log2` is filled for the
//! independent set solver only and is log2 of the number of parts times the
//! largest product of per-node branching bounds along a root-leaf path.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Args;
use geosolve::branching::{max_independent_set, max_weight_independent_set, min_r_dominating_set};
use geosolve::cutcount::DriverConfig;
use geosolve::cycle_cover::{solve_cycle_cover, Backend};
use geosolve::geometry::generate_unit_ball_instance;
use geosolve::problems::{
    connected_vertex_cover, feedback_vertex_set, odd_cycle_transversal, PreparedInstance, SolveOptions,
};
use geosolve::stats::SolverStats;
use geosolve::{seed, Exec};
use serde::Serialize;

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated instance sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    /// Comma-separated solvers: decompose, is, wis, rds, fvs, cvc, oct,
    /// coct, cyclecover.
    #[arg(long, value_delimiter = ',', default_value = "decompose,is,rds")]
    solvers: Vec<String>,
    #[arg(long, default_value_t = 1)]
    r: usize,
    /// Budget for decision solvers (default: a third of the vertices).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Run repetitions one after another.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct Row {
    size: usize,
    rep: usize,
    seed: u64,
    solver: String,
    n: usize,
    parts: usize,
    kappa: usize,
    delta: usize,
    wtd: f64,
    depth: usize,
    wall_ms: f64,
    calls: u64,
    peak_states: usize,
    result: String,
    call_bound_log2: Option<f64>,
}

pub fn run(a: &BenchArgs) -> Result<bool> {
    for s in &a.solvers {
        if !KNOWN.contains(&s.as_str()) {
            anyhow::bail!("unknown solver {s:?}; expected one of {KNOWN:?}");
        }
    }
    let exec = if a.sequential { Exec::Sequential } else { Exec::Parallel };
    let jobs: Vec<(usize, usize)> =
        a.sizes.iter().flat_map(|&size| (0..a.reps).map(move |rep| (size, rep))).collect();
    // Repetitions run concurrently; rows are written afterwards in job order.
    let rows = exec.map_range(jobs.len(), |j| {
        let (size, rep) = jobs[j];
        bench_one(a, size, rep)
    });
    let mut writer = csv::Writer::from_path(&a.out).with_context(|| format!("writing {}", a.out.display()))?;
    for batch in rows {
        for row in batch? {
            writer.serialize(row)?;
        }
    }
    writer.flush()?;
    Ok(true)
}

const KNOWN: [&str; 9] = ["decompose", "is", "wis", "rds", "fvs", "cvc", "oct", "coct", "cyclecover"];

fn bench_one(a: &BenchArgs, size: usize, rep: usize) -> Result<Vec<Row>> {
    let inst_seed = seed::derive2(a.seed, size as u64, rep as u64);
    let inst = generate_unit_ball_instance(size, a.dim, a.density, inst_seed);
    let start = Instant::now();
    let p = PreparedInstance::from_geometry(&inst)?;
    let decompose_ms = start.elapsed().as_secs_f64() * 1e3;
    let q = &p.quotient;
    let row = |solver: &str, wall_ms: f64, stats: SolverStats, result: String, bound: Option<f64>| Row {
        size,
        rep,
        seed: inst_seed,
        solver: solver.to_string(),
        n: p.n(),
        parts: q.num_parts(),
        kappa: q.kappa(),
        delta: q.delta(),
        wtd: p.decomposition.weighted_depth(),
        depth: p.decomposition.depth(),
        wall_ms,
        calls: stats.calls,
        peak_states: stats.peak_states,
        result,
        call_bound_log2: bound,
    };
    let opts = SolveOptions {
        driver: DriverConfig { trials: a.trials, seed: seed::derive(inst_seed, 1), exec: Exec::Sequential },
        witness: false,
    };
    let k = a.k.unwrap_or(p.n() / 3);
    let mut rows = Vec::new();
    for solver in &a.solvers {
        let start = Instant::now();
        let (stats, result, bound) = match solver.as_str() {
            "decompose" => (SolverStats::default(), format!("{:.6}", p.decomposition.weighted_depth()), None),
            "is" => {
                let r = max_independent_set(&p);
                (r.stats, r.value.to_string(), Some(is_call_bound_log2(&p)))
            }
            "wis" => {
                let r = max_weight_independent_set(&p, &inst.weights())?;
                (r.stats, r.value.to_string(), Some(is_call_bound_log2(&p)))
            }
            "rds" => {
                let r = min_r_dominating_set(&p, a.r)?;
                (r.stats, r.value.to_string(), None)
            }
            "fvs" | "cvc" | "oct" | "coct" => {
                let out = match solver.as_str() {
                    "fvs" => feedback_vertex_set(&p, k, &opts)?,
                    "cvc" => connected_vertex_cover(&p, k, &opts)?,
                    "oct" => odd_cycle_transversal(&p, k, false, &opts)?,
                    _ => odd_cycle_transversal(&p, k, true, &opts)?,
                };
                (out.stats, out.answer.to_string(), None)
            }
            _ => match solve_cycle_cover(&p.graph, q, k.max(1), Backend::Exact) {
                Ok(out) => (out.stats, out.answer.to_string(), None),
                Err(geosolve::Error::TooLarge(_)) => (SolverStats::default(), "skipped".into(), None),
                Err(e) => return Err(e.into()),
            },
        };
        let mut ms = start.elapsed().as_secs_f64() * 1e3;
        if solver == "decompose" {
            ms = decompose_ms;
        }
        rows.push(row(solver, ms, stats, result, bound));
    }
    Ok(rows)
}

/// log2 of (number of parts) x (largest product of (1 + |V_i|)^(cliques of
/// V_i) along a root-leaf path of the decomposition).
fn is_call_bound_log2(p: &PreparedInstance) -> f64 {
    let td = &p.decomposition;
    let q = &p.quotient;
    let mut best = 0.0f64;
    let mut path = vec![0.0f64; td.len()];
    for u in td.preorder() {
        let node = td.node(u);
        let part = node.label;
        let own = q.cliques(part).len() as f64 * (1.0 + q.part(part).len() as f64).log2();
        path[u] = own + node.parent.map_or(0.0, |par| path[par]);
        best = best.max(path[u]);
    }
    (q.num_parts().max(1) as f64).log2() + best
}
