use std::sync::Mutex;

use super::engine::{evaluate, prepare_families, CutCountProblem, EngineMode};
use super::weights::sample_weights;
use crate::exec::Exec;
use crate::seed;
use crate::stats::SolverStats;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DriverConfig {
    pub trials: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for DriverConfig {
    fn default() -> Self {
        DriverConfig { trials: 20, seed: 0, exec: Exec::default() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DriverOutcome {
    pub answer: bool,
    pub trials: usize,
    pub stats: SolverStats,
}

/// Monte Carlo driver. Each `(trial, guess)` pair draws fresh isolation
/// weights and evaluates one root polynomial; the answer is true as soon as
/// any evaluation accepts. Never true on a no-instance.
pub fn run_trials<P: CutCountProblem>(guesses: &[P], cfg: &DriverConfig) -> Result<DriverOutcome> {
    let families = guesses
        .iter()
        .map(|p| prepare_families(p, EngineMode::Production))
        .collect::<Result<Vec<_>>>()?;
    let stats = Mutex::new(SolverStats::default());
    let items = cfg.trials * guesses.len();
    let answer = cfg.exec.any_range(items, |i| {
        let (trial, g) = (i / guesses.len(), i % guesses.len());
        let p = &guesses[g];
        let weights = sample_weights(p.universe_size(), seed::derive2(cfg.seed, trial as u64, g as u64));
        let (root, st) = evaluate(p, &families[g], &weights);
        stats.lock().expect("stats lock").merge(&st);
        p.accepts(&root)
    });
    Ok(DriverOutcome { answer, trials: cfg.trials, stats: stats.into_inner().expect("stats lock") })
}
