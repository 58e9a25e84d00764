//! Agreement with the brute-force oracles on random unit-disk instances.

use std::time::Instant;

use geosolve::branching::{max_independent_set, max_weight_independent_set, min_r_dominating_set};
use geosolve::cutcount::DriverConfig;
use geosolve::cycle_cover::{hamiltonian_cycle, hamiltonian_path, solve_cycle_cover, Backend};
use geosolve::oracles::{self, check_dominating_set, check_independent_set};
use geosolve::problems::{
    connected_vertex_cover, feedback_vertex_set, odd_cycle_transversal, steiner_tree, DecisionOutcome,
    PreparedInstance, SolveOptions,
};
use geosolve::{seed, Exec};
use rand::Rng;

use super::corpus::{self, BASE_SEED};
use crate::{Line, Peaks};

const INSTANCES: usize = 200;
const MIN_N: usize = 6;
const MAX_N: usize = 18;
const CYCLE_MAX_N: usize = 14;
const TRIALS: usize = 10;
const MIN_DETECTION: f64 = 0.99;
const TIME_LIMIT_SECS: f64 = 600.0;
const TERMINALS: usize = 3;

#[derive(Default)]
struct Tally {
    yes: usize,
    detected: usize,
    no: usize,
    false_positives: usize,
}

impl Tally {
    fn record(&mut self, truth: bool, got: bool) {
        if truth {
            self.yes += 1;
            self.detected += usize::from(got);
        } else {
            self.no += 1;
            self.false_positives += usize::from(got);
        }
    }
}

pub fn run(peaks: &mut Peaks) -> Vec<Line> {
    let start = Instant::now();
    let mut lines = vec![branching(peaks), dominating(peaks)];
    lines.extend(cut_and_count(peaks));
    lines.push(cycles());
    let secs = start.elapsed().as_secs_f64();
    lines.push(Line::new(
        "1",
        "oracle suite runtime",
        secs <= TIME_LIMIT_SECS,
        format!("{secs:.1}s (limit {TIME_LIMIT_SECS}s)"),
    ));
    lines
}

fn branching(peaks: &mut Peaks) -> Line {
    let mut mismatches = Vec::new();
    for i in 0..INSTANCES {
        let inst = corpus::unit_disk(1, i, MIN_N, MAX_N);
        let p = corpus::prepare(&inst);
        let g = &p.graph;
        let is = max_independent_set(&p);
        peaks.record("independent set", p.n(), is.stats.peak_states);
        let truth = oracles::brute_independent_set(g, None).unwrap().value;
        if is.value as f64 != truth || is.solution.len() != is.value || !check_independent_set(g, &is.solution) {
            mismatches.push(format!("IS#{i}"));
        }
        let mut rng = seed::rng(seed::derive2(BASE_SEED, 11, i as u64));
        let weights: Vec<f64> = (0..p.n()).map(|_| rng.gen_range(1..=40) as f64 / 8.0).collect();
        let wis = max_weight_independent_set(&p, &weights).unwrap();
        peaks.record("weighted independent set", p.n(), wis.stats.peak_states);
        let truth = oracles::brute_independent_set(g, Some(&weights)).unwrap().value;
        if (wis.value - truth).abs() > 1e-9 || !check_independent_set(g, &wis.solution) {
            mismatches.push(format!("WIS#{i}"));
        }
    }
    Line::new(
        "1",
        "independent set and weighted IS match oracle",
        mismatches.is_empty(),
        format!("{} instances x 2 problems, n in {MIN_N}..={MAX_N}, mismatches {:?}", INSTANCES, mismatches),
    )
}

fn dominating(peaks: &mut Peaks) -> Line {
    let mut mismatches = Vec::new();
    for i in 0..INSTANCES {
        let inst = corpus::unit_disk(2, i, MIN_N, MAX_N);
        let p = corpus::prepare(&inst);
        for r in [1, 2] {
            let got = min_r_dominating_set(&p, r).unwrap();
            peaks.record("r-dominating set", p.n(), got.stats.peak_states);
            let truth = oracles::brute_dominating_set(&p.graph, r).unwrap().value;
            if got.value != truth || got.solution.len() != got.value || !check_dominating_set(&p.graph, r, &got.solution) {
                mismatches.push(format!("#{i} r={r}"));
            }
        }
    }
    Line::new(
        "1",
        "r-dominating set (r = 1, 2) matches oracle",
        mismatches.is_empty(),
        format!("{} instances x 2 radii, mismatches {:?}", INSTANCES, mismatches),
    )
}

fn options(i: usize, problem: u64, k: usize) -> SolveOptions {
    SolveOptions {
        driver: DriverConfig {
            trials: TRIALS,
            seed: seed::derive2(BASE_SEED, problem * 1000 + k as u64, i as u64),
            exec: Exec::Parallel,
        },
        witness: false,
    }
}

/// Budgets to test: the optimum (a yes-instance) and one below it (a
/// no-instance). Infeasible instances are tested at the largest budget.
fn budgets(opt: Option<usize>, n: usize) -> Vec<(usize, bool)> {
    match opt {
        Some(o) if o > 0 => vec![(o, true), (o - 1, false)],
        Some(o) => vec![(o, true)],
        None => vec![(n, false)],
    }
}

fn cut_and_count(peaks: &mut Peaks) -> Vec<Line> {
    let names = ["Steiner tree", "connected vertex cover", "feedback vertex set", "odd cycle transversal", "connected OCT"];
    let mut tallies: Vec<Tally> = names.iter().map(|_| Tally::default()).collect();
    for i in 0..INSTANCES {
        let inst = corpus::unit_disk(3, i, MIN_N, MAX_N);
        let p = corpus::prepare(&inst);
        let g = &p.graph;
        let n = p.n();
        let terminals = corpus::pick_distinct(n, TERMINALS, seed::derive2(BASE_SEED, 12, i as u64));
        let optima = [
            oracles::brute_steiner_tree(g, &terminals).unwrap().map(|r| r.value),
            oracles::brute_connected_vertex_cover(g).unwrap().map(|r| r.value),
            Some(oracles::brute_feedback_vertex_set(g).unwrap().value),
            oracles::brute_odd_cycle_transversal(g, false).unwrap().map(|r| r.value),
            oracles::brute_odd_cycle_transversal(g, true).unwrap().map(|r| r.value),
        ];
        for (problem, opt) in optima.into_iter().enumerate() {
            for (k, truth) in budgets(opt, n) {
                let opts = options(i, problem as u64, k);
                let out: DecisionOutcome = solve(problem, &p, &terminals, k, &opts);
                peaks.record(names[problem], n, out.stats.peak_states);
                tallies[problem].record(truth, out.answer);
            }
        }
    }
    let mut lines = Vec::new();
    for (name, t) in names.iter().zip(&tallies) {
        lines.push(Line::new(
            "1",
            format!("{name}: no false positives"),
            t.false_positives == 0,
            format!(
                "{} yes / {} no instances, {} false positives, detected {}/{}",
                t.yes, t.no, t.false_positives, t.detected, t.yes
            ),
        ));
    }
    let yes: usize = tallies.iter().map(|t| t.yes).sum();
    let detected: usize = tallies.iter().map(|t| t.detected).sum();
    let rate = detected as f64 / yes.max(1) as f64;
    lines.push(Line::new(
        "1",
        format!("Cut&Count aggregate detection >= {MIN_DETECTION} with {TRIALS} trials"),
        rate >= MIN_DETECTION,
        format!("{detected}/{yes} = {rate:.4}"),
    ));
    lines
}

fn solve(problem: usize, p: &PreparedInstance, terminals: &[usize], k: usize, opts: &SolveOptions) -> DecisionOutcome {
    match problem {
        0 => steiner_tree(p, terminals, k, opts),
        1 => connected_vertex_cover(p, k, opts),
        2 => feedback_vertex_set(p, k, opts),
        3 => odd_cycle_transversal(p, k, false, opts),
        _ => odd_cycle_transversal(p, k, true, opts),
    }
    .expect("solver runs on a valid instance")
}

fn cycles() -> Line {
    let mut mismatches = Vec::new();
    let mut yes = 0;
    for i in 0..INSTANCES {
        let inst = corpus::unit_disk(4, i, 3, CYCLE_MAX_N);
        let p = corpus::prepare(&inst);
        let (g, q) = (&p.graph, &p.quotient);
        let min = oracles::brute_min_cycle_cover(g).unwrap().map(|c| c.len());
        for k in 1..=3 {
            let out = solve_cycle_cover(g, q, k, Backend::Exact).unwrap();
            let truth = min.is_some_and(|m| m <= k);
            yes += usize::from(truth);
            let valid = out.cover.as_ref().map_or(!out.answer, |c| c.len() <= k && c.validate(g, true).is_ok());
            if out.answer != truth || !valid {
                mismatches.push(format!("cover#{i} k={k}"));
            }
        }
        let ham = hamiltonian_cycle(g, q, Backend::Exact).unwrap();
        if ham.answer != oracles::brute_hamiltonian_cycle(g).unwrap().is_some() {
            mismatches.push(format!("hamcycle#{i}"));
        }
        let path = hamiltonian_path(g, q, Backend::Exact).unwrap();
        let path_ok = path.path.as_ref().map_or(!path.answer, |w| {
            w.len() == g.n() && w.windows(2).all(|e| g.has_edge(e[0], e[1]))
        });
        if path.answer != oracles::brute_hamiltonian_path(g).unwrap().is_some() || !path_ok {
            mismatches.push(format!("hampath#{i}"));
        }
    }
    Line::new(
        "1",
        "cycle cover (k = 1..3), Hamiltonian cycle and path match oracle",
        mismatches.is_empty(),
        format!("{INSTANCES} instances, n <= {CYCLE_MAX_N}, {yes} coverable cases, mismatches {mismatches:?}"),
    )
}
