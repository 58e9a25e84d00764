//! Cut counting, isolation frequency, parity of the root polynomial against
//! exhaustive counting, and function-family sizes.

use std::collections::BTreeMap;

use geosolve::cutcount::{
    count_consistent_cuts, evaluate, isolates, prepare_families, sample_weights, sample_weights_in,
    CutCountProblem, EngineMode, State,
};
use geosolve::problems::{CoctProblem, CvcProblem, FvsProblem, PreparedInstance, SteinerProblem};
use geosolve::{seed, Graph};

use super::corpus::{self, BASE_SEED};
use crate::{Line, Peaks};

pub fn run(peaks: &mut Peaks) -> Vec<Line> {
    vec![cut_identity(), isolation(), parity(peaks), family_bounds(), family_definitions()]
}

// ---- consistent cuts ----------------------------------------------------

const CUT_MAX_N: usize = 7;
/// Up to this many vertices every `X` containing `v1` is tried on every
/// graph; above it `X` is the whole vertex set.
const CUT_ALL_SUBSETS_N: usize = 6;

fn components_in_mask(adj: &[u32], x: u32) -> u32 {
    let mut left = x;
    let mut count = 0;
    while left != 0 {
        let mut comp = left & left.wrapping_neg();
        loop {
            let mut grown = comp;
            let mut m = comp;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                grown |= adj[v] & x;
            }
            if grown == comp {
                break;
            }
            comp = grown;
        }
        left &= !comp;
        count += 1;
    }
    count
}

fn cut_identity() -> Line {
    let mut checked = 0u64;
    let mut bad = Vec::new();
    for n in 1..=CUT_MAX_N {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for gm in 0u64..(1 << pairs.len()) {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(b, _)| gm >> b & 1 == 1).map(|(_, &e)| e).collect();
            let g = Graph::from_edges(n, &edges).unwrap();
            let mut adj = vec![0u32; n];
            for &(u, v) in &edges {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
            let subsets: Vec<u32> = if n <= CUT_ALL_SUBSETS_N {
                (0..1u32 << n).filter(|x| x & 1 == 1).collect()
            } else {
                vec![(1 << n) - 1]
            };
            for x in subsets {
                let xs: Vec<usize> = (0..n).filter(|&v| x >> v & 1 == 1).collect();
                let expected = 1u64 << (components_in_mask(&adj, x) - 1);
                checked += 1;
                if count_consistent_cuts(&g, &xs, 0) != expected && bad.len() < 5 {
                    bad.push(format!("n={n} edges={edges:?} X={xs:?}"));
                }
            }
        }
    }
    Line::new(
        "2",
        "consistent cuts = 2^(cc(G[X]) - 1)",
        bad.is_empty(),
        format!(
            "{checked} (graph, X) pairs: every graph on <= {CUT_ALL_SUBSETS_N} vertices with every X containing v1, \
             every graph on {CUT_MAX_N} vertices with X = V; failures {bad:?}"
        ),
    )
}

// ---- isolation ----------------------------------------------------------

const UNIVERSE: usize = 10;
const WEIGHT_RANGE: u64 = 20;
const ISOLATION_SEEDS: u64 = 10_000;
const MIN_ISOLATION: f64 = 0.48;

fn isolation() -> Line {
    let family: Vec<Vec<usize>> = vec![vec![0, 1, 2], vec![2, 3, 4, 5], vec![1, 5, 6], vec![6, 7, 8, 9], vec![0, 3, 7, 9]];
    let hits = (0..ISOLATION_SEEDS)
        .filter(|&s| isolates(&family, &sample_weights_in(UNIVERSE, WEIGHT_RANGE, seed::derive2(BASE_SEED, 20, s))))
        .count();
    let rate = hits as f64 / ISOLATION_SEEDS as f64;
    Line::new(
        "3",
        format!("isolation rate >= {MIN_ISOLATION}"),
        rate >= MIN_ISOLATION,
        format!("|U| = {UNIVERSE}, N = {WEIGHT_RANGE}, 5 sets, {ISOLATION_SEEDS} seeds: {rate:.4}"),
    )
}

// ---- parity against exhaustive counting ---------------------------------

const PARITY_INSTANCES: usize = 60;
const PARITY_MAX_N: usize = 8;

/// One Cut&Count problem instance plus an independent description of its
/// solution/cut pairs, written from the problem definitions.
type Predicate = Box<dyn Fn(&[State]) -> bool>;
type Exponents = Box<dyn Fn(&[State], &[u64]) -> Vec<Vec<u32>>>;
/// Name, per-part families, and the cap on part `i`.
type CappedFamilies = (&'static str, Vec<Vec<Vec<State>>>, Box<dyn Fn(usize) -> f64>);

struct Definition {
    states: u8,
    /// Allowed state vector of the whole graph (parts known for the caps).
    allowed: Predicate,
    /// Exponent vectors contributed by one allowed vector (several when
    /// markers are chosen freely).
    monomials: Exponents,
    caps: Vec<u32>,
}

fn exhaustive(def: &Definition, n: usize, weights: &[u64]) -> Vec<Vec<u32>> {
    let mut parity: BTreeMap<Vec<u32>, bool> = BTreeMap::new();
    let mut h = vec![0 as State; n];
    loop {
        if (def.allowed)(&h) {
            for m in (def.monomials)(&h, weights) {
                if m.iter().zip(&def.caps).all(|(e, c)| e <= c) {
                    *parity.entry(m).or_default() ^= true;
                }
            }
        }
        // Odometer over all state vectors.
        let mut i = 0;
        while i < n && h[i] + 1 == def.states {
            h[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        h[i] += 1;
    }
    parity.into_iter().filter(|(_, odd)| *odd).map(|(m, _)| m).collect()
}

fn per_part_count(p: &PreparedInstance, h: &[State], counted: impl Fn(usize, State) -> bool, cap: usize) -> bool {
    let q = &p.quotient;
    (0..q.num_parts()).all(|i| q.part(i).iter().filter(|&&v| counted(v, h[v])).count() <= cap)
}

fn edges_avoid(g: &Graph, h: &[State], bad: impl Fn(State, State) -> bool) -> bool {
    g.edges().all(|(u, v)| !bad(h[u], h[v]))
}

fn crossing(a: State, b: State, l: State, r: State) -> bool {
    (a == l && b == r) || (a == r && b == l)
}

fn steiner_def(p: &PreparedInstance, terminals: &[usize], max_size: usize) -> Definition {
    // 0 out, 1 left, 2 right
    let p = p.clone();
    let n = p.n();
    let ts = terminals.to_vec();
    let anchor = ts[0];
    let cap = p.quotient.kappa().pow(2) * (p.quotient.delta() + 1);
    let tset = ts.clone();
    Definition {
        states: 3,
        allowed: Box::new(move |h| {
            tset.iter().all(|&t| h[t] != 0)
                && h[anchor] == 1
                && edges_avoid(&p.graph, h, |a, b| crossing(a, b, 1, 2))
                && per_part_count(&p, h, |v, s| s != 0 && !tset.contains(&v), cap)
        }),
        monomials: Box::new(|h, w| {
            let x: Vec<usize> = (0..h.len()).filter(|&v| h[v] != 0).collect();
            vec![vec![x.iter().map(|&v| w[v] as u32).sum(), x.len() as u32]]
        }),
        caps: vec![2 * (n * n) as u32, max_size as u32],
    }
}

fn cvc_def(p: &PreparedInstance, anchor: usize, max_size: usize) -> Definition {
    let p = p.clone();
    let n = p.n();
    let cap = p.quotient.kappa();
    Definition {
        states: 3,
        allowed: Box::new(move |h| {
            h[anchor] == 1
                && edges_avoid(&p.graph, h, |a, b| crossing(a, b, 1, 2) || (a == 0 && b == 0))
                && per_part_count(&p, h, |_, s| s == 0, cap)
        }),
        monomials: Box::new(|h, w| {
            let x: Vec<usize> = (0..h.len()).filter(|&v| h[v] != 0).collect();
            vec![vec![x.iter().map(|&v| w[v] as u32).sum(), x.len() as u32]]
        }),
        caps: vec![2 * (n * n) as u32, max_size as u32],
    }
}

fn fvs_def(p: &PreparedInstance, k: usize) -> Definition {
    // 0 removed, 1 kept left, 2 kept right; markers on kept-left vertices.
    let p = p.clone();
    let n = p.n();
    let cap = 2 * p.quotient.kappa();
    let graph = p.graph.clone();
    let keep = (n - k) as u32;
    Definition {
        states: 3,
        allowed: Box::new(move |h| {
            edges_avoid(&p.graph, h, |a, b| crossing(a, b, 1, 2)) && per_part_count(&p, h, |_, s| s != 0, cap)
        }),
        monomials: Box::new(move |h, w| {
            let kept: Vec<usize> = (0..n).filter(|&v| h[v] != 0).collect();
            let base: u32 = kept.iter().map(|&v| w[v] as u32).sum();
            let edges = graph.edges().filter(|&(u, v)| h[u] != 0 && h[v] != 0).count() as u32;
            let left: Vec<usize> = (0..n).filter(|&v| h[v] == 1).collect();
            (0u32..1 << left.len())
                .map(|m| {
                    let marked: Vec<usize> = (0..left.len()).filter(|&b| m >> b & 1 == 1).map(|b| left[b]).collect();
                    let mw: u32 = marked.iter().map(|&v| w[n + v] as u32).sum();
                    vec![base + mw, kept.len() as u32, edges + marked.len() as u32]
                })
                .collect()
        }),
        caps: vec![2 * (2 * n * 2 * n) as u32, keep, keep],
    }
}

fn coct_def(p: &PreparedInstance, anchor: usize, max_size: usize) -> Definition {
    // 0 left, 1 right (in X); 2 side A, 3 side B (outside X)
    let p = p.clone();
    let n = p.n();
    let cap = 2 * p.quotient.kappa();
    Definition {
        states: 4,
        allowed: Box::new(move |h| {
            h[anchor] == 0
                && edges_avoid(&p.graph, h, |a, b| crossing(a, b, 0, 1) || (a == b && a >= 2))
                && per_part_count(&p, h, |_, s| s >= 2, cap)
        }),
        monomials: Box::new(move |h, w| {
            let mut weight = 0u32;
            let mut size = 0u32;
            for (v, &s) in h.iter().enumerate() {
                match s {
                    0 | 1 => {
                        weight += w[v] as u32;
                        size += 1;
                    }
                    2 => weight += w[n + v] as u32,
                    _ => {}
                }
            }
            vec![vec![weight, size]]
        }),
        caps: vec![2 * (2 * n * 2 * n) as u32, max_size as u32],
    }
}

fn compare<P: CutCountProblem>(
    label: &str,
    problem: &P,
    def: &Definition,
    weights: &[u64],
    peaks: &mut Peaks,
) -> [bool; 2] {
    let truth = exhaustive(def, problem.graph().n(), weights);
    [EngineMode::Production, EngineMode::Verification].map(|mode| {
        let families = prepare_families(problem, mode).unwrap();
        let (root, stats) = evaluate(problem, &families, weights);
        peaks.record(label, problem.graph().n(), stats.peak_states);
        let mut got = root.exponents(problem.layout());
        got.sort();
        got == truth
    })
}

fn parity_instance(i: usize) -> PreparedInstance {
    let n = 4 + i % (PARITY_MAX_N - 3);
    if i.is_multiple_of(2) {
        corpus::prepare(&corpus::unit_disk(30, i, 4, PARITY_MAX_N))
    } else {
        // Plain graphs with two cliques per part exercise kappa > 1.
        let g = corpus::random_graph(n, 0.45, seed::derive2(BASE_SEED, 31, i as u64));
        PreparedInstance::from_graph(g, 2).unwrap()
    }
}

fn parity(peaks: &mut Peaks) -> Line {
    let names = ["Steiner tree", "connected vertex cover", "feedback vertex set", "connected OCT", "odd cycle transversal"];
    let mut checked = [0usize; 5];
    let mut bad: Vec<String> = Vec::new();
    for i in 0..PARITY_INSTANCES {
        let p = parity_instance(i);
        let n = p.n();
        let none = vec![false; n];
        let wseed = |j: u64| seed::derive2(BASE_SEED, 32 + j, i as u64);
        let mut note = |j: usize, ok: [bool; 2]| {
            checked[j] += 1;
            if !ok.iter().all(|&b| b) {
                bad.push(format!("{}#{i} (production {}, verification {})", names[j], ok[0], ok[1]));
            }
        };

        let terminals = corpus::pick_distinct(n, 2.min(n), wseed(9));
        let sp = SteinerProblem::new(&p, &terminals, n, &none).unwrap();
        let w = sample_weights(sp.universe_size(), wseed(0));
        note(0, compare(names[0], &sp, &steiner_def(&p, &terminals, n), &w, peaks));

        let cp = CvcProblem::new(&p, 0, n, &none).unwrap();
        let w = sample_weights(cp.universe_size(), wseed(1));
        note(1, compare(names[1], &cp, &cvc_def(&p, 0, n), &w, peaks));

        let k = i % n;
        let fp = FvsProblem::new(&p, k, &none).unwrap();
        let w = sample_weights(fp.universe_size(), wseed(2));
        note(2, compare(names[2], &fp, &fvs_def(&p, k), &w, peaks));

        let max = 1 + i % n;
        let op = CoctProblem::new(&p, 0, max, &none).unwrap();
        let w = sample_weights(op.universe_size(), wseed(3));
        note(3, compare(names[3], &op, &coct_def(&p, 0, max), &w, peaks));

        // OCT runs the connected variant with a universal vertex forced in.
        let aug = p.with_universal_vertex().unwrap();
        let u = aug.n() - 1;
        let none = vec![false; aug.n()];
        let op = CoctProblem::new(&aug, u, max + 1, &none).unwrap();
        let w = sample_weights(op.universe_size(), wseed(4));
        note(4, compare(names[4], &op, &coct_def(&aug, u, max + 1), &w, peaks));
    }
    Line::new(
        "4",
        "root polynomial = exhaustive |Q_w| mod 2",
        bad.is_empty(),
        format!(
            "{} instances (n <= {PARITY_MAX_N}) per problem, production and verification engines; mismatches {bad:?}",
            checked.iter().min().unwrap()
        ),
    )
}

// ---- function families --------------------------------------------------

const FAMILY_INSTANCES: usize = 120;
const DEFINITION_MAX_PART: usize = 6;

fn family_instances() -> Vec<PreparedInstance> {
    (0..FAMILY_INSTANCES)
        .map(|i| match i % 3 {
            0 => corpus::prepare(&corpus::unit_disk(40, i, 6, 18)),
            1 => corpus::prepare(&corpus::clustered(41, i, 18)),
            _ => {
                let g = corpus::random_graph(6 + i % 8, 0.5, seed::derive2(BASE_SEED, 42, i as u64));
                PreparedInstance::from_graph(g, 2).unwrap()
            }
        })
        .collect()
}

/// The three capped families on instance `p`, with their stated caps.
fn families_of(p: &PreparedInstance) -> Vec<CappedFamilies> {
    let n = p.n();
    let none = vec![false; n];
    let kappa = p.quotient.kappa() as i32;
    let delta = p.quotient.delta() as i32;
    let terminals = corpus::pick_distinct(n, 3.min(n), seed::derive(BASE_SEED, n as u64));
    let sp = SteinerProblem::new(p, &terminals, n, &none).unwrap();
    let cp = CvcProblem::new(p, 0, n, &none).unwrap();
    let op = CoctProblem::new(p, 0, n, &none).unwrap();
    let all = |f: &dyn Fn(usize) -> Vec<Vec<State>>| (0..p.quotient.num_parts()).map(f).collect::<Vec<_>>();
    vec![
        (
            "Steiner",
            all(&|i| sp.family(i, EngineMode::Production)),
            Box::new(move |s| (1.0 + s as f64).powi(kappa * kappa * (1 + delta)) * 2f64.powi(kappa)),
        ),
        (
            "CVC",
            all(&|i| cp.family(i, EngineMode::Production)),
            Box::new(move |s| (1.0 + s as f64).powi(2 * kappa) * 2f64.powi(kappa)),
        ),
        ("COCT", all(&|i| op.family(i, EngineMode::Production)), Box::new(move |s| (1.0 + s as f64).powi(5 * kappa))),
    ]
}

fn family_bounds() -> Line {
    let mut parts = 0;
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for (idx, p) in family_instances().iter().enumerate() {
        for (name, fams, cap) in families_of(p) {
            for (i, fam) in fams.iter().enumerate() {
                parts += 1;
                let bound = cap(p.quotient.part(i).len());
                worst = worst.max(fam.len() as f64 / bound);
                if fam.len() as f64 > bound {
                    bad.push(format!("{name} instance {idx} part {i}: {} > {bound}", fam.len()));
                }
            }
        }
    }
    Line::new(
        "5",
        "|F(V_i)| within the per-problem caps",
        bad.is_empty(),
        format!("{parts} (problem, part) pairs, largest |F|/cap = {worst:.3e}, violations {bad:?}"),
    )
}

/// Brute-force filter of all state vectors on a part, written from the
/// family definitions: restricted, cut-respecting, anchor on the left.
fn definition_family(p: &PreparedInstance, problem: &str, part: usize, terminals: &[usize]) -> Vec<Vec<State>> {
    let verts = p.quotient.part(part);
    let g = &p.graph;
    let kappa = p.quotient.kappa();
    let states: u8 = if problem == "COCT" { 4 } else { 3 };
    let (left, right) = if problem == "COCT" { (0, 1) } else { (1, 2) };
    let in_solution = |s: State| s == left || s == right;
    let mut out = Vec::new();
    let mut h = vec![0 as State; verts.len()];
    loop {
        let respects = (0..verts.len()).all(|a| {
            (a + 1..verts.len()).all(|b| {
                !(g.has_edge(verts[a], verts[b]) && in_solution(h[a]) && in_solution(h[b]) && h[a] != h[b])
            })
        });
        let anchor_ok = verts.iter().zip(&h).all(|(&v, &s)| v != 0 || s == left);
        let restricted = match problem {
            "Steiner" => {
                verts.iter().zip(&h).all(|(v, &s)| !terminals.contains(v) || s != 0)
                    && verts.iter().zip(&h).filter(|&(v, &s)| s != 0 && !terminals.contains(v)).count()
                        <= kappa * kappa * (p.quotient.delta() + 1)
            }
            "CVC" => h.iter().filter(|&&s| s == 0).count() <= kappa,
            _ => h.iter().filter(|&&s| !in_solution(s)).count() <= 2 * kappa,
        };
        let anchor_ok = if problem == "Steiner" {
            verts.iter().zip(&h).all(|(&v, &s)| v != terminals[0] || s == left)
        } else {
            anchor_ok
        };
        if respects && anchor_ok && restricted {
            out.push(h.clone());
        }
        let mut i = 0;
        while i < h.len() && h[i] + 1 == states {
            h[i] = 0;
            i += 1;
        }
        if i == h.len() {
            break;
        }
        h[i] += 1;
    }
    out.sort();
    out
}

fn family_definitions() -> Line {
    let mut compared = 0;
    let mut bad = Vec::new();
    for (idx, p) in family_instances().iter().enumerate() {
        let n = p.n();
        let terminals = corpus::pick_distinct(n, 3.min(n), seed::derive(BASE_SEED, n as u64));
        for (name, fams, _) in families_of(p) {
            for (i, fam) in fams.iter().enumerate() {
                if p.quotient.part(i).len() > DEFINITION_MAX_PART {
                    continue;
                }
                compared += 1;
                let mut got = fam.clone();
                got.sort();
                if got != definition_family(p, name, i, &terminals) {
                    bad.push(format!("{name} instance {idx} part {i}"));
                }
            }
        }
    }
    Line::new(
        "5",
        "families equal definition-filter enumeration",
        bad.is_empty() && compared > 0,
        format!("{compared} (problem, part) pairs with |V_i| <= {DEFINITION_MAX_PART}, mismatches {bad:?}"),
    )
}
