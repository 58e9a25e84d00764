use super::family::{all_assignments, cut_respecting_sides, family_bound, restricted_subsets};
use super::{decide, is_bipartite_without, is_connected_set, DecisionOutcome, PreparedInstance, SolveOptions};
use crate::cutcount::{CutCountProblem, EngineMode, Gf2Polynomial, MonomialLayout, State};
use crate::decomposition::TreedepthDecomposition;
use crate::geometry::QuotientGraph;
use crate::graph::Graph;
use crate::Result;

const LEFT: State = 0;
const RIGHT: State = 1;
const SIDE_A: State = 2;
const SIDE_B: State = 3;

fn in_solution(s: State) -> bool {
    s == LEFT || s == RIGHT
}

/// Connected Odd Cycle Transversal as a Cut&Count problem. Solutions are
/// pairs (X, A) with X connected and A one side of a bipartition of G - X;
/// the universe is `V x {X, A}` with vertex `v` weighted `v` and `n + v`.
pub struct CoctProblem<'a> {
    inst: &'a PreparedInstance,
    anchor: usize,
    excluded: Vec<bool>,
    max_size: u32,
    layout: MonomialLayout,
}

impl<'a> CoctProblem<'a> {
    pub fn new(inst: &'a PreparedInstance, anchor: usize, max_size: usize, excluded: &[bool]) -> Result<Self> {
        let universe = 2 * inst.n() as u32;
        let layout = MonomialLayout::new(&[2 * universe * universe, max_size as u32])?;
        let mut excl = excluded.to_vec();
        excl.resize(inst.n(), false);
        Ok(CoctProblem { inst, anchor, excluded: excl, max_size: max_size as u32, layout })
    }

    fn outside_cap(&self) -> usize {
        2 * self.inst.quotient.kappa()
    }
}

impl CutCountProblem for CoctProblem<'_> {
    fn graph(&self) -> &Graph {
        &self.inst.graph
    }

    fn quotient(&self) -> &QuotientGraph {
        &self.inst.quotient
    }

    fn decomposition(&self) -> &TreedepthDecomposition {
        &self.inst.decomposition
    }

    fn layout(&self) -> &MonomialLayout {
        &self.layout
    }

    fn universe_size(&self) -> usize {
        2 * self.inst.n()
    }

    fn family(&self, part: usize, mode: EngineMode) -> Vec<Vec<State>> {
        let verts = self.inst.quotient.part(part);
        let cap = self.outside_cap();
        if mode == EngineMode::Verification {
            return all_assignments(verts.len(), 4)
                .into_iter()
                .filter(|h| h.iter().filter(|&&s| !in_solution(s)).count() <= cap)
                .collect();
        }
        let forced: Vec<usize> = (0..verts.len()).filter(|&i| self.excluded[verts[i]]).collect();
        if forced.len() > cap {
            return Vec::new();
        }
        let optional: Vec<usize> = (0..verts.len()).filter(|&i| !self.excluded[verts[i]]).collect();
        let mut out = Vec::new();
        for extra in restricted_subsets(&optional, cap - forced.len()) {
            let mut outside_mask = vec![false; verts.len()];
            for &i in forced.iter().chain(&extra) {
                outside_mask[i] = true;
            }
            let inside: Vec<usize> = (0..verts.len()).filter(|&i| !outside_mask[i]).collect();
            let outside: Vec<usize> = (0..verts.len()).filter(|&i| outside_mask[i]).collect();
            let xs: Vec<usize> = inside.iter().map(|&i| verts[i]).collect();
            for sides in cut_respecting_sides(&self.inst.graph, &xs) {
                let mut h = vec![SIDE_A; verts.len()];
                for (&i, &right) in inside.iter().zip(&sides) {
                    h[i] = if right { RIGHT } else { LEFT };
                }
                if !verts.iter().zip(&h).all(|(&v, &s)| v != self.anchor || s == LEFT) {
                    continue;
                }
                for mask in 0u64..(1u64 << outside.len()) {
                    for (b, &i) in outside.iter().enumerate() {
                        h[i] = if mask >> b & 1 == 1 { SIDE_B } else { SIDE_A };
                    }
                    out.push(h.clone());
                }
            }
        }
        out
    }

    fn family_bound(&self, part: usize) -> f64 {
        let k = self.inst.quotient.kappa();
        family_bound(self.inst.quotient.part(part).len(), 5 * k, 0)
    }

    fn edge_ok(&self, a: State, b: State) -> bool {
        !matches!((a, b), (LEFT, RIGHT) | (RIGHT, LEFT) | (SIDE_A, SIDE_A) | (SIDE_B, SIDE_B))
    }

    fn vertex_ok(&self, v: usize, s: State) -> bool {
        (v != self.anchor || s == LEFT) && (!self.excluded[v] || !in_solution(s))
    }

    fn factor(&self, part: usize, h: &[State], _assignment: &[State], weights: &[u64]) -> Gf2Polynomial {
        let n = self.inst.n();
        let mut w = 0u64;
        let mut size = 0u32;
        for (&v, &s) in self.inst.quotient.part(part).iter().zip(h) {
            if in_solution(s) {
                w += weights[v];
                size += 1;
            } else if s == SIDE_A {
                w += weights[n + v];
            }
        }
        Gf2Polynomial::monomial(&self.layout, &[w as u32, size])
    }

    fn accepts(&self, root: &Gf2Polynomial) -> bool {
        root.exponents(&self.layout).iter().any(|e| e[0] >= 1 && e[1] >= 1 && e[1] <= self.max_size)
    }
}

/// Is there a set of at most `k` vertices (connected if `connected`) whose
/// removal leaves a bipartite graph?
///
/// The connected variant guesses the left anchor among the vertices of one
/// shortest odd cycle, since every transversal meets it. The plain variant
/// adds a universal vertex, forces it into the solution and asks for a
/// connected transversal of size at most `k + 1`.
pub fn odd_cycle_transversal(
    inst: &PreparedInstance,
    k: usize,
    connected: bool,
    opts: &SolveOptions,
) -> Result<DecisionOutcome> {
    let g = &inst.graph;
    let n = g.n();
    let trials = opts.driver.trials;
    let Some(cycle) = g.shortest_odd_cycle() else {
        let mut out = DecisionOutcome::trivial(true, trials);
        out.witness = opts.witness.then(Vec::new);
        return Ok(out);
    };
    if k == 0 {
        return Ok(DecisionOutcome::trivial(false, trials));
    }
    let candidates: Vec<usize> = (0..n).collect();
    let valid = |x: &[usize]| {
        x.len() <= k && is_bipartite_without(g, x) && (!connected || is_connected_set(g, x))
    };
    if connected {
        let max_size = k.min(n);
        return decide(
            n,
            &candidates,
            opts,
            |excluded| {
                cycle
                    .iter()
                    .filter(|&&v| !excluded[v])
                    .map(|&v| CoctProblem::new(inst, v, max_size, excluded))
                    .collect()
            },
            valid,
        );
    }
    let augmented = inst.with_universal_vertex()?;
    let hub = n;
    let max_size = (k + 1).min(n + 1);
    decide(
        n,
        &candidates,
        opts,
        |excluded| Ok(vec![CoctProblem::new(&augmented, hub, max_size, excluded)?]),
        valid,
    )
}
