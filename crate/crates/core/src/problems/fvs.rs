use super::family::{all_assignments, cut_respecting_sides, family_bound, restricted_subsets};
use super::{decide, is_forest_without, DecisionOutcome, PreparedInstance, SolveOptions};
use crate::cutcount::{CutCountProblem, EngineMode, Gf2Polynomial, MonomialLayout, State};
use crate::decomposition::TreedepthDecomposition;
use crate::geometry::QuotientGraph;
use crate::graph::Graph;
use crate::{Error, Result};

const IN: State = 0;
const LEFT: State = 1;
const RIGHT: State = 2;

/// Feedback Vertex Set counted through its complement: a forest `Y` with one
/// marked vertex per component. Variables are weight, `|Y|` and
/// `|E(G[Y])| + |M|`; markers live on the left side of the cut. The universe
/// is `V x {forest, marker}`: vertex `v` has weights `v` and `n + v`.
///
/// Edges and markers share one exponent. Once unmarked components cancel,
/// `|E| + |M| >= |Y|` with equality exactly for forests with one marker per
/// component, and objects with no marker at all come in pairs, so the
/// separate `|M| >= 1` check is not needed.
pub struct FvsProblem<'a> {
    inst: &'a PreparedInstance,
    k: usize,
    excluded: Vec<bool>,
    layout: MonomialLayout,
}

impl<'a> FvsProblem<'a> {
    /// Requires `k < n`.
    pub fn new(inst: &'a PreparedInstance, k: usize, excluded: &[bool]) -> Result<Self> {
        let n = inst.n();
        if k >= n {
            return Err(Error::InvalidArgument(format!("budget {k} must be below n = {n}")));
        }
        let keep = (n - k) as u32;
        let universe = 2 * n as u32;
        let layout = MonomialLayout::new(&[2 * universe * universe, keep, keep])?;
        Ok(FvsProblem { inst, k, excluded: excluded.to_vec(), layout })
    }

    fn kept_cap(&self) -> usize {
        2 * self.inst.quotient.kappa()
    }
}

impl CutCountProblem for FvsProblem<'_> {
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
        let cap = self.kept_cap();
        if mode == EngineMode::Verification {
            return all_assignments(verts.len(), 3)
                .into_iter()
                .filter(|h| h.iter().filter(|&&s| s != IN).count() <= cap)
                .collect();
        }
        let forced: Vec<usize> = (0..verts.len()).filter(|&i| self.excluded[verts[i]]).collect();
        if forced.len() > cap {
            return Vec::new();
        }
        let optional: Vec<usize> = (0..verts.len()).filter(|&i| !self.excluded[verts[i]]).collect();
        let mut out = Vec::new();
        for extra in restricted_subsets(&optional, cap - forced.len()) {
            let mut kept = forced.clone();
            kept.extend(extra);
            kept.sort_unstable();
            let ys: Vec<usize> = kept.iter().map(|&i| verts[i]).collect();
            for sides in cut_respecting_sides(&self.inst.graph, &ys) {
                let mut h = vec![IN; verts.len()];
                for (&i, &right) in kept.iter().zip(&sides) {
                    h[i] = if right { RIGHT } else { LEFT };
                }
                out.push(h);
            }
        }
        out
    }

    fn family_bound(&self, part: usize) -> f64 {
        let k = self.inst.quotient.kappa();
        family_bound(self.inst.quotient.part(part).len(), 2 * k, k)
    }

    fn edge_ok(&self, a: State, b: State) -> bool {
        !matches!((a, b), (LEFT, RIGHT) | (RIGHT, LEFT))
    }

    fn vertex_ok(&self, v: usize, s: State) -> bool {
        !self.excluded[v] || s != IN
    }

    fn factor(&self, part: usize, h: &[State], assignment: &[State], weights: &[u64]) -> Gf2Polynomial {
        let n = self.inst.n();
        let q = &self.inst.quotient;
        let g = &self.inst.graph;
        let verts = q.part(part);
        let mut w = 0u64;
        let mut kept = 0u32;
        let mut edges = 0u32;
        for (&v, &s) in verts.iter().zip(h) {
            if s == IN {
                continue;
            }
            w += weights[v];
            kept += 1;
            for &u in g.neighbors(v) {
                let t = assignment[u];
                if t == LEFT || t == RIGHT {
                    // Edges inside the part are seen from both ends.
                    if q.part_of(u) != part || u > v {
                        edges += 1;
                    }
                }
            }
        }
        let mut f = Gf2Polynomial::monomial(&self.layout, &[w as u32, kept, edges]);
        for (&v, &s) in verts.iter().zip(h) {
            if s == LEFT && !f.is_zero() {
                let marker = Gf2Polynomial::one()
                    .add(&Gf2Polynomial::monomial(&self.layout, &[weights[n + v] as u32, 0, 1]));
                f = f.mul(&marker, &self.layout);
            }
        }
        f
    }

    fn accepts(&self, root: &Gf2Polynomial) -> bool {
        let keep = (self.inst.n() - self.k) as u32;
        root.exponents(&self.layout).iter().any(|e| e[1] == keep && e[2] == keep)
    }
}

/// Is there a vertex set of size at most `k` whose removal leaves a forest?
pub fn feedback_vertex_set(inst: &PreparedInstance, k: usize, opts: &SolveOptions) -> Result<DecisionOutcome> {
    let n = inst.n();
    if k > n {
        return Err(Error::InvalidArgument(format!("budget {k} exceeds n = {n}")));
    }
    if k == n {
        let mut out = DecisionOutcome::trivial(true, opts.driver.trials);
        out.witness = opts.witness.then(|| (0..n).collect());
        return Ok(out);
    }
    let candidates: Vec<usize> = (0..n).collect();
    decide(
        n,
        &candidates,
        opts,
        |excluded| Ok(vec![FvsProblem::new(inst, k, excluded)?]),
        |x| x.len() <= k && is_forest_without(&inst.graph, x),
    )
}
