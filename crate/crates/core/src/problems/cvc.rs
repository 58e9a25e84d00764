use super::family::{all_assignments, cut_respecting_sides, family_bound, restricted_subsets};
use super::{decide, is_connected_set, DecisionOutcome, PreparedInstance, SolveOptions};
use crate::cutcount::{CutCountProblem, EngineMode, Gf2Polynomial, MonomialLayout, State};
use crate::decomposition::TreedepthDecomposition;
use crate::geometry::QuotientGraph;
use crate::graph::Graph;
use crate::Result;

const OUT: State = 0;
const LEFT: State = 1;
const RIGHT: State = 2;

/// Connected Vertex Cover as a Cut&Count problem with a guessed solution
/// vertex `anchor` fixed on the left.
pub struct CvcProblem<'a> {
    inst: &'a PreparedInstance,
    anchor: usize,
    excluded: Vec<bool>,
    max_size: u32,
    layout: MonomialLayout,
}

impl<'a> CvcProblem<'a> {
    pub fn new(inst: &'a PreparedInstance, anchor: usize, max_size: usize, excluded: &[bool]) -> Result<Self> {
        let universe = inst.n() as u32;
        let layout = MonomialLayout::new(&[2 * universe * universe, max_size as u32])?;
        Ok(CvcProblem { inst, anchor, excluded: excluded.to_vec(), max_size: max_size as u32, layout })
    }

    /// At most `kappa` vertices of a part stay outside the cover.
    fn outside_cap(&self) -> usize {
        self.inst.quotient.kappa()
    }
}

impl CutCountProblem for CvcProblem<'_> {
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
        self.inst.n()
    }

    fn family(&self, part: usize, mode: EngineMode) -> Vec<Vec<State>> {
        let verts = self.inst.quotient.part(part);
        let cap = self.outside_cap();
        if mode == EngineMode::Verification {
            return all_assignments(verts.len(), 3)
                .into_iter()
                .filter(|h| h.iter().filter(|&&s| s == OUT).count() <= cap)
                .collect();
        }
        let forced: Vec<usize> = (0..verts.len()).filter(|&i| self.excluded[verts[i]]).collect();
        if forced.len() > cap {
            return Vec::new();
        }
        let optional: Vec<usize> = (0..verts.len()).filter(|&i| !self.excluded[verts[i]]).collect();
        let mut out = Vec::new();
        for extra in restricted_subsets(&optional, cap - forced.len()) {
            let mut outside = vec![false; verts.len()];
            for &i in forced.iter().chain(&extra) {
                outside[i] = true;
            }
            let inside: Vec<usize> = (0..verts.len()).filter(|&i| !outside[i]).collect();
            let xs: Vec<usize> = inside.iter().map(|&i| verts[i]).collect();
            for sides in cut_respecting_sides(&self.inst.graph, &xs) {
                let mut h = vec![OUT; verts.len()];
                for (&i, &right) in inside.iter().zip(&sides) {
                    h[i] = if right { RIGHT } else { LEFT };
                }
                if verts.iter().zip(&h).all(|(&v, &s)| v != self.anchor || s == LEFT) {
                    out.push(h);
                }
            }
        }
        out
    }

    fn family_bound(&self, part: usize) -> f64 {
        let k = self.inst.quotient.kappa();
        family_bound(self.inst.quotient.part(part).len(), 2 * k, k)
    }

    fn edge_ok(&self, a: State, b: State) -> bool {
        !matches!((a, b), (LEFT, RIGHT) | (RIGHT, LEFT) | (OUT, OUT))
    }

    fn vertex_ok(&self, v: usize, s: State) -> bool {
        (v != self.anchor || s == LEFT) && (!self.excluded[v] || s == OUT)
    }

    fn factor(&self, part: usize, h: &[State], _assignment: &[State], weights: &[u64]) -> Gf2Polynomial {
        let verts = self.inst.quotient.part(part);
        let (w, c) = verts
            .iter()
            .zip(h)
            .filter(|&(_, &s)| s != OUT)
            .fold((0u64, 0u32), |(w, c), (&v, _)| (w + weights[v], c + 1));
        Gf2Polynomial::monomial(&self.layout, &[w as u32, c])
    }

    fn accepts(&self, root: &Gf2Polynomial) -> bool {
        root.exponents(&self.layout).iter().any(|e| e[0] >= 1 && e[1] >= 1 && e[1] <= self.max_size)
    }
}

/// Is there a connected vertex cover with at most `k` vertices? Every cover
/// contains an endpoint of the first edge, so only those two vertices are
/// guessed as the left anchor.
pub fn connected_vertex_cover(inst: &PreparedInstance, k: usize, opts: &SolveOptions) -> Result<DecisionOutcome> {
    let g = &inst.graph;
    let trials = opts.driver.trials;
    let Some((a, b)) = g.edges().next() else {
        let mut out = DecisionOutcome::trivial(true, trials);
        out.witness = opts.witness.then(Vec::new);
        return Ok(out);
    };
    let with_edges = g.components().into_iter().filter(|c| c.len() > 1).count();
    if with_edges > 1 || k == 0 {
        return Ok(DecisionOutcome::trivial(false, trials));
    }
    let max_size = k.min(inst.n());
    let candidates: Vec<usize> = (0..inst.n()).collect();
    decide(
        inst.n(),
        &candidates,
        opts,
        |excluded| {
            [a, b]
                .into_iter()
                .filter(|&v| !excluded[v])
                .map(|v| CvcProblem::new(inst, v, max_size, excluded))
                .collect()
        },
        |x| {
            let mut inside = vec![false; g.n()];
            for &v in x {
                inside[v] = true;
            }
            x.len() <= k && g.edges().all(|(u, v)| inside[u] || inside[v]) && is_connected_set(g, x)
        },
    )
}
