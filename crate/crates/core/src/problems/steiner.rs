use super::family::{all_assignments, cut_respecting_sides, family_bound, restricted_subsets};
use super::{decide, is_connected_set, DecisionOutcome, PreparedInstance, SolveOptions};
use crate::cutcount::{CutCountProblem, EngineMode, Gf2Polynomial, MonomialLayout, State};
use crate::decomposition::TreedepthDecomposition;
use crate::geometry::QuotientGraph;
use crate::graph::Graph;
use crate::{Error, Result};

const OUT: State = 0;
const LEFT: State = 1;
const RIGHT: State = 2;

/// Steiner Tree as a Cut&Count problem: states are out / left / right, all
/// terminals are in the solution and the first terminal is on the left.
pub struct SteinerProblem<'a> {
    inst: &'a PreparedInstance,
    terminal: Vec<bool>,
    num_terminals: usize,
    anchor: usize,
    excluded: Vec<bool>,
    /// Per-part cap on non-terminal solution vertices.
    cap: usize,
    max_size: u32,
    layout: MonomialLayout,
}

impl<'a> SteinerProblem<'a> {
    /// `terminals` must be nonempty, distinct and in range; the solution size
    /// is capped at `max_size`.
    pub fn new(inst: &'a PreparedInstance, terminals: &[usize], max_size: usize, excluded: &[bool]) -> Result<Self> {
        let n = inst.n();
        let mut terminal = vec![false; n];
        for &t in terminals {
            if t >= n {
                return Err(Error::InvalidArgument(format!("terminal {t} out of range")));
            }
            if terminal[t] {
                return Err(Error::InvalidArgument(format!("terminal {t} repeated")));
            }
            terminal[t] = true;
        }
        let anchor = *terminals.iter().min().ok_or_else(|| Error::InvalidArgument("no terminals".into()))?;
        let q = &inst.quotient;
        let cap = q.kappa() * q.kappa() * (q.delta() + 1);
        let universe = n as u32;
        let layout = MonomialLayout::new(&[2 * universe * universe, max_size as u32])?;
        Ok(SteinerProblem {
            inst,
            terminal,
            num_terminals: terminals.len(),
            anchor,
            excluded: excluded.to_vec(),
            cap,
            max_size: max_size as u32,
            layout,
        })
    }

    fn restricted(&self, part: usize, h: &[State]) -> bool {
        let verts = self.inst.quotient.part(part);
        verts.iter().zip(h).filter(|&(&v, &s)| s != OUT && !self.terminal[v]).count() <= self.cap
    }
}

impl CutCountProblem for SteinerProblem<'_> {
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
        if mode == EngineMode::Verification {
            return all_assignments(verts.len(), 3).into_iter().filter(|h| self.restricted(part, h)).collect();
        }
        let free: Vec<usize> =
            (0..verts.len()).filter(|&i| !self.terminal[verts[i]] && !self.excluded[verts[i]]).collect();
        let fixed: Vec<usize> = (0..verts.len()).filter(|&i| self.terminal[verts[i]]).collect();
        let mut out = Vec::new();
        for extra in restricted_subsets(&free, self.cap) {
            let mut inside = fixed.clone();
            inside.extend(extra);
            inside.sort_unstable();
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
        family_bound(self.inst.quotient.part(part).len(), self.cap, self.inst.quotient.kappa())
    }

    fn edge_ok(&self, a: State, b: State) -> bool {
        !matches!((a, b), (LEFT, RIGHT) | (RIGHT, LEFT))
    }

    fn vertex_ok(&self, v: usize, s: State) -> bool {
        (!self.terminal[v] || s != OUT) && (v != self.anchor || s == LEFT) && (!self.excluded[v] || s == OUT)
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
        let lo = self.num_terminals as u32;
        root.exponents(&self.layout).iter().any(|e| e[0] >= 1 && e[1] >= lo && e[1] <= self.max_size)
    }
}

/// Is there a connected vertex set of size at most `k` containing all
/// terminals? One-sided Monte Carlo: a `true` answer is always correct.
pub fn steiner_tree(
    inst: &PreparedInstance,
    terminals: &[usize],
    k: usize,
    opts: &SolveOptions,
) -> Result<DecisionOutcome> {
    let mut sorted = terminals.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() {
        return Err(Error::InvalidArgument("Steiner Tree needs at least one terminal".into()));
    }
    if let Some(&t) = sorted.iter().find(|&&t| t >= inst.n()) {
        return Err(Error::InvalidArgument(format!("terminal {t} out of range")));
    }
    if k < sorted.len() {
        return Ok(DecisionOutcome::trivial(false, opts.driver.trials));
    }
    if sorted.len() == 1 {
        let mut out = DecisionOutcome::trivial(true, opts.driver.trials);
        out.witness = opts.witness.then(|| sorted.clone());
        return Ok(out);
    }
    let q = &inst.quotient;
    let per_part = q.kappa() * q.kappa() * (q.delta() + 1);
    let max_size = k.min(sorted.len() + per_part * q.num_parts()).min(inst.n());
    let candidates: Vec<usize> = (0..inst.n()).filter(|v| sorted.binary_search(v).is_err()).collect();
    decide(
        inst.n(),
        &candidates,
        opts,
        |excluded| Ok(vec![SteinerProblem::new(inst, &sorted, max_size, excluded)?]),
        |x| x.len() <= k && sorted.iter().all(|t| x.contains(t)) && is_connected_set(&inst.graph, x),
    )
}
