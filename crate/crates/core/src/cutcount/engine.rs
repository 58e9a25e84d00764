use super::poly::{Gf2Polynomial, MonomialLayout};
use crate::decomposition::TreedepthDecomposition;
use crate::geometry::QuotientGraph;
use crate::graph::Graph;
use crate::stats::SolverStats;
use crate::{Error, Result};

/// Per-vertex state code; meaning is problem specific.
pub type State = u8;
pub const UNASSIGNED: State = u8::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineMode {
    /// Cut-respecting families, constraints checked as soon as both
    /// endpoints of an edge are assigned.
    Production,
    /// All restricted functions, constraints checked only at the leaves.
    /// Slower, used to cross-check production mode.
    Verification,
}

/// A Cut&Count problem whose constraints are unary and pairwise: a full
/// assignment is counted iff every vertex state is allowed and every edge
/// joins compatible states.
pub trait CutCountProblem: Sync {
    fn graph(&self) -> &Graph;
    fn quotient(&self) -> &QuotientGraph;
    fn decomposition(&self) -> &TreedepthDecomposition;
    fn layout(&self) -> &MonomialLayout;
    /// Size of the universe the isolation weights live on.
    fn universe_size(&self) -> usize;
    /// Functions on `part` (one state per vertex, in part order).
    fn family(&self, part: usize, mode: EngineMode) -> Vec<Vec<State>>;
    /// Upper bound on the production family size of `part`.
    fn family_bound(&self, part: usize) -> f64;
    fn edge_ok(&self, a: State, b: State) -> bool;
    fn vertex_ok(&self, v: usize, s: State) -> bool;
    /// Polynomial contributed by assigning `h` to `part`; `assignment` holds
    /// the ancestors' states with `h` already written in.
    fn factor(&self, part: usize, h: &[State], assignment: &[State], weights: &[u64]) -> Gf2Polynomial;
    /// Whether some target coefficient of the root polynomial is 1.
    fn accepts(&self, root: &Gf2Polynomial) -> bool;
}

#[derive(Clone, Debug)]
pub struct Families {
    pub mode: EngineMode,
    pub per_part: Vec<Vec<Vec<State>>>,
}

impl Families {
    pub fn largest(&self) -> usize {
        self.per_part.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Materializes every part's family, aborting if a production family exceeds
/// its declared bound.
pub fn prepare_families<P: CutCountProblem + ?Sized>(p: &P, mode: EngineMode) -> Result<Families> {
    let mut per_part = Vec::with_capacity(p.quotient().num_parts());
    for part in 0..p.quotient().num_parts() {
        let fam = p.family(part, mode);
        if mode == EngineMode::Production {
            let bound = p.family_bound(part);
            if fam.len() as f64 > bound {
                return Err(Error::FamilyBound { part, size: fam.len(), bound });
            }
        }
        per_part.push(fam);
    }
    Ok(Families { mode, per_part })
}

struct Evaluator<'a, P: ?Sized> {
    p: &'a P,
    families: &'a Families,
    weights: &'a [u64],
    assignment: Vec<State>,
    stats: SolverStats,
    live: usize,
}

impl<'a, P: CutCountProblem + ?Sized> Evaluator<'a, P> {
    fn touch(&mut self, delta_in: usize, delta_out: usize) {
        self.live = self.live + delta_in - delta_out;
        self.stats.peak_states = self.stats.peak_states.max(self.live);
    }

    fn compatible(&self, verts: &[usize]) -> bool {
        let g = self.p.graph();
        verts.iter().all(|&v| {
            let s = self.assignment[v];
            g.neighbors(v).iter().all(|&w| {
                let t = self.assignment[w];
                t == UNASSIGNED || self.p.edge_ok(s, t)
            })
        })
    }

    fn leaf_holds(&self, u: usize) -> bool {
        let td = self.p.decomposition();
        let q = self.p.quotient();
        let g = self.p.graph();
        td.ancestors(u).into_iter().flat_map(|a| q.part(td.node(a).label).iter().copied()).all(|v| {
            let s = self.assignment[v];
            self.p.vertex_ok(v, s)
                && g.neighbors(v).iter().all(|&w| {
                    let t = self.assignment[w];
                    t == UNASSIGNED || self.p.edge_ok(s, t)
                })
        })
    }

    /// Sum over the family of `u` of the excluded polynomial times the factor.
    fn inc(&mut self, u: usize, depth: usize) -> Gf2Polynomial {
        self.stats.calls += 1;
        self.stats.depth = self.stats.depth.max(depth);
        let part = self.p.decomposition().node(u).label;
        let verts = self.p.quotient().part(part);
        let layout = self.p.layout();
        let production = self.families.mode == EngineMode::Production;
        let mut acc = Gf2Polynomial::zero();
        for h in &self.families.per_part[part] {
            for (&v, &s) in verts.iter().zip(h) {
                self.assignment[v] = s;
            }
            if !production || self.compatible(verts) {
                let sub = self.exc(u, depth);
                if !sub.is_zero() {
                    let f = self.p.factor(part, h, &self.assignment, self.weights);
                    let before = acc.len();
                    acc.add_assign(&sub.mul(&f, layout));
                    self.touch(acc.len() + sub.len(), before + sub.len());
                }
            }
            for &v in verts {
                self.assignment[v] = UNASSIGNED;
            }
        }
        self.touch(0, acc.len());
        acc
    }

    /// Product over the children of `u`, or the leaf predicate.
    fn exc(&mut self, u: usize, depth: usize) -> Gf2Polynomial {
        self.stats.calls += 1;
        let children = &self.p.decomposition().node(u).children;
        if children.is_empty() {
            let holds = self.families.mode == EngineMode::Production || self.leaf_holds(u);
            return if holds { Gf2Polynomial::one() } else { Gf2Polynomial::zero() };
        }
        let layout = self.p.layout();
        let mut prod = Gf2Polynomial::one();
        self.touch(1, 0);
        for &c in children {
            let child = self.inc(c, depth + 1);
            let before = prod.len();
            self.touch(child.len(), 0);
            prod = prod.mul(&child, layout);
            self.touch(prod.len(), before + child.len());
            if prod.is_zero() {
                break;
            }
        }
        self.touch(0, prod.len());
        prod
    }
}

/// Root polynomial for one weight assignment: the product over the roots of
/// the decomposition.
pub fn evaluate<P: CutCountProblem + ?Sized>(
    p: &P,
    families: &Families,
    weights: &[u64],
) -> (Gf2Polynomial, SolverStats) {
    let mut ev = Evaluator {
        p,
        families,
        weights,
        assignment: vec![UNASSIGNED; p.graph().n()],
        stats: SolverStats::default(),
        live: 0,
    };
    let layout = p.layout();
    let mut root = Gf2Polynomial::one();
    for &r in p.decomposition().roots() {
        let sub = ev.inc(r, 1);
        root = root.mul(&sub, layout);
        if root.is_zero() {
            break;
        }
    }
    (root, ev.stats)
}
