//! Cut&Count solvers: Steiner Tree, Connected Vertex Cover, Feedback Vertex
//! Set and (Connected) Odd Cycle Transversal.

mod cvc;
pub(crate) mod family;
mod fvs;
mod oct;
mod steiner;

pub use cvc::{connected_vertex_cover, CvcProblem};
pub use family::{cut_respecting_sides, restricted_subsets};
pub use fvs::{feedback_vertex_set, FvsProblem};
pub use oct::{odd_cycle_transversal, CoctProblem};
pub use steiner::{steiner_tree, SteinerProblem};

use serde::Serialize;

use crate::cutcount::{run_trials, CutCountProblem, DriverConfig, DriverOutcome};
use crate::decomposition::{build_weighted_treedepth, TreedepthDecomposition};
use crate::geometry::{grid_clique_partition, robust_clique_partition, GeometricInstance, QuotientGraph};
use crate::graph::Graph;
use crate::stats::SolverStats;
use crate::Result;

/// A graph with its clique partition and a weighted treedepth decomposition
/// of the quotient graph.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedInstance {
    pub graph: Graph,
    pub quotient: QuotientGraph,
    pub decomposition: TreedepthDecomposition,
}

impl PreparedInstance {
    pub fn new(graph: Graph, quotient: QuotientGraph) -> Self {
        let decomposition = build_weighted_treedepth(&quotient);
        PreparedInstance { graph, quotient, decomposition }
    }

    /// Intersection graph with the grid clique partition.
    pub fn from_geometry(inst: &GeometricInstance) -> Result<Self> {
        let graph = inst.intersection_graph();
        let quotient = grid_clique_partition(inst, &graph)?;
        Ok(Self::new(graph, quotient))
    }

    /// Plain graph with the greedy clique partition.
    pub fn from_graph(graph: Graph, kappa_target: usize) -> Result<Self> {
        let quotient = robust_clique_partition(&graph, kappa_target)?;
        Ok(Self::new(graph, quotient))
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Adds a vertex adjacent to everything as a new singleton part placed
    /// above all roots of the decomposition.
    pub fn with_universal_vertex(&self) -> Result<Self> {
        let graph = self.graph.with_universal_vertex();
        let quotient = self.quotient.with_universal_part(&graph)?;
        let decomposition = self.decomposition.with_new_root(quotient.weight(quotient.num_parts() - 1))?;
        Ok(PreparedInstance { graph, quotient, decomposition })
    }
}

/// Answer of a Cut&Count decision solver.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DecisionOutcome {
    pub answer: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    pub trials: usize,
    pub stats: SolverStats,
}

impl DecisionOutcome {
    pub(crate) fn trivial(answer: bool, trials: usize) -> Self {
        DecisionOutcome { answer, witness: None, trials, stats: SolverStats::default() }
    }

    fn from_driver(d: DriverOutcome) -> Self {
        DecisionOutcome { answer: d.answer, witness: None, trials: d.trials, stats: d.stats }
    }
}

/// Options shared by the decision solvers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub driver: DriverConfig,
    /// Recover a solution by self-reduction (one extra run per vertex).
    pub witness: bool,
}

impl From<DriverConfig> for SolveOptions {
    fn from(driver: DriverConfig) -> Self {
        SolveOptions { driver, witness: false }
    }
}

/// Runs `build(excluded)` through the driver; with witnesses enabled, tries to
/// exclude the `candidates` one at a time and keeps each exclusion that stays
/// a yes-instance. The surviving vertices are then checked with `valid`.
fn decide<P, B, V>(n: usize, candidates: &[usize], opts: &SolveOptions, build: B, valid: V) -> Result<DecisionOutcome>
where
    P: CutCountProblem,
    B: Fn(&[bool]) -> Result<Vec<P>>,
    V: Fn(&[usize]) -> bool,
{
    let mut excluded = vec![false; n];
    let first = run_trials(&build(&excluded)?, &opts.driver)?;
    let mut out = DecisionOutcome::from_driver(first);
    if !out.answer || !opts.witness {
        return Ok(out);
    }
    for &v in candidates {
        excluded[v] = true;
        let guesses = build(&excluded)?;
        let run = run_trials(&guesses, &opts.driver)?;
        out.stats.merge(&run.stats);
        if !run.answer {
            excluded[v] = false;
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&v| !excluded[v]).collect();
    if valid(&kept) {
        out.witness = Some(kept);
    }
    Ok(out)
}

pub(crate) fn is_connected_set(g: &Graph, set: &[usize]) -> bool {
    let mut keep = vec![false; g.n()];
    for &v in set {
        keep[v] = true;
    }
    g.components_within(&keep).len() <= 1
}

pub(crate) fn is_bipartite_without(g: &Graph, removed: &[usize]) -> bool {
    let mut color = vec![u8::MAX; g.n()];
    for &v in removed {
        color[v] = 2;
    }
    for s in 0..g.n() {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if color[w] == 2 {
                    continue;
                }
                if color[w] == u8::MAX {
                    color[w] = 1 - color[u];
                    stack.push(w);
                } else if color[w] == color[u] {
                    return false;
                }
            }
        }
    }
    true
}

pub(crate) fn is_forest_without(g: &Graph, removed: &[usize]) -> bool {
    let mut keep = vec![true; g.n()];
    for &v in removed {
        keep[v] = false;
    }
    let vertices = keep.iter().filter(|&&k| k).count();
    let edges = g.edges().filter(|&(u, v)| keep[u] && keep[v]).count();
    edges + g.components_within(&keep).len() == vertices
}
