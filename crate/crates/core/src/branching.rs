//! Polynomial-space branching solvers: (weighted) independent set over the
//! weighted treedepth decomposition, and r-dominating set over a separator
//! tree with part marking.

use serde::Serialize;

use crate::decomposition::{build_separator_tree, SeparatorTree};
use crate::problems::PreparedInstance;
use crate::stats::SolverStats;
use crate::{Error, Result};

const EPS: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchOutcome<T> {
    pub value: T,
    /// Sorted solution vertices.
    pub solution: Vec<usize>,
    pub stats: SolverStats,
    /// Largest ratio of branches taken at a node to the allowed number of
    /// branches at that node.
    pub branching_ratio: f64,
}

pub fn max_independent_set(p: &PreparedInstance) -> BranchOutcome<usize> {
    let out = max_weight_independent_set(p, &vec![1.0; p.n()]).expect("unit weights are valid");
    BranchOutcome {
        value: out.solution.len(),
        solution: out.solution,
        stats: out.stats,
        branching_ratio: out.branching_ratio,
    }
}

/// Maximum-weight independent set. At every decomposition node at most one
/// vertex is taken from each stored clique of the part, and the neighbours of
/// the taken vertices are blocked for the whole subtree below. Subtrees of
/// distinct children share no edges and are solved independently.
pub fn max_weight_independent_set(p: &PreparedInstance, weights: &[f64]) -> Result<BranchOutcome<f64>> {
    if weights.len() != p.n() {
        return Err(Error::InvalidArgument(format!("{} weights for {} vertices", weights.len(), p.n())));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::InvalidArgument(format!("vertex weight {w} is not a finite non-negative number")));
    }
    let mut search = IsSearch {
        p,
        weights,
        blocked: vec![0; p.n()],
        stats: SolverStats::default(),
        live: 0,
        ratio: 0.0,
    };
    let mut value = 0.0;
    let mut solution = Vec::new();
    for &root in p.decomposition.roots() {
        let (v, s) = search.subtree(root, 1);
        value += v;
        solution.extend(s);
    }
    solution.sort_unstable();
    Ok(BranchOutcome { value, solution, stats: search.stats, branching_ratio: search.ratio })
}

struct IsSearch<'a> {
    p: &'a PreparedInstance,
    weights: &'a [f64],
    blocked: Vec<u32>,
    stats: SolverStats,
    live: usize,
    ratio: f64,
}

type Best = Option<(f64, Vec<usize>)>;

impl IsSearch<'_> {
    fn grow(&mut self, words: usize) {
        self.live += words;
        self.stats.peak_states = self.stats.peak_states.max(self.live);
    }

    fn subtree(&mut self, u: usize, level: usize) -> (f64, Vec<usize>) {
        self.stats.calls += 1;
        self.stats.depth = self.stats.depth.max(level);
        let part = self.p.decomposition.node(u).label;
        let cliques = self.p.quotient.cliques(part).to_vec();
        let mut best: Best = None;
        let mut branches = 0usize;
        let mut chosen = Vec::new();
        self.choose(u, level, &cliques, 0, &mut chosen, &mut best, &mut branches);
        let size = self.p.quotient.part(part).len() as f64;
        let bound = (1.0 + size).powi(cliques.len() as i32);
        self.ratio = self.ratio.max(branches as f64 / bound);
        let (value, set) = best.expect("the empty choice is always available");
        self.live -= set.len();
        (value, set)
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &mut self,
        u: usize,
        level: usize,
        cliques: &[Vec<usize>],
        next: usize,
        chosen: &mut Vec<usize>,
        best: &mut Best,
        branches: &mut usize,
    ) {
        if next == cliques.len() {
            *branches += 1;
            self.branch(u, level, chosen, best);
            return;
        }
        self.choose(u, level, cliques, next + 1, chosen, best, branches);
        for &v in &cliques[next] {
            if self.blocked[v] > 0 || chosen.iter().any(|&c| self.p.graph.has_edge(c, v)) {
                continue;
            }
            chosen.push(v);
            self.grow(1);
            self.choose(u, level, cliques, next + 1, chosen, best, branches);
            chosen.pop();
            self.live -= 1;
        }
    }

    fn branch(&mut self, u: usize, level: usize, chosen: &[usize], best: &mut Best) {
        let g = &self.p.graph;
        for &v in chosen {
            self.blocked[v] += 1;
            for &w in g.neighbors(v) {
                self.blocked[w] += 1;
            }
        }
        let mut value: f64 = chosen.iter().map(|&v| self.weights[v]).sum();
        let mut set = chosen.to_vec();
        self.grow(set.len());
        let children = self.p.decomposition.node(u).children.clone();
        for c in children {
            let (cv, cs) = self.subtree(c, level + 1);
            value += cv;
            self.grow(cs.len());
            set.extend(cs);
        }
        for &v in chosen {
            self.blocked[v] -= 1;
            for &w in g.neighbors(v) {
                self.blocked[w] -= 1;
            }
        }
        set.sort_unstable();
        let better = match best {
            None => true,
            Some((bv, bs)) => value > *bv + EPS || ((value - *bv).abs() <= EPS && set < *bs),
        };
        if better {
            if let Some((_, old)) = best.take() {
                self.live -= old.len();
            }
            *best = Some((value, set));
        } else {
            self.live -= set.len();
        }
    }
}

/// Minimum r-dominating set: every vertex is within distance `r` of the set.
///
/// The recursion follows a separator tree built with radius `r`. At a node,
/// the unmarked parts within quotient distance `r` of the separator get
/// their share of the solution fixed (at most `kappa^2 (delta + 1)` vertices
/// each) and become marked. A vertex is checked as soon as every part its
/// r-ball meets is marked. The two sides of a node then share no undecided
/// vertex and are solved independently.
pub fn min_r_dominating_set(p: &PreparedInstance, r: usize) -> Result<BranchOutcome<usize>> {
    if r == 0 {
        return Err(Error::InvalidArgument("domination radius must be at least 1".into()));
    }
    let tree = build_separator_tree(&p.quotient, r);
    min_r_dominating_set_with_tree(p, &tree)
}

pub fn min_r_dominating_set_with_tree(p: &PreparedInstance, tree: &SeparatorTree) -> Result<BranchOutcome<usize>> {
    let r = tree.radius;
    let q = &p.quotient;
    let n = p.n();
    if tree.nodes.iter().map(|t| t.parts.len()).sum::<usize>() != q.num_parts() {
        return Err(Error::InvalidDecomposition("separator tree does not cover every part once".into()));
    }
    let balls: Vec<Vec<usize>> = (0..n).map(|v| p.graph.ball(v, r)).collect();
    let mut watchers = vec![Vec::new(); q.num_parts()];
    let mut pending = vec![0usize; n];
    for (v, ball) in balls.iter().enumerate() {
        let mut parts: Vec<usize> = ball.iter().map(|&w| q.part_of(w)).collect();
        parts.sort_unstable();
        parts.dedup();
        pending[v] = parts.len();
        for part in parts {
            watchers[part].push(v);
        }
    }
    let cap = q.kappa() * q.kappa() * (q.delta() + 1);
    let upper = greedy_domination(&balls);
    let mut search = DsSearch {
        tree,
        balls,
        watchers,
        pending,
        marked: vec![false; q.num_parts()],
        chosen: vec![false; n],
        parts: q.parts().to_vec(),
        cap,
        stats: SolverStats::default(),
        live: 0,
        ratio: 0.0,
    };
    let (value, mut solution) = match tree.root {
        None => (0, Vec::new()),
        Some(root) => search.node(root, upper).expect("an optimum within the part caps exists"),
    };
    solution.sort_unstable();
    Ok(BranchOutcome { value, solution, stats: search.stats, branching_ratio: search.ratio })
}

/// Upper bound from the greedy set-cover heuristic.
fn greedy_domination(balls: &[Vec<usize>]) -> usize {
    let n = balls.len();
    let mut covered = vec![false; n];
    let mut left = n;
    let mut picks = 0;
    while left > 0 {
        let gain = |v: usize| balls[v].iter().filter(|&&w| !covered[w]).count();
        let v = (0..n).max_by_key(|&v| (gain(v), std::cmp::Reverse(v))).expect("vertices remain");
        for &w in &balls[v] {
            if !covered[w] {
                covered[w] = true;
                left -= 1;
            }
        }
        picks += 1;
    }
    picks
}

struct DsSearch<'a> {
    tree: &'a SeparatorTree,
    balls: Vec<Vec<usize>>,
    watchers: Vec<Vec<usize>>,
    pending: Vec<usize>,
    marked: Vec<bool>,
    chosen: Vec<bool>,
    parts: Vec<Vec<usize>>,
    /// Most solution vertices taken from one part.
    cap: usize,
    stats: SolverStats,
    live: usize,
    ratio: f64,
}

/// Best completion of a subtree: its size and the vertices it adds.
type Completion = Option<(usize, Vec<usize>)>;

impl DsSearch<'_> {
    /// Cheapest completion of the subtree at `s` using at most `limit`
    /// vertices, or `None`.
    fn node(&mut self, s: usize, limit: usize) -> Completion {
        self.stats.calls += 1;
        self.stats.depth = self.stats.depth.max(self.tree.nodes[s].level + 1);
        let open: Vec<usize> = self.tree.nodes[s].neighborhood.iter().copied().filter(|&j| !self.marked[j]).collect();
        let mut best: Completion = None;
        let mut picked = Vec::new();
        let mut branches = 0usize;
        self.assign(s, &open, 0, &mut picked, limit, &mut best, &mut branches);
        let allowed: f64 = open.iter().map(|&j| capped_subsets(self.parts[j].len(), self.cap)).product();
        self.ratio = self.ratio.max(branches as f64 / allowed);
        if let Some((_, sol)) = &best {
            self.live -= sol.len();
        }
        best
    }

    fn budget(limit: usize, best: &Completion) -> Option<usize> {
        match best {
            None => Some(limit),
            Some((b, _)) => b.checked_sub(1).map(|b| b.min(limit)),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn assign(
        &mut self,
        s: usize,
        open: &[usize],
        idx: usize,
        picked: &mut Vec<usize>,
        limit: usize,
        best: &mut Completion,
        branches: &mut usize,
    ) {
        let Some(budget) = Self::budget(limit, best) else { return };
        if picked.len() > budget {
            return;
        }
        if idx == open.len() {
            *branches += 1;
            self.finish(s, picked, budget, best);
            return;
        }
        let part = open[idx];
        let verts = self.parts[part].clone();
        for size in 0..=self.cap.min(verts.len()) {
            let mut combo: Vec<usize> = (0..size).collect();
            loop {
                let Some(budget) = Self::budget(limit, best) else { return };
                if picked.len() + size > budget {
                    return;
                }
                for &i in &combo {
                    self.chosen[verts[i]] = true;
                    picked.push(verts[i]);
                }
                self.live += size;
                self.stats.peak_states = self.stats.peak_states.max(self.live);
                if self.mark(part) {
                    self.assign(s, open, idx + 1, picked, limit, best, branches);
                }
                self.unmark(part);
                for &i in &combo {
                    self.chosen[verts[i]] = false;
                    picked.pop();
                }
                self.live -= size;
                if !next_combination(&mut combo, verts.len()) {
                    break;
                }
            }
        }
    }

    /// Marks `part`; false if some vertex becomes fully decided while
    /// undominated.
    fn mark(&mut self, part: usize) -> bool {
        self.marked[part] = true;
        let mut ok = true;
        for &v in &self.watchers[part] {
            self.pending[v] -= 1;
            if self.pending[v] == 0 && ok && !self.balls[v].iter().any(|&w| self.chosen[w]) {
                ok = false;
            }
        }
        ok
    }

    fn unmark(&mut self, part: usize) {
        self.marked[part] = false;
        for &v in &self.watchers[part] {
            self.pending[v] += 1;
        }
    }

    fn finish(&mut self, s: usize, picked: &[usize], budget: usize, best: &mut Completion) {
        let mut total = picked.len();
        let mut sol = picked.to_vec();
        self.live += sol.len();
        let children = self.tree.nodes[s].children.clone();
        for c in children {
            match self.node(c, budget - total) {
                Some((cost, cs)) => {
                    total += cost;
                    self.live += cs.len();
                    self.stats.peak_states = self.stats.peak_states.max(self.live);
                    sol.extend(cs);
                }
                None => {
                    self.live -= sol.len();
                    return;
                }
            }
        }
        sol.sort_unstable();
        if let Some((_, old)) = best.take() {
            self.live -= old.len();
        }
        *best = Some((total, sol));
    }
}

/// Number of subsets of an `n`-set with at most `cap` elements.
fn capped_subsets(n: usize, cap: usize) -> f64 {
    let mut total = 0.0;
    let mut binom = 1.0;
    for j in 0..=cap.min(n) {
        total += binom;
        binom = binom * (n - j) as f64 / (j + 1) as f64;
    }
    total
}

/// Advances `combo` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// True if every vertex is within distance `r` of `set`.
pub fn is_r_dominating(g: &crate::Graph, r: usize, set: &[usize]) -> bool {
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = std::collections::VecDeque::new();
    for &v in set {
        if dist[v] != 0 {
            dist[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        if dist[v] == r {
            continue;
        }
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist.iter().all(|&d| d <= r)
}
