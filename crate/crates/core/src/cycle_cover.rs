//! Cycle Cover, Hamiltonian Cycle and Hamiltonian Path through the boundary
//! kernel: every part of a clique partition keeps only the vertices a
//! canonical cover may need at its boundary, plus some padding, and the
//! decision is taken on the induced subgraph of the kept vertices.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::decomposition::{build_unweighted_treedepth, build_weighted_treedepth, TreedepthDecomposition};
use crate::geometry::QuotientGraph;
use crate::graph::Graph;
use crate::stats::SolverStats;
use crate::{Error, Result};

/// Vertex limit of the exact backend (its tables have `2^n` entries).
pub const EXACT_CAP: usize = 22;

/// Vertex-disjoint cycles, each a cyclic vertex sequence of length >= 3.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCover {
    pub cycles: Vec<Vec<usize>>,
}

impl CycleCover {
    pub fn new(cycles: Vec<Vec<usize>>) -> Self {
        CycleCover { cycles }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Sorted vertices on the cycles.
    pub fn vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.cycles.iter().flatten().copied().collect();
        vs.sort_unstable();
        vs
    }

    /// Checks disjointness, lengths and edges; with `spanning`, also that
    /// every vertex of `g` is covered.
    pub fn validate(&self, g: &Graph, spanning: bool) -> Result<()> {
        let mut seen = vec![false; g.n()];
        for (ci, c) in self.cycles.iter().enumerate() {
            if c.len() < 3 {
                return Err(Error::InvalidArgument(format!("cycle {ci} has {} vertices", c.len())));
            }
            for (i, &v) in c.iter().enumerate() {
                let w = c[(i + 1) % c.len()];
                if v >= g.n() || seen[v] {
                    return Err(Error::InvalidArgument(format!("vertex {v} repeated or out of range")));
                }
                if w >= g.n() || !g.has_edge(v, w) {
                    return Err(Error::InvalidArgument(format!("cycle {ci} uses the non-edge {v}-{w}")));
                }
                seen[v] = true;
            }
        }
        if spanning {
            if let Some(v) = seen.iter().position(|s| !s) {
                return Err(Error::InvalidArgument(format!("vertex {v} is not covered")));
            }
        }
        Ok(())
    }

    /// Cycle edges between different parts, as `(cycle, position)` keyed by
    /// the unordered part pair. The edge at position `x` joins `c[x]` and
    /// `c[x + 1]` (cyclically).
    fn crossings(&self, q: &QuotientGraph) -> BTreeMap<(usize, usize), Vec<(usize, usize)>> {
        let mut out: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, c) in self.cycles.iter().enumerate() {
            for x in 0..c.len() {
                let (a, b) = (q.part_of(c[x]), q.part_of(c[(x + 1) % c.len()]));
                if a != b {
                    out.entry((a.min(b), a.max(b))).or_default().push((ci, x));
                }
            }
        }
        out
    }
}

/// Counts of the rewriting steps applied by [`canonicalize_with_report`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CanonicalReport {
    pub internal_merges: usize,
    pub crossing_merges: usize,
    pub reroutes: usize,
}

fn require_clique_parts(g: &Graph, q: &QuotientGraph) -> Result<()> {
    if q.num_vertices() != g.n() {
        return Err(Error::InvalidPartition("partition does not match the graph".into()));
    }
    for (i, part) in q.parts().iter().enumerate() {
        if part.iter().enumerate().any(|(a, &u)| part[..a].iter().any(|&w| !g.has_edge(u, w))) {
            return Err(Error::InvalidPartition(format!("part {i} is not a clique")));
        }
    }
    Ok(())
}

/// True if no part holds two cycles entirely inside it, and every pair of
/// parts is crossed by at most two cycle edges, all on the same cycle.
pub fn is_canonical(q: &QuotientGraph, cover: &CycleCover) -> bool {
    let mut inside = vec![0usize; q.num_parts()];
    for c in &cover.cycles {
        let p = q.part_of(c[0]);
        if c.iter().all(|&v| q.part_of(v) == p) {
            inside[p] += 1;
        }
    }
    inside.iter().all(|&k| k <= 1)
        && cover
            .crossings(q)
            .values()
            .all(|edges| edges.len() <= 2 && edges.iter().all(|e| e.0 == edges[0].0))
}

pub fn canonicalize(g: &Graph, q: &QuotientGraph, cover: &CycleCover) -> Result<CycleCover> {
    canonicalize_with_report(g, q, cover).map(|(c, _)| c)
}

/// Rewrites a cover of a graph with clique parts into a canonical one on the
/// same vertex set with no more cycles. Each step lowers the number of
/// cycles plus the number of crossing cycle edges, so the loop terminates:
/// two cycles inside one part are spliced together; two cycles crossing the
/// same part pair are spliced at their crossing edges; a cycle crossing a
/// pair three or more times has two crossing edges traversed in the same
/// direction, which a 2-opt move replaces by one edge inside each part.
pub fn canonicalize_with_report(
    g: &Graph,
    q: &QuotientGraph,
    cover: &CycleCover,
) -> Result<(CycleCover, CanonicalReport)> {
    require_clique_parts(g, q)?;
    cover.validate(g, false)?;
    let mut cycles = cover.cycles.clone();
    let mut report = CanonicalReport::default();
    loop {
        let current = CycleCover::new(cycles.clone());
        if let Some((a, b)) = two_inside_one_part(q, &cycles) {
            let second = cycles.remove(b);
            cycles[a].extend(second);
            report.internal_merges += 1;
            continue;
        }
        let crossings = current.crossings(q);
        if let Some(((i, _), (c1, x1), (c2, x2))) = crossings.iter().find_map(|(&pair, edges)| {
            edges.iter().find(|e| e.0 != edges[0].0).map(|&other| (pair, edges[0], other))
        }) {
            let first = oriented_at(q, &cycles[c1], x1, i);
            let mut second = oriented_at(q, &cycles[c2], x2, i);
            second.reverse();
            let mut merged = first;
            merged.extend(second);
            let (lo, hi) = (c1.min(c2), c1.max(c2));
            cycles.remove(hi);
            cycles[lo] = merged;
            report.crossing_merges += 1;
            continue;
        }
        if let Some((&(i, _), edges)) = crossings.iter().find(|(_, e)| e.len() >= 3) {
            let ci = edges[0].0;
            let c = &cycles[ci];
            let m = c.len();
            let forward: Vec<usize> = edges.iter().filter(|e| q.part_of(c[e.1]) == i).map(|e| e.1).collect();
            let backward: Vec<usize> = edges.iter().filter(|e| q.part_of(c[e.1]) != i).map(|e| e.1).collect();
            let same = if forward.len() >= 2 { forward } else { backward };
            let (x, y) = (same[0], same[1]);
            let mut next = c[..=x].to_vec();
            next.extend(c[x + 1..=y].iter().rev());
            next.extend_from_slice(&c[y + 1..m]);
            cycles[ci] = next;
            report.reroutes += 1;
            continue;
        }
        let out = CycleCover::new(cycles);
        debug_assert!(is_canonical(q, &out));
        debug_assert!(out.validate(g, false).is_ok());
        return Ok((out, report));
    }
}

fn two_inside_one_part(q: &QuotientGraph, cycles: &[Vec<usize>]) -> Option<(usize, usize)> {
    let mut first_inside: Vec<Option<usize>> = vec![None; q.num_parts()];
    for (ci, c) in cycles.iter().enumerate() {
        let p = q.part_of(c[0]);
        if c.iter().all(|&v| q.part_of(v) == p) {
            match first_inside[p] {
                Some(a) => return Some((a, ci)),
                None => first_inside[p] = Some(ci),
            }
        }
    }
    None
}

/// Rotation of `c` whose closing edge is the crossing edge at position `x`,
/// starting in part `start_part`.
fn oriented_at(q: &QuotientGraph, c: &[usize], x: usize, start_part: usize) -> Vec<usize> {
    let m = c.len();
    // Start right after the edge, so the edge closes the sequence.
    let mut rot: Vec<usize> = (0..m).map(|k| c[(x + 1 + k) % m]).collect();
    if q.part_of(rot[0]) != start_part {
        rot.reverse();
    }
    rot
}

/// Vertices of part `part` incident to a cycle edge leaving the part.
pub fn boundary_vertices(cover: &CycleCover, q: &QuotientGraph, part: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for c in &cover.cycles {
        let m = c.len();
        for x in 0..m {
            let v = c[x];
            if q.part_of(v) == part
                && (q.part_of(c[(x + 1) % m]) != part || q.part_of(c[(x + m - 1) % m]) != part)
            {
                out.push(v);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Matching data for one adjacent part pair `(i, j)` with `i < j`; edges
/// are stored as `(vertex of i, vertex of j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairKernel {
    pub parts: (usize, usize),
    /// Greedy maximal matching between the two parts.
    pub matching: Vec<(usize, usize)>,
    /// Its first `min(6 delta, |matching|)` edges.
    pub truncated: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelSets {
    pub delta: usize,
    pub pairs: Vec<PairKernel>,
    /// Kept vertices of every part, sorted.
    pub kept: Vec<Vec<usize>>,
}

/// Summary written by the CLI's kernel dump.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelDump {
    pub delta: usize,
    pub kept: Vec<Vec<usize>>,
    pub h_vertices: usize,
    pub g_vertices: usize,
    pub compression_ratio: f64,
}

impl KernelSets {
    pub fn total(&self) -> usize {
        self.kept.iter().map(Vec::len).sum()
    }

    pub fn dump(&self, g_vertices: usize) -> KernelDump {
        let h = self.total();
        KernelDump {
            delta: self.delta,
            kept: self.kept.clone(),
            h_vertices: h,
            g_vertices,
            compression_ratio: if g_vertices == 0 { 1.0 } else { h as f64 / g_vertices as f64 },
        }
    }
}

/// Builds the kept sets. For every adjacent pair a greedy maximal matching is
/// truncated to `6 delta` edges and its endpoints are kept. If the matching
/// is smaller than `6 delta`, every matched vertex also keeps up to
/// `6 delta - 1` of its neighbours on the other side. Each part is finally
/// padded with up to `4 delta + 3` more vertices. Ties go to the lowest
/// vertex index.
pub fn build_kernel(g: &Graph, q: &QuotientGraph) -> Result<KernelSets> {
    require_clique_parts(g, q)?;
    let delta = q.delta();
    let limit = 6 * delta;
    let mut keep = vec![false; g.n()];
    let mut pairs = Vec::new();
    for (i, j) in q.quotient_edges() {
        let mut used = HashSet::new();
        let mut matching = Vec::new();
        for &u in q.part(i) {
            if let Some(&v) = g.neighbors(u).iter().find(|&&v| q.part_of(v) == j && !used.contains(&v)) {
                used.insert(v);
                matching.push((u, v));
            }
        }
        let truncated: Vec<(usize, usize)> = matching.iter().copied().take(limit).collect();
        for &(u, v) in &truncated {
            keep[u] = true;
            keep[v] = true;
        }
        if matching.len() < limit {
            for &(u, v) in &truncated {
                for (x, other) in [(u, j), (v, i)] {
                    let nbrs = g.neighbors(x).iter().filter(|&&w| q.part_of(w) == other);
                    for &w in nbrs.take(limit - 1) {
                        keep[w] = true;
                    }
                }
            }
        }
        pairs.push(PairKernel { parts: (i, j), matching, truncated });
    }
    let kept = q
        .parts()
        .iter()
        .map(|part| {
            let mut pad = 4 * delta + 3;
            let mut out: Vec<usize> = Vec::new();
            for &v in part {
                if keep[v] {
                    out.push(v);
                } else if pad > 0 {
                    pad -= 1;
                    out.push(v);
                }
            }
            out
        })
        .collect();
    Ok(KernelSets { delta, pairs, kept })
}

/// The compressed graph `H` induced by the kept vertices, numbered part by
/// part, with its clique partition.
#[derive(Clone, Debug, PartialEq)]
pub struct Compressed {
    pub graph: Graph,
    /// Original vertex of every vertex of `H`.
    pub vertices: Vec<usize>,
    pub quotient: QuotientGraph,
}

pub fn compress(g: &Graph, q: &QuotientGraph, kernel: &KernelSets) -> Result<Compressed> {
    if kernel.kept.len() != q.num_parts() {
        return Err(Error::InvalidArgument("kernel does not match the partition".into()));
    }
    let vertices: Vec<usize> = kernel.kept.iter().flatten().copied().collect();
    let graph = g.induced(&vertices);
    let mut next = 0;
    let cliques = kernel
        .kept
        .iter()
        .map(|k| {
            let ids: Vec<usize> = (next..next + k.len()).collect();
            next += k.len();
            vec![ids]
        })
        .collect();
    let quotient = QuotientGraph::from_cliques(&graph, cliques)?;
    Ok(Compressed { graph, vertices, quotient })
}

/// Unweighted decomposition of `H`: the weighted decomposition of the
/// quotient with every part replaced by a path over its kept vertices.
pub fn build_compressed_treedepth(q: &QuotientGraph, kernel: &KernelSets) -> Result<TreedepthDecomposition> {
    let td = build_weighted_treedepth(q);
    let sizes: Vec<usize> = kernel.kept.iter().map(Vec::len).collect();
    build_unweighted_treedepth(&td, &sizes)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Subset dynamic program on `H`; exponential space.
    #[default]
    Exact,
    /// Polynomial-space counting over a decomposition of `H`; not built.
    TreedepthCnc,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CycleCoverOutcome {
    pub answer: bool,
    /// A cover of `G` with at most `k` cycles, lifted from `H`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<CycleCover>,
    pub g_vertices: usize,
    pub h_vertices: usize,
    /// True when the backend used exponential space.
    pub exponential_space: bool,
    pub stats: SolverStats,
}

/// Does `g` have a cycle cover with at most `k` cycles? Decided on the
/// compressed graph.
pub fn solve_cycle_cover(g: &Graph, q: &QuotientGraph, k: usize, backend: Backend) -> Result<CycleCoverOutcome> {
    if k == 0 {
        return Err(Error::InvalidArgument("cycle budget must be at least 1".into()));
    }
    if backend == Backend::TreedepthCnc {
        return Err(Error::Unsupported("the treedepth-cnc cycle cover backend is not built".into()));
    }
    let kernel = build_kernel(g, q)?;
    let h = compress(g, q, &kernel)?;
    let mut stats = SolverStats::default();
    let found = exact_cycle_cover(&h.graph, k, &mut stats)?;
    let cover = found.as_ref().and_then(|c| lift(g, q, &kernel, &h, c));
    Ok(CycleCoverOutcome {
        answer: found.is_some(),
        cover,
        g_vertices: g.n(),
        h_vertices: h.graph.n(),
        exponential_space: true,
        stats,
    })
}

/// Carries a cover of `H` back to `G`: canonicalize it, then insert the
/// dropped vertices of each part next to an edge the cover uses inside the
/// kept part.
fn lift(g: &Graph, q: &QuotientGraph, kernel: &KernelSets, h: &Compressed, cover: &CycleCover) -> Option<CycleCover> {
    let canonical = canonicalize(&h.graph, &h.quotient, cover).ok()?;
    let mut cycles: Vec<Vec<usize>> =
        canonical.cycles.iter().map(|c| c.iter().map(|&v| h.vertices[v]).collect()).collect();
    for (i, part) in q.parts().iter().enumerate() {
        let dropped: Vec<usize> = part.iter().copied().filter(|v| kernel.kept[i].binary_search(v).is_err()).collect();
        if dropped.is_empty() {
            continue;
        }
        let spot = cycles.iter().enumerate().find_map(|(ci, c)| {
            (0..c.len()).find(|&x| q.part_of(c[x]) == i && q.part_of(c[(x + 1) % c.len()]) == i).map(|x| (ci, x))
        })?;
        let (ci, x) = spot;
        let tail = cycles[ci].split_off(x + 1);
        cycles[ci].extend(dropped);
        cycles[ci].extend(tail);
    }
    let out = CycleCover::new(cycles);
    out.validate(g, true).ok()?;
    Some(out)
}

pub fn hamiltonian_cycle(g: &Graph, q: &QuotientGraph, backend: Backend) -> Result<CycleCoverOutcome> {
    if g.n() < 3 {
        if backend == Backend::TreedepthCnc {
            return Err(Error::Unsupported("the treedepth-cnc cycle cover backend is not built".into()));
        }
        return Ok(CycleCoverOutcome { g_vertices: g.n(), h_vertices: g.n(), exponential_space: true, ..Default::default() });
    }
    solve_cycle_cover(g, q, 1, backend)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PathOutcome {
    pub answer: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<usize>>,
    pub exponential_space: bool,
    pub stats: SolverStats,
}

/// Hamiltonian path via a Hamiltonian cycle in `g` plus a universal vertex,
/// which becomes a new singleton part.
pub fn hamiltonian_path(g: &Graph, q: &QuotientGraph, backend: Backend) -> Result<PathOutcome> {
    let n = g.n();
    if n <= 2 {
        if backend == Backend::TreedepthCnc {
            return Err(Error::Unsupported("the treedepth-cnc cycle cover backend is not built".into()));
        }
        let answer = n < 2 || g.has_edge(0, 1);
        return Ok(PathOutcome {
            answer,
            path: answer.then(|| (0..n).collect()),
            exponential_space: false,
            stats: SolverStats::default(),
        });
    }
    let augmented = g.with_universal_vertex();
    let aq = q.with_universal_part(&augmented)?;
    let out = hamiltonian_cycle(&augmented, &aq, backend)?;
    let path = out.cover.as_ref().map(|c| {
        let cycle = &c.cycles[0];
        let at = cycle.iter().position(|&v| v == n).expect("universal vertex is covered");
        (1..cycle.len()).map(|k| cycle[(at + k) % cycle.len()]).collect()
    });
    Ok(PathOutcome { answer: out.answer, path, exponential_space: out.exponential_space, stats: out.stats })
}

/// Exact search for a cover with at most `k` cycles: a Held-Karp table of
/// Hamiltonian paths starting at the lowest vertex of every subset, then a
/// search that peels off one cycle through the lowest uncovered vertex at a
/// time.
pub fn exact_cycle_cover(g: &Graph, k: usize, stats: &mut SolverStats) -> Result<Option<CycleCover>> {
    let n = g.n();
    if n > EXACT_CAP {
        return Err(Error::TooLarge(format!("exact cycle cover backend limited to {EXACT_CAP} vertices, got {n}")));
    }
    if n == 0 {
        return Ok(Some(CycleCover::default()));
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect();
    let reach = path_table(&adj);
    stats.peak_states = stats.peak_states.max(reach.len());
    let mut failed = HashSet::new();
    let full = (1u32 << n) - 1;
    let Some(sets) = peel(&adj, &reach, full, k, &mut failed, stats) else { return Ok(None) };
    let cycles = sets.into_iter().map(|t| cycle_order(&adj, &reach, t)).collect();
    Ok(Some(CycleCover::new(cycles)))
}

/// `reach[S]`: endpoints of Hamiltonian paths of `G[S]` from the lowest
/// vertex of `S`.
fn path_table(adj: &[u32]) -> Vec<u32> {
    let n = adj.len();
    let mut reach = vec![0u32; 1 << n];
    for v in 0..n {
        reach[1 << v] = 1 << v;
    }
    for s in 1u32..(1u32 << n) {
        let ends = reach[s as usize];
        if ends == 0 {
            continue;
        }
        let above_low = !((s & s.wrapping_neg()) | ((s & s.wrapping_neg()) - 1));
        let mut e = ends;
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut ext = adj[v] & !s & above_low;
            while ext != 0 {
                let w = ext.trailing_zeros();
                ext &= ext - 1;
                reach[(s | 1 << w) as usize] |= 1 << w;
            }
        }
    }
    reach
}

fn closes(adj: &[u32], reach: &[u32], t: u32) -> bool {
    t.count_ones() >= 3 && reach[t as usize] & adj[t.trailing_zeros() as usize] != 0
}

fn peel(
    adj: &[u32],
    reach: &[u32],
    s: u32,
    k: usize,
    failed: &mut HashSet<(u32, usize)>,
    stats: &mut SolverStats,
) -> Option<Vec<u32>> {
    stats.calls += 1;
    if s == 0 {
        return Some(Vec::new());
    }
    if k == 0 || failed.contains(&(s, k)) {
        return None;
    }
    if k == 1 {
        return closes(adj, reach, s).then(|| vec![s]);
    }
    let low = s & s.wrapping_neg();
    let rest = s & !low;
    // Walk the submasks of `rest`, largest first.
    let mut sub = rest;
    loop {
        let t = sub | low;
        if closes(adj, reach, t) {
            if let Some(mut more) = peel(adj, reach, s & !t, k - 1, failed, stats) {
                more.push(t);
                return Some(more);
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    failed.insert((s, k));
    None
}

fn cycle_order(adj: &[u32], reach: &[u32], t: u32) -> Vec<usize> {
    let low = t.trailing_zeros() as usize;
    let mut cur = (reach[t as usize] & adj[low]).trailing_zeros() as usize;
    let mut set = t;
    let mut rev = vec![cur];
    while set.count_ones() > 1 {
        set &= !(1 << cur);
        cur = (reach[set as usize] & adj[cur]).trailing_zeros() as usize;
        rev.push(cur);
    }
    rev.reverse();
    rev
}
