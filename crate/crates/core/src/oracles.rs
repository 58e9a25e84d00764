//! Exhaustive reference solvers and feasibility checkers for small graphs.
//! They share no code with the solvers: everything here works on adjacency
//! bitmasks and plain enumeration.

use std::collections::HashMap;

use crate::exec::Exec;
use crate::graph::Graph;
use crate::{Error, Result};

/// Size limit for subset enumeration.
pub const SUBSET_CAP: usize = 18;
/// Size limit for the cycle oracles.
pub const CYCLE_CAP: usize = 14;
/// Size limit for the treedepth oracle.
pub const TREEDEPTH_CAP: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult<T> {
    pub value: T,
    pub witness: Vec<usize>,
    /// Candidates examined.
    pub enumerated: u64,
}

fn masks(g: &Graph, cap: usize) -> Result<Vec<u32>> {
    if g.n() > cap {
        return Err(Error::TooLarge(format!("oracle limited to {cap} vertices, got {}", g.n())));
    }
    Ok((0..g.n()).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect())
}

fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Vertices of `within` reachable from the lowest vertex of `within`.
fn reach(adj: &[u32], within: u32) -> u32 {
    if within == 0 {
        return 0;
    }
    let mut seen = within & within.wrapping_neg();
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            next |= adj[v];
            f &= f - 1;
        }
        next &= within & !seen;
        seen |= next;
        frontier = next;
    }
    seen
}

fn connected(adj: &[u32], set: u32) -> bool {
    reach(adj, set) == set
}

fn components(adj: &[u32], mut set: u32) -> u32 {
    let mut count = 0;
    while set != 0 {
        set &= !reach(adj, set);
        count += 1;
    }
    count
}

fn induced_edges(adj: &[u32], set: u32) -> u32 {
    members(set).iter().map(|&v| (adj[v] & set).count_ones()).sum::<u32>() / 2
}

fn bipartite(adj: &[u32], set: u32) -> bool {
    let mut left = 0u32;
    let mut right = 0u32;
    let mut rest = set;
    while rest != 0 {
        let s = rest & rest.wrapping_neg();
        left |= s;
        let mut frontier = s;
        let mut side_left = true;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                next |= adj[v] & set;
                f &= f - 1;
            }
            let (same, other) = if side_left { (left, right) } else { (right, left) };
            if next & same != 0 {
                return false;
            }
            let fresh = next & !other;
            if side_left {
                right |= fresh;
            } else {
                left |= fresh;
            }
            frontier = fresh;
            side_left = !side_left;
        }
        rest &= !(left | right);
    }
    true
}

/// Minimum of `key(mask)` over all subsets, ties to the smallest mask.
fn best_subset<K, F>(n: usize, exec: Exec, key: F) -> (Option<(K, u32)>, u64)
where
    K: Ord + Send + Copy,
    F: Fn(u32) -> Option<K> + Sync + Send,
{
    let total: u64 = 1 << n;
    let chunks = 64.min(total) as usize;
    let per = total.div_ceil(chunks as u64);
    let results = exec.map_range(chunks, |c| {
        let lo = c as u64 * per;
        let hi = (lo + per).min(total);
        let mut best: Option<(K, u32)> = None;
        for m in lo..hi {
            let m = m as u32;
            if let Some(k) = key(m) {
                if best.is_none_or(|b| (k, m) < b) {
                    best = Some((k, m));
                }
            }
        }
        best
    });
    (results.into_iter().flatten().min(), total)
}

fn result<T>(found: Option<(T, u32)>, enumerated: u64) -> Option<OracleResult<T>> {
    found.map(|(value, m)| OracleResult { value, witness: members(m), enumerated })
}

/// Maximum-weight independent set (unit weights when `weights` is `None`).
pub fn brute_independent_set(g: &Graph, weights: Option<&[f64]>) -> Result<OracleResult<f64>> {
    brute_independent_set_with(g, weights, Exec::default())
}

pub fn brute_independent_set_with(g: &Graph, weights: Option<&[f64]>, exec: Exec) -> Result<OracleResult<f64>> {
    let adj = masks(g, SUBSET_CAP)?;
    let w: Vec<f64> = weights.map_or_else(|| vec![1.0; g.n()], <[f64]>::to_vec);
    // Keys are minimized; negate the weight through an order-preserving map.
    let (found, count) = best_subset(g.n(), exec, |m| {
        let independent = members(m).iter().all(|&v| adj[v] & m == 0);
        independent.then(|| std::cmp::Reverse(OrdF64(members(m).iter().map(|&v| w[v]).sum())))
    });
    let (key, m) = found.expect("the empty set is independent");
    Ok(OracleResult { value: key.0 .0, witness: members(m), enumerated: count })
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn balls(adj: &[u32], r: usize) -> Vec<u32> {
    (0..adj.len())
        .map(|v| {
            let mut ball = 1u32 << v;
            for _ in 0..r {
                let mut grown = ball;
                for u in members(ball) {
                    grown |= adj[u];
                }
                ball = grown;
            }
            ball
        })
        .collect()
}

/// Minimum r-dominating set.
pub fn brute_dominating_set(g: &Graph, r: usize) -> Result<OracleResult<usize>> {
    let adj = masks(g, SUBSET_CAP)?;
    let ball = balls(&adj, r);
    let (found, count) = best_subset(g.n(), Exec::default(), |m| {
        ball.iter().all(|&b| b & m != 0).then(|| m.count_ones() as usize)
    });
    Ok(result(found, count).expect("the full vertex set dominates"))
}

/// Minimum connected set containing all terminals; `None` if the terminals
/// are not in one component.
pub fn brute_steiner_tree(g: &Graph, terminals: &[usize]) -> Result<Option<OracleResult<usize>>> {
    let adj = masks(g, SUBSET_CAP)?;
    let need = terminals.iter().fold(0u32, |m, &t| m | 1 << t);
    let (found, count) = best_subset(g.n(), Exec::default(), |m| {
        (m & need == need && connected(&adj, m)).then(|| m.count_ones() as usize)
    });
    Ok(result(found, count))
}

/// Minimum connected vertex cover; `None` if none exists.
pub fn brute_connected_vertex_cover(g: &Graph) -> Result<Option<OracleResult<usize>>> {
    let adj = masks(g, SUBSET_CAP)?;
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let (found, count) = best_subset(g.n(), Exec::default(), |m| {
        let covers = edges.iter().all(|&(u, v)| m >> u & 1 == 1 || m >> v & 1 == 1);
        (covers && connected(&adj, m)).then(|| m.count_ones() as usize)
    });
    Ok(result(found, count))
}

/// Minimum feedback vertex set.
pub fn brute_feedback_vertex_set(g: &Graph) -> Result<OracleResult<usize>> {
    let adj = masks(g, SUBSET_CAP)?;
    let full: u32 = if g.n() == 32 { u32::MAX } else { (1 << g.n()) - 1 };
    let (found, count) = best_subset(g.n(), Exec::default(), |m| {
        let rest = full & !m;
        (induced_edges(&adj, rest) + components(&adj, rest) == rest.count_ones()).then(|| m.count_ones() as usize)
    });
    Ok(result(found, count).expect("removing everything leaves a forest"))
}

/// Minimum odd cycle transversal, optionally required to induce a connected
/// subgraph (the empty set counts as connected); `None` if none exists.
pub fn brute_odd_cycle_transversal(g: &Graph, connected_only: bool) -> Result<Option<OracleResult<usize>>> {
    let adj = masks(g, SUBSET_CAP)?;
    let full: u32 = if g.n() == 32 { u32::MAX } else { (1 << g.n()) - 1 };
    let (found, count) = best_subset(g.n(), Exec::default(), |m| {
        let ok = bipartite(&adj, full & !m) && (!connected_only || connected(&adj, m));
        ok.then(|| m.count_ones() as usize)
    });
    Ok(result(found, count))
}

pub fn check_independent_set(g: &Graph, set: &[usize]) -> bool {
    set.iter().all(|&u| set.iter().all(|&v| !g.has_edge(u, v)))
}

pub fn check_dominating_set(g: &Graph, r: usize, set: &[usize]) -> bool {
    let Ok(adj) = masks(g, 32) else { return false };
    let chosen = set.iter().fold(0u32, |m, &v| m | 1 << v);
    balls(&adj, r).iter().all(|&b| b & chosen != 0)
}

pub fn check_connected(g: &Graph, set: &[usize]) -> bool {
    let Ok(adj) = masks(g, 32) else { return false };
    connected(&adj, set.iter().fold(0u32, |m, &v| m | 1 << v))
}

pub fn check_vertex_cover(g: &Graph, set: &[usize]) -> bool {
    g.edges().all(|(u, v)| set.contains(&u) || set.contains(&v))
}

pub fn check_forest_after_removal(g: &Graph, set: &[usize]) -> bool {
    let Ok(adj) = masks(g, 32) else { return false };
    let full: u32 = if g.n() == 32 { u32::MAX } else { (1 << g.n()) - 1 };
    let rest = full & !set.iter().fold(0u32, |m, &v| m | 1 << v);
    induced_edges(&adj, rest) + components(&adj, rest) == rest.count_ones()
}

pub fn check_bipartite_after_removal(g: &Graph, set: &[usize]) -> bool {
    let Ok(adj) = masks(g, 32) else { return false };
    let full: u32 = if g.n() == 32 { u32::MAX } else { (1 << g.n()) - 1 };
    bipartite(&adj, full & !set.iter().fold(0u32, |m, &v| m | 1 << v))
}

/// Vertex-disjoint simple cycles of length at least 3 covering every vertex.
pub fn check_cycle_cover(g: &Graph, cycles: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; g.n()];
    for c in cycles {
        if c.len() < 3 {
            return false;
        }
        for (i, &v) in c.iter().enumerate() {
            if v >= g.n() || seen[v] || !g.has_edge(v, c[(i + 1) % c.len()]) {
                return false;
            }
            seen[v] = true;
        }
    }
    seen.into_iter().all(|s| s)
}

/// Cycles through the lowest vertex of `within`, as vertex masks with one
/// vertex order each, found by depth-first search over (end, visited) states.
fn cycles_through_lowest(adj: &[u32], within: u32) -> Vec<(u32, Vec<usize>)> {
    let s = within.trailing_zeros() as usize;
    let mut found: HashMap<u32, Vec<usize>> = HashMap::new();
    let mut seen: std::collections::HashSet<(usize, u32)> = std::collections::HashSet::new();
    let mut path = vec![s];
    fn dfs(
        adj: &[u32],
        within: u32,
        s: usize,
        path: &mut Vec<usize>,
        visited: u32,
        seen: &mut std::collections::HashSet<(usize, u32)>,
        found: &mut HashMap<u32, Vec<usize>>,
    ) {
        let cur = *path.last().unwrap();
        if !seen.insert((cur, visited)) {
            return;
        }
        if path.len() >= 3 && adj[cur] >> s & 1 == 1 {
            found.entry(visited).or_insert_with(|| path.clone());
        }
        let mut next = adj[cur] & within & !visited;
        while next != 0 {
            let w = next.trailing_zeros() as usize;
            next &= next - 1;
            path.push(w);
            dfs(adj, within, s, path, visited | 1 << w, seen, found);
            path.pop();
        }
    }
    dfs(adj, within, s, &mut path, 1 << s, &mut seen, &mut found);
    let mut out: Vec<(u32, Vec<usize>)> = found.into_iter().collect();
    out.sort_by_key(|(m, _)| *m);
    out
}

fn min_cover(adj: &[u32], within: u32, memo: &mut HashMap<u32, Option<(usize, u32)>>) -> Option<usize> {
    if within == 0 {
        return Some(0);
    }
    if let Some(r) = memo.get(&within) {
        return r.map(|(c, _)| c);
    }
    let mut best: Option<(usize, u32)> = None;
    for (cyc, _) in cycles_through_lowest(adj, within) {
        if let Some(c) = min_cover(adj, within & !cyc, memo) {
            if best.is_none_or(|(b, _)| c + 1 < b) {
                best = Some((c + 1, cyc));
            }
        }
    }
    memo.insert(within, best);
    best.map(|(c, _)| c)
}

/// Cycle cover with the fewest cycles, or `None` if the graph has none.
pub fn brute_min_cycle_cover(g: &Graph) -> Result<Option<Vec<Vec<usize>>>> {
    let adj = masks(g, CYCLE_CAP)?;
    let full: u32 = (1u32 << g.n()) - 1;
    let mut memo = HashMap::new();
    if min_cover(&adj, full, &mut memo).is_none() {
        return Ok(None);
    }
    let mut cycles = Vec::new();
    let mut rest = full;
    while rest != 0 {
        let (_, cyc) = memo[&rest].expect("coverable remainder");
        let order = cycles_through_lowest(&adj, rest)
            .into_iter()
            .find(|(m, _)| *m == cyc)
            .map(|(_, o)| o)
            .expect("cycle was enumerated");
        cycles.push(order);
        rest &= !cyc;
    }
    Ok(Some(cycles))
}

/// A cycle cover with at most `k` cycles, if one exists.
pub fn brute_cycle_cover(g: &Graph, k: usize) -> Result<Option<Vec<Vec<usize>>>> {
    Ok(brute_min_cycle_cover(g)?.filter(|c| c.len() <= k))
}

pub fn brute_hamiltonian_cycle(g: &Graph) -> Result<Option<Vec<usize>>> {
    let adj = masks(g, CYCLE_CAP)?;
    if g.n() < 3 {
        return Ok(None);
    }
    let full: u32 = (1u32 << g.n()) - 1;
    Ok(cycles_through_lowest(&adj, full).into_iter().find(|(m, _)| *m == full).map(|(_, o)| o))
}

pub fn brute_hamiltonian_path(g: &Graph) -> Result<Option<Vec<usize>>> {
    let adj = masks(g, CYCLE_CAP)?;
    let n = g.n();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let full: u32 = (1u32 << n) - 1;
    let mut dead = std::collections::HashSet::new();
    fn extend(adj: &[u32], full: u32, path: &mut Vec<usize>, visited: u32, dead: &mut std::collections::HashSet<(usize, u32)>) -> bool {
        if visited == full {
            return true;
        }
        let cur = *path.last().unwrap();
        if dead.contains(&(cur, visited)) {
            return false;
        }
        let mut next = adj[cur] & !visited;
        while next != 0 {
            let w = next.trailing_zeros() as usize;
            next &= next - 1;
            path.push(w);
            if extend(adj, full, path, visited | 1 << w, dead) {
                return true;
            }
            path.pop();
        }
        dead.insert((cur, visited));
        false
    }
    for s in 0..n {
        let mut path = vec![s];
        if extend(&adj, full, &mut path, 1 << s, &mut dead) {
            return Ok(Some(path));
        }
    }
    Ok(None)
}

/// Exact treedepth by memoized recursion over vertex subsets.
pub fn brute_treedepth(g: &Graph) -> Result<usize> {
    let adj = masks(g, TREEDEPTH_CAP)?;
    let full: u32 = (1u32 << g.n()) - 1;
    let mut memo = vec![usize::MAX; 1 << g.n()];
    fn td(adj: &[u32], set: u32, memo: &mut [usize]) -> usize {
        if set == 0 {
            return 0;
        }
        if memo[set as usize] != usize::MAX {
            return memo[set as usize];
        }
        let comp = reach(adj, set);
        let value = if comp != set {
            td(adj, comp, memo).max(td(adj, set & !comp, memo))
        } else {
            1 + members(set).into_iter().map(|v| td(adj, set & !(1 << v), memo)).min().unwrap()
        };
        memo[set as usize] = value;
        value
    }
    Ok(td(&adj, full, &mut memo))
}
