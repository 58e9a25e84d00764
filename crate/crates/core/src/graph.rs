//! Simple undirected graphs on `0..n` with sorted adjacency lists.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    /// Builds a graph from an edge list; duplicate edges are merged, loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        Ok(Graph { adj, m: m / 2 })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Induced subgraph on `vertices` (in the given order); vertex `i` of the
    /// result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut adj = vec![Vec::new(); vertices.len()];
        let mut m = 0;
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                if index[w] != usize::MAX {
                    adj[i].push(index[w]);
                    m += 1;
                }
            }
            adj[i].sort_unstable();
        }
        Graph { adj, m: m / 2 }
    }

    /// Copy of the graph with one extra vertex (index `n`) adjacent to all.
    pub fn with_universal_vertex(&self) -> Graph {
        let n = self.n();
        let mut adj = self.adj.clone();
        for list in &mut adj {
            list.push(n);
        }
        adj.push((0..n).collect());
        Graph { adj, m: self.m + n }
    }

    /// Vertices within distance `r` of `v`, in BFS order.
    pub fn ball(&self, v: usize, r: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::from([v]);
        let mut out = vec![v];
        dist[v] = 0;
        while let Some(u) = queue.pop_front() {
            if dist[u] == r {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out
    }

    /// Connected components restricted to vertices with `keep[v]`, each
    /// sorted, ordered by smallest vertex.
    pub fn components_within(&self, keep: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if !keep[s] || seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if keep[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_within(&vec![true; self.n()])
    }

    /// Some shortest odd cycle, or `None` when the graph is bipartite.
    pub fn shortest_odd_cycle(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let mut best: Option<Vec<usize>> = None;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if dist[w] == dist[u] && u < w {
                        let len = 2 * dist[u] + 1;
                        if best.as_ref().is_none_or(|b| len < b.len()) {
                            if let Some(cycle) = join_paths(&parent, u, w) {
                                if cycle.len() == len {
                                    best = Some(cycle);
                                }
                            }
                        }
                    }
                }
            }
        }
        best
    }

    /// Parses the edge-list format: a header `n m` followed by `m` lines
    /// `u v` with 0-indexed endpoints.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut nums = text.split_whitespace().map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::InvalidGraph(format!("not a vertex index: {t:?}")))
        });
        let mut next = |what: &str| {
            nums.next()
                .unwrap_or_else(|| Err(Error::InvalidGraph(format!("missing {what}"))))
        };
        let n = next("vertex count")?;
        let m = next("edge count")?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            edges.push((next("edge endpoint")?, next("edge endpoint")?));
        }
        Graph::from_edges(n, &edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

fn join_paths(parent: &[usize], a: usize, b: usize) -> Option<Vec<usize>> {
    let climb = |mut v: usize| {
        let mut path = vec![v];
        while parent[v] != usize::MAX {
            v = parent[v];
            path.push(v);
        }
        path
    };
    let pa = climb(a);
    let pb = climb(b);
    // Walk both root paths back from the root until they diverge.
    let mut i = pa.len();
    let mut j = pb.len();
    while i > 1 && j > 1 && pa[i - 2] == pb[j - 2] {
        i -= 1;
        j -= 1;
    }
    let mut cycle: Vec<usize> = pa[..i].to_vec();
    cycle.extend(pb[..j - 1].iter().rev());
    let distinct: std::collections::HashSet<_> = cycle.iter().collect();
    (distinct.len() == cycle.len()).then_some(cycle)
}
