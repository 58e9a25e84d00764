use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::GeometricInstance;
use crate::graph::Graph;
use crate::{Error, Result};

/// A partition of the vertex set into connected parts, each covered by a few
/// cliques, together with the quotient graph whose vertices are the parts.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientGraph {
    parts: Vec<Vec<usize>>,
    cliques: Vec<Vec<Vec<usize>>>,
    part_of: Vec<usize>,
    adj: Vec<Vec<usize>>,
    kappa: usize,
    delta: usize,
}

/// JSON view of a partition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionExport {
    pub parts: Vec<Vec<usize>>,
    pub quotient_edges: Vec<(usize, usize)>,
    pub kappa: usize,
    pub delta: usize,
    pub weights: Vec<f64>,
}

impl QuotientGraph {
    /// Builds and validates a partition from its clique covers: cliques must
    /// be disjoint cliques of `g` covering every vertex, and every part must
    /// induce a connected subgraph.
    pub fn from_cliques(g: &Graph, cliques: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let n = g.n();
        let mut part_of = vec![usize::MAX; n];
        let mut parts = Vec::with_capacity(cliques.len());
        for (i, cover) in cliques.iter().enumerate() {
            if cover.is_empty() || cover.iter().any(|c| c.is_empty()) {
                return Err(Error::InvalidPartition(format!("part {i} has an empty clique")));
            }
            let mut part = Vec::new();
            for clique in cover {
                for (a, &u) in clique.iter().enumerate() {
                    if u >= n {
                        return Err(Error::InvalidPartition(format!("vertex {u} out of range")));
                    }
                    if part_of[u] != usize::MAX {
                        return Err(Error::InvalidPartition(format!("vertex {u} appears twice")));
                    }
                    part_of[u] = i;
                    if clique[..a].iter().any(|&w| !g.has_edge(u, w)) {
                        return Err(Error::InvalidPartition(format!("part {i} holds a non-clique")));
                    }
                    part.push(u);
                }
            }
            part.sort_unstable();
            parts.push(part);
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidPartition(format!("vertex {v} is not covered")));
        }
        let mut keep = vec![false; n];
        for (i, part) in parts.iter().enumerate() {
            for &v in part {
                keep[v] = true;
            }
            if g.components_within(&keep).len() != 1 {
                return Err(Error::InvalidPartition(format!("part {i} is not connected")));
            }
            for &v in part {
                keep[v] = false;
            }
        }
        let mut adj = vec![Vec::new(); parts.len()];
        for (u, v) in g.edges() {
            let (a, b) = (part_of[u], part_of[v]);
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let kappa = cliques.iter().map(Vec::len).max().unwrap_or(0);
        let delta = adj.iter().map(Vec::len).max().unwrap_or(0);
        Ok(QuotientGraph { parts, cliques, part_of, adj, kappa, delta })
    }

    /// Every vertex its own part.
    pub fn singletons(g: &Graph) -> Self {
        Self::from_cliques(g, (0..g.n()).map(|v| vec![vec![v]]).collect()).expect("singletons are valid")
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.part_of.len()
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &[usize] {
        &self.parts[i]
    }

    pub fn cliques(&self, i: usize) -> &[Vec<usize>] {
        &self.cliques[i]
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    /// Maximum number of cliques in a part.
    pub fn kappa(&self) -> usize {
        self.kappa
    }

    /// Maximum degree of the quotient graph.
    pub fn delta(&self) -> usize {
        self.delta
    }

    /// `log2(1 + |V_i|)`.
    pub fn weight(&self, i: usize) -> f64 {
        (1.0 + self.parts[i].len() as f64).log2()
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.num_parts()).map(|i| self.weight(i)).collect()
    }

    pub fn quotient_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&j| j > i).map(|&j| (i, j)));
        }
        out
    }

    /// Parts within quotient distance `r` of part `i`, including `i`.
    pub fn ball(&self, i: usize, r: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_parts()];
        dist[i] = 0;
        let mut frontier = vec![i];
        let mut out = vec![i];
        for d in 1..=r {
            let mut next = Vec::new();
            for &p in &frontier {
                for &q in &self.adj[p] {
                    if dist[q] == usize::MAX {
                        dist[q] = d;
                        next.push(q);
                    }
                }
            }
            out.extend(&next);
            frontier = next;
        }
        out.sort_unstable();
        out
    }

    /// Partition of `g.with_universal_vertex()`: the new vertex is a
    /// singleton part appended last.
    pub fn with_universal_part(&self, augmented: &Graph) -> Result<Self> {
        let mut cliques = self.cliques.clone();
        cliques.push(vec![vec![self.num_vertices()]]);
        Self::from_cliques(augmented, cliques)
    }

    pub fn export(&self) -> PartitionExport {
        PartitionExport {
            parts: self.parts.clone(),
            quotient_edges: self.quotient_edges(),
            kappa: self.kappa,
            delta: self.delta,
            weights: self.weights(),
        }
    }
}

fn greedy_clique_cover(g: &Graph, vertices: &[usize]) -> Vec<Vec<usize>> {
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for &v in vertices {
        match cliques.iter_mut().find(|c| c.iter().all(|&u| g.has_edge(u, v))) {
            Some(c) => c.push(v),
            None => cliques.push(vec![v]),
        }
    }
    cliques
}

/// Splits a clique cover into groups whose union is connected in `g`.
fn connected_groups(g: &Graph, cover: Vec<Vec<usize>>) -> Vec<Vec<Vec<usize>>> {
    let mut keep = vec![false; g.n()];
    for c in &cover {
        for &v in c {
            keep[v] = true;
        }
    }
    let comps = g.components_within(&keep);
    let mut comp_of = std::collections::HashMap::new();
    for (i, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of.insert(v, i);
        }
    }
    let mut groups = vec![Vec::new(); comps.len()];
    for c in cover {
        groups[comp_of[&c[0]]].push(c);
    }
    groups
}

/// Grid-based partition of a geometric instance: centers are bucketed into
/// cells of side `d / sqrt(dim)` (with `d` the smallest inner-ball diameter),
/// every nonempty cell gets a greedy clique cover, and cells are split into
/// connected components.
pub fn grid_clique_partition(inst: &GeometricInstance, g: &Graph) -> Result<QuotientGraph> {
    if g.n() != inst.len() {
        return Err(Error::InvalidArgument("graph and instance sizes differ".into()));
    }
    let dim = inst.dimension;
    let dmin = inst.objects.iter().map(|o| o.inner_diameter()).fold(f64::INFINITY, f64::min);
    let side = dmin / (dim as f64).sqrt();
    let mut cells: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (v, o) in inst.objects.iter().enumerate() {
        let key = o.center.iter().map(|&c| (c / side).floor() as i64).collect();
        cells.entry(key).or_default().push(v);
    }
    let mut cliques = Vec::new();
    for members in cells.into_values() {
        cliques.extend(connected_groups(g, greedy_clique_cover(g, &members)));
    }
    QuotientGraph::from_cliques(g, cliques)
}

/// Greedy partition for graphs without geometry. Each part starts from the
/// smallest unassigned vertex, grows a maximal clique among unassigned
/// vertices, then adds up to `kappa_target - 1` further cliques seeded at
/// unassigned neighbours of the part.
pub fn robust_clique_partition(g: &Graph, kappa_target: usize) -> Result<QuotientGraph> {
    if kappa_target == 0 {
        return Err(Error::InvalidArgument("kappa_target must be at least 1".into()));
    }
    let n = g.n();
    let mut assigned = vec![false; n];
    let grow = |seed: usize, assigned: &mut Vec<bool>| {
        let mut clique = vec![seed];
        assigned[seed] = true;
        for &w in g.neighbors(seed) {
            if !assigned[w] && clique.iter().all(|&u| g.has_edge(u, w)) {
                clique.push(w);
                assigned[w] = true;
            }
        }
        clique.sort_unstable();
        clique
    };
    let mut all = Vec::new();
    for s in 0..n {
        if assigned[s] {
            continue;
        }
        let mut cover = vec![grow(s, &mut assigned)];
        while cover.len() < kappa_target {
            let next = cover
                .iter()
                .flatten()
                .flat_map(|&u| g.neighbors(u).iter().copied())
                .filter(|&w| !assigned[w])
                .min();
            match next {
                Some(w) => cover.push(grow(w, &mut assigned)),
                None => break,
            }
        }
        all.push(cover);
    }
    QuotientGraph::from_cliques(g, all)
}
