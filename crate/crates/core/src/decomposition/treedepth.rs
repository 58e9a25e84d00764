use serde::{Deserialize, Serialize};

use crate::geometry::QuotientGraph;
use crate::graph::Graph;
use crate::{Error, Result};

/// Whether node labels refer to parts of a partition or to plain vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompositionMode {
    Weighted,
    Unweighted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TdNode {
    pub label: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub weight: f64,
}

/// Rooted forest whose nodes are in bijection with parts (weighted mode) or
/// vertices (unweighted mode), such that adjacent labels are in
/// ancestor/descendant relation.
#[derive(Clone, Debug, PartialEq)]
pub struct TreedepthDecomposition {
    mode: DecompositionMode,
    nodes: Vec<TdNode>,
    roots: Vec<usize>,
    node_of: Vec<usize>,
    enter: Vec<usize>,
    exit: Vec<usize>,
    depth: usize,
    weighted_depth: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionExport {
    pub mode: DecompositionMode,
    pub nodes: Vec<TdNode>,
    pub roots: Vec<usize>,
    pub depth: usize,
    pub weighted_depth: f64,
}

impl TreedepthDecomposition {
    /// Assembles a forest from `(label, parent, weight)` triples; node ids are
    /// positions in `entries`. Labels must be a permutation of `0..entries.len()`.
    pub fn from_parents(mode: DecompositionMode, entries: &[(usize, Option<usize>, f64)]) -> Result<Self> {
        let n = entries.len();
        let mut nodes: Vec<TdNode> = entries
            .iter()
            .map(|&(label, parent, weight)| TdNode { label, parent, children: Vec::new(), weight })
            .collect();
        let mut roots = Vec::new();
        let mut node_of = vec![usize::MAX; n];
        for (u, &(label, parent, _)) in entries.iter().enumerate() {
            if label >= n || node_of[label] != usize::MAX {
                return Err(Error::InvalidDecomposition(format!("label {label} is out of range or repeated")));
            }
            node_of[label] = u;
            match parent {
                Some(p) if p >= n || p == u => {
                    return Err(Error::InvalidDecomposition(format!("node {u} has bad parent {p}")))
                }
                Some(p) => nodes[p].children.push(u),
                None => roots.push(u),
            }
        }
        let mut td = TreedepthDecomposition {
            mode,
            nodes,
            roots,
            node_of,
            enter: vec![usize::MAX; n],
            exit: vec![0; n],
            depth: 0,
            weighted_depth: 0.0,
        };
        td.index()?;
        Ok(td)
    }

    fn index(&mut self) -> Result<()> {
        let mut clock = 0;
        let mut stack: Vec<(usize, usize, f64, bool)> =
            self.roots.iter().rev().map(|&r| (r, 1, self.nodes[r].weight, false)).collect();
        while let Some((u, d, w, done)) = stack.pop() {
            if done {
                self.exit[u] = clock;
                continue;
            }
            if self.enter[u] != usize::MAX {
                return Err(Error::InvalidDecomposition("parent pointers contain a cycle".into()));
            }
            self.enter[u] = clock;
            clock += 1;
            self.depth = self.depth.max(d);
            self.weighted_depth = self.weighted_depth.max(w);
            stack.push((u, d, w, true));
            for &c in self.nodes[u].children.iter().rev() {
                stack.push((c, d + 1, w + self.nodes[c].weight, false));
            }
        }
        if clock != self.nodes.len() {
            return Err(Error::InvalidDecomposition("parent pointers contain a cycle".into()));
        }
        Ok(())
    }

    pub fn mode(&self) -> DecompositionMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[TdNode] {
        &self.nodes
    }

    pub fn node(&self, u: usize) -> &TdNode {
        &self.nodes[u]
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn node_of_label(&self, label: usize) -> usize {
        self.node_of[label]
    }

    /// Number of nodes on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Largest total weight of a root-to-leaf path.
    pub fn weighted_depth(&self) -> f64 {
        self.weighted_depth
    }

    /// True if `a` is an ancestor of `b` or equal to it.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        self.enter[a] <= self.enter[b] && self.exit[b] <= self.exit[a]
    }

    /// Nodes from `u` up to its root, starting with `u`.
    pub fn ancestors(&self, u: usize) -> Vec<usize> {
        let mut out = vec![u];
        let mut cur = u;
        while let Some(p) = self.nodes[cur].parent {
            out.push(p);
            cur = p;
        }
        out
    }

    /// Nodes of the subtree rooted at `u`, in preorder.
    pub fn subtree(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend(self.nodes[x].children.iter().rev());
        }
        out
    }

    /// Nodes in preorder over the whole forest.
    pub fn preorder(&self) -> Vec<usize> {
        self.roots.iter().flat_map(|&r| self.subtree(r)).collect()
    }

    /// Adds a new root labelled `len()` above all current roots.
    pub fn with_new_root(&self, weight: f64) -> Result<Self> {
        let n = self.nodes.len();
        let mut entries: Vec<(usize, Option<usize>, f64)> =
            self.nodes.iter().map(|x| (x.label, Some(x.parent.unwrap_or(n)), x.weight)).collect();
        entries.push((n, None, weight));
        Self::from_parents(self.mode, &entries)
    }

    pub fn export(&self) -> DecompositionExport {
        DecompositionExport {
            mode: self.mode,
            nodes: self.nodes.clone(),
            roots: self.roots.clone(),
            depth: self.depth,
            weighted_depth: self.weighted_depth,
        }
    }

    pub fn from_export(e: &DecompositionExport) -> Result<Self> {
        let entries: Vec<_> = e.nodes.iter().map(|x| (x.label, x.parent, x.weight)).collect();
        let td = Self::from_parents(e.mode, &entries)?;
        if td.depth != e.depth || (td.weighted_depth - e.weighted_depth).abs() > 1e-6 {
            return Err(Error::InvalidDecomposition("stored depths do not match the forest".into()));
        }
        Ok(td)
    }

    fn check_edges(&self, edges: impl Iterator<Item = (usize, usize)>) -> Result<()> {
        for (a, b) in edges {
            let (x, y) = (self.node_of[a], self.node_of[b]);
            if !self.is_ancestor(x, y) && !self.is_ancestor(y, x) {
                return Err(Error::InvalidDecomposition(format!(
                    "labels {a} and {b} are adjacent but not in ancestor relation"
                )));
            }
        }
        Ok(())
    }

    fn recheck_depths(&self) -> Result<()> {
        let mut fresh = self.clone();
        fresh.enter.fill(usize::MAX);
        fresh.depth = 0;
        fresh.weighted_depth = 0.0;
        fresh.index()?;
        if fresh.depth != self.depth || (fresh.weighted_depth - self.weighted_depth).abs() > 1e-9 {
            return Err(Error::InvalidDecomposition("cached depths are stale".into()));
        }
        Ok(())
    }
}

/// Checks a weighted decomposition against a partition: labels are exactly
/// the parts, quotient edges respect ancestry, node weights are part weights,
/// and the cached depths are correct.
pub fn verify_decomposition(td: &TreedepthDecomposition, q: &QuotientGraph) -> Result<()> {
    if td.mode != DecompositionMode::Weighted || td.len() != q.num_parts() {
        return Err(Error::InvalidDecomposition("node set is not the part set".into()));
    }
    for node in &td.nodes {
        if (node.weight - q.weight(node.label)).abs() > 1e-9 {
            return Err(Error::InvalidDecomposition(format!("wrong weight on part {}", node.label)));
        }
    }
    td.check_edges(q.quotient_edges().into_iter())?;
    td.recheck_depths()
}

/// Checks a vertex-labelled decomposition against a graph.
pub fn verify_against_graph(td: &TreedepthDecomposition, g: &Graph) -> Result<()> {
    if td.len() != g.n() {
        return Err(Error::InvalidDecomposition("node set is not the vertex set".into()));
    }
    td.check_edges(g.edges())?;
    td.recheck_depths()
}
