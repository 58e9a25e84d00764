use super::separator::balanced_weighted_separator;
use super::treedepth::{DecompositionMode, TreedepthDecomposition};
use crate::geometry::QuotientGraph;
use crate::graph::Graph;
use crate::{Error, Result};

/// One separator step of the builder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitRecord {
    /// Vertices spanned by the region that was split.
    pub region_vertices: usize,
    /// Vertices in the largest component left after removing the separator.
    pub largest_component: usize,
    pub separator_parts: usize,
}

impl SplitRecord {
    pub fn is_balanced(&self) -> bool {
        3 * self.largest_component <= 2 * self.region_vertices
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BuildReport {
    pub splits: Vec<SplitRecord>,
}

/// Connected components of the quotient graph restricted to `parts`.
pub(crate) fn part_components(q: &QuotientGraph, parts: &[usize]) -> Vec<Vec<usize>> {
    let mut inside = vec![false; q.num_parts()];
    for &p in parts {
        inside[p] = true;
    }
    let mut out = Vec::new();
    for &s in parts {
        if !inside[s] {
            continue;
        }
        inside[s] = false;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(p) = stack.pop() {
            for &nb in q.neighbors(p) {
                if inside[nb] {
                    inside[nb] = false;
                    comp.push(nb);
                    stack.push(nb);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn build_weighted_treedepth(q: &QuotientGraph) -> TreedepthDecomposition {
    build_weighted_treedepth_with_report(q).0
}

/// Recursive separator decomposition: the separator parts of a connected
/// region form a path (in index order) and each component of the remainder
/// hangs below the end of that path.
pub fn build_weighted_treedepth_with_report(q: &QuotientGraph) -> (TreedepthDecomposition, BuildReport) {
    let mut spec: Vec<(usize, Option<usize>, f64)> = Vec::with_capacity(q.num_parts());
    let mut report = BuildReport::default();
    let all: Vec<usize> = (0..q.num_parts()).collect();
    let mut work: Vec<(Vec<usize>, Option<usize>)> =
        part_components(q, &all).into_iter().rev().map(|c| (c, None)).collect();
    while let Some((region, parent)) = work.pop() {
        let sep = balanced_weighted_separator(q, &region);
        let mut attach = parent;
        for &p in &sep {
            spec.push((p, attach, q.weight(p)));
            attach = Some(spec.len() - 1);
        }
        let rest: Vec<usize> = region.iter().copied().filter(|p| sep.binary_search(p).is_err()).collect();
        let comps = part_components(q, &rest);
        let size = |c: &[usize]| c.iter().map(|&p| q.part(p).len()).sum::<usize>();
        report.splits.push(SplitRecord {
            region_vertices: size(&region),
            largest_component: comps.iter().map(|c| size(c)).max().unwrap_or(0),
            separator_parts: sep.len(),
        });
        work.extend(comps.into_iter().rev().map(|c| (c, attach)));
    }
    // Node ids are creation order; labels are parts.
    let td = TreedepthDecomposition::from_parents(DecompositionMode::Weighted, &spec)
        .expect("builder produces a forest over all parts");
    (td, report)
}

/// Unit-weight decomposition of a plain graph (every vertex its own part),
/// with vertex labels.
pub fn build_treedepth_for_graph(g: &Graph) -> TreedepthDecomposition {
    let q = QuotientGraph::singletons(g);
    let td = build_weighted_treedepth(&q);
    relabel(&td, DecompositionMode::Unweighted)
}

fn relabel(td: &TreedepthDecomposition, mode: DecompositionMode) -> TreedepthDecomposition {
    let spec: Vec<_> = td.nodes().iter().map(|x| (x.label, x.parent, 1.0)).collect();
    TreedepthDecomposition::from_parents(mode, &spec).expect("relabelled forest is valid")
}

/// The expanded graph: part `i` becomes a clique on `ceil(log2(1 + |V_i|))`
/// vertices and adjacent parts are joined completely.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpandedGraph {
    pub graph: Graph,
    /// Owning part of each expanded vertex.
    pub owner: Vec<usize>,
    /// Expanded vertices of part `i` are `offsets[i]..offsets[i + 1]`.
    pub offsets: Vec<usize>,
}

pub fn expand_to_unweighted(q: &QuotientGraph) -> ExpandedGraph {
    let sizes: Vec<usize> =
        (0..q.num_parts()).map(|i| (1.0 + q.part(i).len() as f64).log2().ceil() as usize).collect();
    let mut offsets = vec![0];
    for s in &sizes {
        offsets.push(offsets.last().unwrap() + s);
    }
    let owner: Vec<usize> = sizes.iter().enumerate().flat_map(|(i, &s)| std::iter::repeat_n(i, s)).collect();
    let mut edges = Vec::new();
    for i in 0..q.num_parts() {
        let mine = offsets[i]..offsets[i + 1];
        for a in mine.clone() {
            for b in a + 1..mine.end {
                edges.push((a, b));
            }
        }
        for &j in q.neighbors(i).iter().filter(|&&j| j > i) {
            for a in mine.clone() {
                for b in offsets[j]..offsets[j + 1] {
                    edges.push((a, b));
                }
            }
        }
    }
    let graph = Graph::from_edges(owner.len(), &edges).expect("expanded edges are valid");
    ExpandedGraph { graph, owner, offsets }
}

/// Replaces node `u` (label = part `i`) of a weighted decomposition by a path
/// of `sizes[i]` unit nodes. Part `i`'s new labels are
/// `offset[i]..offset[i] + sizes[i]` with offsets the prefix sums of `sizes`.
/// Parts of size zero vanish and their children move up.
pub fn build_unweighted_treedepth(td: &TreedepthDecomposition, sizes: &[usize]) -> Result<TreedepthDecomposition> {
    if sizes.len() != td.len() {
        return Err(Error::InvalidArgument(format!(
            "{} kernel sizes for {} decomposition nodes",
            sizes.len(),
            td.len()
        )));
    }
    let mut offsets = vec![0];
    for s in sizes {
        offsets.push(offsets.last().unwrap() + s);
    }
    let total = *offsets.last().unwrap();
    let mut spec: Vec<(usize, Option<usize>, f64)> = Vec::with_capacity(total);
    // Last path node produced for each weighted node, if any survives above it.
    let mut tail_of: Vec<Option<usize>> = vec![None; td.len()];
    for u in td.preorder() {
        let node = td.node(u);
        let mut attach = node.parent.and_then(|p| tail_of[p]);
        let part = node.label;
        for k in 0..sizes[part] {
            spec.push((offsets[part] + k, attach, 1.0));
            attach = Some(spec.len() - 1);
        }
        tail_of[u] = attach;
    }
    TreedepthDecomposition::from_parents(DecompositionMode::Unweighted, &spec)
}
