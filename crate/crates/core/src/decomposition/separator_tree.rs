use super::builder::part_components;
use super::separator::balanced_separator_with_weights;
use crate::geometry::QuotientGraph;

#[derive(Clone, Debug, PartialEq)]
pub struct SeparatorNode {
    /// Separator parts chosen for this region.
    pub parts: Vec<usize>,
    pub level: usize,
    pub parent: Option<usize>,
    /// At most two children, one per side.
    pub children: Vec<usize>,
    /// Parts of the region handled by this subtree.
    pub region: Vec<usize>,
    /// Vertices of the two sides left after removing the separator.
    pub sides: [Vec<usize>; 2],
    /// Region parts within quotient distance `radius` of a separator part.
    pub neighborhood: Vec<usize>,
}

/// Binary tree of balanced separators computed with inflated weights: a
/// part's weight is the total weight of the parts within quotient distance
/// `radius` of it.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparatorTree {
    pub nodes: Vec<SeparatorNode>,
    pub root: Option<usize>,
    pub radius: usize,
}

impl SeparatorTree {
    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.level + 1).max().unwrap_or(0)
    }

    /// Total part weight of the neighbourhood of node `u`.
    pub fn neighborhood_weight(&self, q: &QuotientGraph, u: usize) -> f64 {
        self.nodes[u].neighborhood.iter().map(|&p| q.weight(p)).sum()
    }
}

pub fn build_separator_tree(q: &QuotientGraph, radius: usize) -> SeparatorTree {
    let base = q.weights();
    let balls: Vec<Vec<usize>> = (0..q.num_parts()).map(|i| q.ball(i, radius)).collect();
    let inflated: Vec<f64> = balls.iter().map(|b| b.iter().map(|&j| base[j]).sum()).collect();
    let mut tree = SeparatorTree { nodes: Vec::new(), root: None, radius };
    if q.num_parts() == 0 {
        return tree;
    }
    let mut region_of = vec![usize::MAX; q.num_parts()];
    let mut work: Vec<(Vec<usize>, Option<usize>, usize)> = vec![((0..q.num_parts()).collect(), None, 0)];
    while let Some((region, parent, level)) = work.pop() {
        let id = tree.nodes.len();
        for &p in &region {
            region_of[p] = id;
        }
        let sep = balanced_separator_with_weights(q, &region, &inflated);
        let mut neighborhood: Vec<usize> = sep
            .iter()
            .flat_map(|&p| balls[p].iter().copied())
            .filter(|&j| region_of[j] == id)
            .collect();
        neighborhood.sort_unstable();
        neighborhood.dedup();

        let rest: Vec<usize> = region.iter().copied().filter(|p| sep.binary_search(p).is_err()).collect();
        let size = |c: &[usize]| c.iter().map(|&p| q.part(p).len()).sum::<usize>();
        let mut comps = part_components(q, &rest);
        comps.sort_by_key(|c| std::cmp::Reverse(size(c)));
        let mut halves: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        let mut loads = [0usize; 2];
        for c in comps {
            let side = usize::from(loads[1] < loads[0]);
            loads[side] += size(&c);
            halves[side].extend(c);
        }
        let sides = halves.clone().map(|h| {
            let mut vs: Vec<usize> = h.iter().flat_map(|&p| q.part(p).iter().copied()).collect();
            vs.sort_unstable();
            vs
        });
        tree.nodes.push(SeparatorNode {
            parts: sep,
            level,
            parent,
            children: Vec::new(),
            region,
            sides,
            neighborhood,
        });
        match parent {
            Some(p) => tree.nodes[p].children.push(id),
            None => tree.root = Some(id),
        }
        for mut h in halves.into_iter().rev().filter(|h| !h.is_empty()) {
            h.sort_unstable();
            work.push((h, Some(id), level + 1));
        }
    }
    tree
}
