use std::collections::VecDeque;

use crate::geometry::QuotientGraph;

/// Up to this many active parts the separator search is exhaustive.
pub const EXHAUSTIVE_LIMIT: usize = 20;

const EPS: f64 = 1e-9;

/// Scratch view of an active part set.
struct Region<'a> {
    q: &'a QuotientGraph,
    active: &'a [usize],
    slot: Vec<usize>,
    total: usize,
}

impl<'a> Region<'a> {
    fn new(q: &'a QuotientGraph, active: &'a [usize]) -> Self {
        let mut slot = vec![usize::MAX; q.num_parts()];
        for (i, &p) in active.iter().enumerate() {
            slot[p] = i;
        }
        let total = active.iter().map(|&p| q.part(p).len()).sum();
        Region { q, active, slot, total }
    }

    fn balanced_without(&self, removed: &[bool]) -> bool {
        self.largest_if_balanced(removed).is_some()
    }

    /// Size of the largest component left after removing the slots flagged in
    /// `removed`, or `None` once some component exceeds two thirds.
    fn largest_if_balanced(&self, removed: &[bool]) -> Option<usize> {
        let mut largest = 0;
        let mut seen = removed.to_vec();
        let mut stack = Vec::new();
        for s in 0..self.active.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            let mut size = 0;
            while let Some(i) = stack.pop() {
                let p = self.active[i];
                size += self.q.part(p).len();
                for &nb in self.q.neighbors(p) {
                    let j = self.slot[nb];
                    if j != usize::MAX && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            if 3 * size > 2 * self.total {
                return None;
            }
            largest = largest.max(size);
        }
        Some(largest)
    }

    /// BFS layers (as slot lists) from slot `s` over the region; unreachable
    /// slots are left out.
    fn layers_from(&self, s: usize) -> Vec<Vec<usize>> {
        let mut dist = vec![usize::MAX; self.active.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        let mut layers: Vec<Vec<usize>> = vec![vec![s]];
        while let Some(i) = queue.pop_front() {
            for &nb in self.q.neighbors(self.active[i]) {
                let j = self.slot[nb];
                if j != usize::MAX && dist[j] == usize::MAX {
                    dist[j] = dist[i] + 1;
                    if layers.len() <= dist[j] {
                        layers.push(Vec::new());
                    }
                    layers[dist[j]].push(j);
                    queue.push_back(j);
                }
            }
        }
        layers
    }
}

/// True if every component of the region minus `separator` spans at most two
/// thirds of the vertices in the region.
pub fn is_balanced(q: &QuotientGraph, active: &[usize], separator: &[usize]) -> bool {
    let region = Region::new(q, active);
    let mut removed = vec![false; active.len()];
    for p in separator {
        let s = region.slot[*p];
        if s != usize::MAX {
            removed[s] = true;
        }
    }
    region.balanced_without(&removed)
}

/// Balanced separator of `active` minimizing the total part weight
/// `log2(1 + |V_i|)`.
pub fn balanced_weighted_separator(q: &QuotientGraph, active: &[usize]) -> Vec<usize> {
    balanced_separator_with_weights(q, active, &q.weights())
}

/// Balanced separator of `active` under arbitrary positive part weights
/// (indexed by part). Small regions are searched exhaustively for the minimum
/// weight; among equally light separators the one leaving the smallest
/// largest component wins, then the lexicographically smallest part set.
/// Larger regions take the lightest balanced BFS layer and then drop
/// redundant parts.
pub fn balanced_separator_with_weights(q: &QuotientGraph, active: &[usize], weights: &[f64]) -> Vec<usize> {
    let mut active = active.to_vec();
    active.sort_unstable();
    active.dedup();
    if active.is_empty() {
        return Vec::new();
    }
    let region = Region::new(q, &active);
    let slots = if active.len() <= EXHAUSTIVE_LIMIT {
        exhaustive(&region, weights)
    } else {
        layered(&region, weights)
    };
    let mut out: Vec<usize> = slots.into_iter().map(|s| active[s]).collect();
    out.sort_unstable();
    out
}

fn exhaustive(region: &Region, weights: &[f64]) -> Vec<usize> {
    let len = region.active.len();
    let w: Vec<f64> = region.active.iter().map(|&p| weights[p]).collect();
    let wmin = w.iter().copied().fold(f64::INFINITY, f64::min);
    let mut best: Option<(f64, usize, Vec<usize>)> = None;
    let mut removed = vec![false; len];
    for k in 0..=len {
        if let Some((bw, _, _)) = &best {
            if k as f64 * wmin > bw + EPS {
                break;
            }
        }
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let weight: f64 = combo.iter().map(|&i| w[i]).sum();
            if best.as_ref().is_none_or(|(bw, _, _)| weight <= bw + EPS) {
                for &i in &combo {
                    removed[i] = true;
                }
                if let Some(largest) = region.largest_if_balanced(&removed) {
                    let better = match &best {
                        None => true,
                        Some((bw, bl, bs)) => {
                            weight < bw - EPS || (largest, &combo) < (*bl, bs)
                        }
                    };
                    if better {
                        best = Some((weight, largest, combo.clone()));
                    }
                }
                for &i in &combo {
                    removed[i] = false;
                }
            }
            if !next_combination(&mut combo, len) {
                break;
            }
        }
    }
    best.map(|(_, _, s)| s).unwrap_or_else(|| (0..len).collect())
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

fn layered(region: &Region, weights: &[f64]) -> Vec<usize> {
    let len = region.active.len();
    let size = |i: usize| region.q.part(region.active[i]).len();
    let w = |i: usize| weights[region.active[i]];
    let mut removed = vec![false; len];
    if region.balanced_without(&removed) {
        return Vec::new();
    }
    // Double sweep: the second root is the last part reached from the first.
    let first = region.layers_from(0);
    let far = *first.last().and_then(|l| l.last()).unwrap_or(&0);
    let mut best: Option<(f64, usize, Vec<usize>)> = None;
    for layers in [first, region.layers_from(far)] {
        let sizes: Vec<usize> = layers.iter().map(|l| l.iter().map(|&i| size(i)).sum()).collect();
        let reached: usize = sizes.iter().sum();
        let mut before = 0;
        for (li, layer) in layers.iter().enumerate() {
            let after = reached - before - sizes[li];
            let rest = region.total - reached;
            if 3 * (before + rest) <= 2 * region.total && 3 * (after + rest) <= 2 * region.total {
                let weight: f64 = layer.iter().map(|&i| w(i)).sum();
                let side = (before + rest).max(after + rest);
                let better = best
                    .as_ref()
                    .is_none_or(|(bw, bs, _)| weight < *bw - EPS || (weight <= *bw + EPS && side < *bs));
                if better {
                    best = Some((weight, side, layer.clone()));
                }
            }
            before += sizes[li];
        }
    }
    let mut sep = match best {
        Some((_, _, s)) => s,
        None => greedy(region, weights),
    };
    for &i in &sep {
        removed[i] = true;
    }
    if !region.balanced_without(&removed) {
        sep = greedy(region, weights);
        removed.fill(false);
        for &i in &sep {
            removed[i] = true;
        }
    }
    // Minimalize: try to put back heavy parts first.
    let mut order = sep.clone();
    order.sort_by(|&a, &b| w(b).total_cmp(&w(a)).then(a.cmp(&b)));
    for i in order {
        removed[i] = false;
        if !region.balanced_without(&removed) {
            removed[i] = true;
        }
    }
    (0..len).filter(|&i| removed[i]).collect()
}

/// Fallback: repeatedly remove the part that most shrinks the largest
/// component per unit weight.
fn greedy(region: &Region, weights: &[f64]) -> Vec<usize> {
    let len = region.active.len();
    let mut removed = vec![false; len];
    let largest = |removed: &[bool]| -> usize {
        let mut seen = removed.to_vec();
        let mut best = 0;
        for s in 0..len {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut size = 0;
            while let Some(i) = stack.pop() {
                let p = region.active[i];
                size += region.q.part(p).len();
                for &nb in region.q.neighbors(p) {
                    let j = region.slot[nb];
                    if j != usize::MAX && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            best = best.max(size);
        }
        best
    };
    while !region.balanced_without(&removed) {
        let current = largest(&removed);
        let mut pick = None;
        let mut pick_score = f64::NEG_INFINITY;
        for i in 0..len {
            if removed[i] {
                continue;
            }
            removed[i] = true;
            let gain = (current - largest(&removed)) as f64 / weights[region.active[i]];
            removed[i] = false;
            if gain > pick_score + EPS {
                pick_score = gain;
                pick = Some(i);
            }
        }
        match pick {
            Some(i) => removed[i] = true,
            None => break,
        }
    }
    (0..len).filter(|&i| removed[i]).collect()
}
