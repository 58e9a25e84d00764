//! Enumeration helpers for restricted function families.

use crate::graph::Graph;

/// All subsets of `items` with at most `max` elements, by size and then
/// lexicographically.
pub fn restricted_subsets(items: &[usize], max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    for _ in 0..max.min(items.len()) {
        let mut next = Vec::new();
        for (set, from) in &frontier {
            for (i, &item) in items.iter().enumerate().skip(*from) {
                let mut s = set.clone();
                s.push(item);
                out.push(s.clone());
                next.push((s, i + 1));
            }
        }
        frontier = next;
    }
    out
}

/// Side assignments (`false` = left) of `verts` that put adjacent vertices on
/// the same side. A greedy maximal independent set picks its sides freely;
/// every other vertex copies its first independent neighbour, and
/// assignments with a conflicting edge are dropped.
pub fn cut_respecting_sides(g: &Graph, verts: &[usize]) -> Vec<Vec<bool>> {
    let k = verts.len();
    let mut anchors: Vec<usize> = Vec::new();
    for i in 0..k {
        if anchors.iter().all(|&a| !g.has_edge(verts[a], verts[i])) {
            anchors.push(i);
        }
    }
    let follow: Vec<usize> = (0..k)
        .map(|i| {
            anchors
                .iter()
                .position(|&a| a == i || g.has_edge(verts[a], verts[i]))
                .expect("maximal independent set dominates")
        })
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << anchors.len()) {
        let side: Vec<bool> = follow.iter().map(|&j| mask >> j & 1 == 1).collect();
        let ok = (0..k).all(|a| (a + 1..k).all(|b| side[a] == side[b] || !g.has_edge(verts[a], verts[b])));
        if ok {
            out.push(side);
        }
    }
    out
}

/// Every function from `len` positions to `0..states`.
pub(crate) fn all_assignments(len: usize, states: u8) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..states).map(move |s| {
                    let mut p = prefix.clone();
                    p.push(s);
                    p
                })
            })
            .collect();
    }
    out
}

/// `(1 + size)^exponent * 2^extra` as a float bound.
pub(crate) fn family_bound(size: usize, exponent: usize, extra: usize) -> f64 {
    (1.0 + size as f64).powi(exponent as i32) * 2f64.powi(extra as i32)
}
