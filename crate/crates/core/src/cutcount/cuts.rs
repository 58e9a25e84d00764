use crate::graph::Graph;

/// `side[i]` is the side of `x[i]` (`false` = left). A cut is consistent if
/// no edge joins the two sides.
pub fn is_consistent_cut(g: &Graph, x: &[usize], side: &[bool]) -> bool {
    let mut where_ = vec![None; g.n()];
    for (&v, &s) in x.iter().zip(side) {
        where_[v] = Some(s);
    }
    x.iter().zip(side).all(|(&v, &s)| g.neighbors(v).iter().all(|&w| where_[w].is_none_or(|t| t == s)))
}

/// Number of consistent cuts `(L, R)` of `x` with `v1` on the left, by
/// enumeration. Equals `2^(cc(G[x]) - 1)` when `v1` is in `x`.
pub fn count_consistent_cuts(g: &Graph, x: &[usize], v1: usize) -> u64 {
    let Some(anchor) = x.iter().position(|&v| v == v1) else {
        return 0;
    };
    let k = x.len();
    if k <= 64 && g.n() <= 64 {
        return count_small(g, x, anchor);
    }
    let others: Vec<usize> = (0..k).filter(|&i| i != anchor).collect();
    let mut side = vec![false; k];
    let mut count = 0;
    for mask in 0u64..(1u64 << others.len()) {
        for (b, &i) in others.iter().enumerate() {
            side[i] = mask >> b & 1 == 1;
        }
        if is_consistent_cut(g, x, &side) {
            count += 1;
        }
    }
    count
}

fn count_small(g: &Graph, x: &[usize], anchor: usize) -> u64 {
    let adj: Vec<u64> = x
        .iter()
        .map(|&v| x.iter().enumerate().filter(|(_, &w)| g.has_edge(v, w)).fold(0, |m, (j, _)| m | 1 << j))
        .collect();
    let full: u64 = if x.len() == 64 { u64::MAX } else { (1 << x.len()) - 1 };
    let rest = full & !(1 << anchor);
    let mut count = 0;
    // Enumerate the right side as a submask of the vertices other than v1.
    let mut right = rest;
    loop {
        let left = full & !right;
        let mut ok = true;
        let mut l = left;
        while l != 0 {
            let i = l.trailing_zeros() as usize;
            if adj[i] & right != 0 {
                ok = false;
                break;
            }
            l &= l - 1;
        }
        if ok {
            count += 1;
        }
        if right == 0 {
            break;
        }
        right = (right - 1) & rest;
    }
    count
}
