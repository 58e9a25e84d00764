//! Instance families shared by the criteria.

use geosolve::geometry::{generate_clustered_instance, generate_unit_ball_instance, GeometricInstance};
use geosolve::problems::PreparedInstance;
use geosolve::{seed, Graph};
use rand::Rng;

pub const BASE_SEED: u64 = 0x5eed_2024;

/// The `i`-th random unit-disk instance with `n` in `lo..=hi`. Densities
/// rotate so sparse, medium and crowded layouts all appear.
pub fn unit_disk(stream: u64, i: usize, lo: usize, hi: usize) -> GeometricInstance {
    const DENSITIES: [f64; 4] = [0.8, 1.2, 1.8, 2.6];
    let n = lo + i % (hi - lo + 1);
    let density = DENSITIES[(i / (hi - lo + 1)) % DENSITIES.len()];
    generate_unit_ball_instance(n, 2, density, seed::derive2(BASE_SEED, stream, i as u64))
}

/// Tight clusters: few parts, each large.
pub fn clustered(stream: u64, i: usize, max_n: usize) -> GeometricInstance {
    let clusters = 2 + i % 3;
    let per = (max_n / clusters).max(2);
    let spread = [0.3, 0.5, 0.7][i % 3];
    generate_clustered_instance(clusters, per, 2, 2.0 + clusters as f64 * 1.5, spread, seed::derive2(BASE_SEED, stream, i as u64))
}

pub fn prepare(inst: &GeometricInstance) -> PreparedInstance {
    PreparedInstance::from_geometry(inst).expect("generated instances are valid")
}

/// Erdős–Rényi graph.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = seed::rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("valid edges")
}

/// `k` distinct vertices of `0..n`.
pub fn pick_distinct(n: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut rng = seed::rng(seed);
    let mut out: Vec<usize> = Vec::new();
    while out.len() < k.min(n) {
        let v = rng.gen_range(0..n);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out.sort_unstable();
    out
}

pub fn path_graph(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn complete_graph(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn grid_graph(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::from_edges(rows * cols, &edges).unwrap()
}
