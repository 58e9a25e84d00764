use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::seed;
use crate::{Error, Result};

/// Default bound on the ratio between the largest and smallest diameter.
pub const DEFAULT_SIGMA: f64 = 2.0;

/// Fixed-point scale for exact intersection tests (2^20 units per length unit).
const SCALE: f64 = 1_048_576.0;
const MAX_COORD: f64 = 4.0e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Ball,
    /// Axis-parallel cube; `radius` is half the side length.
    Cube,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricObject {
    pub kind: ShapeKind,
    pub center: Vec<f64>,
    pub radius: f64,
    /// Vertex weight for weighted problems; defaults to 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

impl GeometricObject {
    pub fn ball(center: Vec<f64>, radius: f64) -> Self {
        GeometricObject { kind: ShapeKind::Ball, center, radius, weight: None }
    }

    pub fn cube(center: Vec<f64>, half_side: f64) -> Self {
        GeometricObject { kind: ShapeKind::Cube, center, radius: half_side, weight: None }
    }

    pub fn diameter(&self, dimension: usize) -> f64 {
        match self.kind {
            ShapeKind::Ball => 2.0 * self.radius,
            ShapeKind::Cube => 2.0 * self.radius * (dimension as f64).sqrt(),
        }
    }

    /// Diameter of the largest ball inside the object.
    pub(crate) fn inner_diameter(&self) -> f64 {
        2.0 * self.radius
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricInstance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub dimension: usize,
    pub objects: Vec<GeometricObject>,
}

struct Fixed {
    kind: ShapeKind,
    center: Vec<i64>,
    radius: i64,
}

fn to_fixed(x: f64) -> i64 {
    (x * SCALE).round() as i64
}

impl GeometricInstance {
    pub fn new(dimension: usize, objects: Vec<GeometricObject>) -> Self {
        GeometricInstance { id: None, dimension, objects }
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn from_json(text: &str, sigma: f64) -> Result<Self> {
        let inst: GeometricInstance = serde_json::from_str(text)?;
        inst.validate(sigma)?;
        Ok(inst)
    }

    pub fn load(path: &std::path::Path, sigma: f64) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?, sigma)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    /// Checks shapes, coordinates, and the similarly-sized condition
    /// `max diameter <= sigma * min diameter`.
    pub fn validate(&self, sigma: f64) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::InvalidInstance("dimension must be positive".into()));
        }
        for (i, o) in self.objects.iter().enumerate() {
            if o.center.len() != self.dimension {
                return Err(Error::InvalidInstance(format!(
                    "object {i} has {} coordinates, expected {}",
                    o.center.len(),
                    self.dimension
                )));
            }
            if o.center.iter().any(|c| !c.is_finite() || c.abs() > MAX_COORD) {
                return Err(Error::InvalidInstance(format!("object {i} has an invalid center")));
            }
            if !(o.radius.is_finite() && o.radius > 0.0 && o.radius < MAX_COORD) {
                return Err(Error::InvalidInstance(format!("object {i} has radius {}", o.radius)));
            }
            if let Some(w) = o.weight {
                if !w.is_finite() {
                    return Err(Error::InvalidInstance(format!("object {i} has weight {w}")));
                }
            }
        }
        if let Some((lo, hi)) = self.diameter_range() {
            let ratio = hi / lo;
            if ratio > sigma * (1.0 + 1e-12) {
                return Err(Error::NotSimilarlySized { ratio, limit: sigma });
            }
        }
        Ok(())
    }

    fn diameter_range(&self) -> Option<(f64, f64)> {
        let d = self.dimension;
        self.objects.iter().map(|o| o.diameter(d)).fold(None, |acc, x| match acc {
            None => Some((x, x)),
            Some((lo, hi)) => Some((lo.min(x), hi.max(x))),
        })
    }

    pub fn weights(&self) -> Vec<f64> {
        self.objects.iter().map(|o| o.weight.unwrap_or(1.0)).collect()
    }

    fn fixed(&self) -> Vec<Fixed> {
        self.objects
            .iter()
            .map(|o| Fixed {
                kind: o.kind,
                center: o.center.iter().map(|&c| to_fixed(c)).collect(),
                radius: to_fixed(o.radius),
            })
            .collect()
    }

    /// Closed-intersection test on the fixed-point representation; touching
    /// objects intersect.
    pub fn intersects(&self, a: usize, b: usize) -> bool {
        let f = self.fixed_pair(a, b);
        fixed_intersects(&f[0], &f[1])
    }

    fn fixed_pair(&self, a: usize, b: usize) -> [Fixed; 2] {
        [a, b].map(|i| {
            let o = &self.objects[i];
            Fixed {
                kind: o.kind,
                center: o.center.iter().map(|&c| to_fixed(c)).collect(),
                radius: to_fixed(o.radius),
            }
        })
    }

    pub fn intersection_graph(&self) -> Graph {
        let fixed = self.fixed();
        let mut edges = Vec::new();
        for a in 0..fixed.len() {
            for b in a + 1..fixed.len() {
                if fixed_intersects(&fixed[a], &fixed[b]) {
                    edges.push((a, b));
                }
            }
        }
        Graph::from_edges(fixed.len(), &edges).expect("intersection edges are valid")
    }
}

fn fixed_intersects(a: &Fixed, b: &Fixed) -> bool {
    let diffs = a.center.iter().zip(&b.center).map(|(x, y)| (*x as i128 - *y as i128).abs());
    match (a.kind, b.kind) {
        (ShapeKind::Ball, ShapeKind::Ball) => {
            let reach = a.radius as i128 + b.radius as i128;
            diffs.map(|d| d * d).sum::<i128>() <= reach * reach
        }
        (ShapeKind::Cube, ShapeKind::Cube) => {
            let reach = a.radius as i128 + b.radius as i128;
            diffs.into_iter().all(|d| d <= reach)
        }
        (ShapeKind::Ball, ShapeKind::Cube) | (ShapeKind::Cube, ShapeKind::Ball) => {
            let (r, h) = if a.kind == ShapeKind::Ball { (a.radius, b.radius) } else { (b.radius, a.radius) };
            let r = r as i128;
            let excess: i128 = diffs.map(|d| (d - h as i128).max(0)).map(|e| e * e).sum();
            excess <= r * r
        }
    }
}

/// `n` unit balls with centers uniform in a box of side `(n / density)^(1/d)`.
pub fn generate_unit_ball_instance(n: usize, dimension: usize, density: f64, seed: u64) -> GeometricInstance {
    let side = (n.max(1) as f64 / density).powf(1.0 / dimension as f64);
    let mut rng = seed::rng(seed);
    let objects = (0..n)
        .map(|_| GeometricObject::ball((0..dimension).map(|_| rng.gen_range(0.0..side)).collect(), 1.0))
        .collect();
    GeometricInstance {
        id: Some(format!("unit-n{n}-d{dimension}-rho{density}-s{seed}")),
        dimension,
        objects,
    }
}

/// Unit balls grouped around `clusters` random centers: each ball sits within
/// `spread` (per axis) of its cluster center. Small spreads give large clique
/// parts.
pub fn generate_clustered_instance(
    clusters: usize,
    per_cluster: usize,
    dimension: usize,
    box_side: f64,
    spread: f64,
    seed: u64,
) -> GeometricInstance {
    let mut rng = seed::rng(seed);
    let mut objects = Vec::new();
    for _ in 0..clusters {
        let c: Vec<f64> = (0..dimension).map(|_| rng.gen_range(0.0..box_side)).collect();
        for _ in 0..per_cluster {
            let center = c.iter().map(|x| x + rng.gen_range(-spread..=spread)).collect();
            objects.push(GeometricObject::ball(center, 1.0));
        }
    }
    GeometricInstance { id: Some(format!("clustered-{clusters}x{per_cluster}-s{seed}")), dimension, objects }
}
