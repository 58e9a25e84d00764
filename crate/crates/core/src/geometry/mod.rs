//! Geometric instances, their intersection graphs, and clique-based
//! partitions with the quotient graph on top of them.

mod instance;
mod partition;

pub use instance::{
    generate_clustered_instance, generate_unit_ball_instance, GeometricInstance, GeometricObject,
    ShapeKind, DEFAULT_SIGMA,
};
pub use partition::{
    grid_clique_partition, robust_clique_partition, PartitionExport, QuotientGraph,
};
