//! Balanced separators, (weighted) treedepth decompositions of the quotient
//! graph, and the binary separator tree used by the domination solver.

mod builder;
mod separator;
mod separator_tree;
mod treedepth;

pub use builder::{
    build_treedepth_for_graph, build_unweighted_treedepth, build_weighted_treedepth,
    build_weighted_treedepth_with_report, expand_to_unweighted, BuildReport, ExpandedGraph,
    SplitRecord,
};
pub use separator::{
    balanced_separator_with_weights, balanced_weighted_separator, is_balanced, EXHAUSTIVE_LIMIT,
};
pub use separator_tree::{build_separator_tree, SeparatorNode, SeparatorTree};
pub use treedepth::{
    verify_against_graph, verify_decomposition, DecompositionExport, DecompositionMode, TdNode,
    TreedepthDecomposition,
};
