//! Instance and candidate generators for the cross-validation suites: exhaustive small
//! two-component curves and random multitrees, compact-type curves and general graphs.

mod enumerate;
mod random;

pub use enumerate::{
    combinations, enumerate_subspaces, markers, product, two_component_instances, GridCounts, TwoComponentGrid,
};
pub use random::{
    compact_type_instance, random_candidate, random_chains, random_connected_graph, random_multidegree,
    random_multitree_graph, random_multitree_instance, random_points, random_subspace, random_tuple, tuple_from_root,
    CandidateKind, MultitreeParams,
};
