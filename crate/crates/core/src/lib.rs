//! Whitehead's algorithms for free groups and the Gersten-graph machinery
//! behind peak reduction.

pub mod bases;
pub mod error;
pub mod fold;
pub mod gersten;
pub mod io;
pub mod length;
pub mod matching;
pub mod paths;
pub mod peak;
pub mod search;
pub mod words;

pub use bases::{
    abelianization_determinant, enumerate_whitehead_transforms, is_basis, signed_permutation_match,
    Automorphism, SignedPermutation, WhiteheadTransform,
};
pub use error::{Error, Result};
pub use fold::{fold, CoreGraph};
pub use length::{descend, is_local_minimum, measure, LengthReport, WordSet};
pub use words::{CyclicWord, Entry, Letter, Word};
pub use search::{level_set_component, minimize_tuple, orbit_equivalent, OrbitCertificate, SearchLimits};
pub use gersten::{
    build_gersten_graph, distance, edge_sets, is_translator, krstic_translator, one_component, tree_closure,
    valence_ge3, DistanceLimits, DistanceReport, GerstenGraph, Side, VertexSet,
};
pub use paths::{represent, DecoratedPath, EdgeKey, PathStep, TraversalCounts};
pub use peak::{
    build_case_context, case1_step, case2_step, chi_f, derive_transform, partition_chi, peak_reduce, peak_reduce_all,
    CaseContext, Partition, PeakStep, ReductionResult,
};
