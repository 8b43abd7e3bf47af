//! Curvature sets of the circle, built as explicit simplicial complexes.
//!
//! Every finite metric sample of the circle with its geodesic metric is a
//! point of a simplicial complex whose vertices are the sign patterns
//! `(+1, ±1, ..., ±1)` and whose simplices are indexed by cluster
//! structures. This crate builds that complex exactly, maps distance
//! matrices to their carrying simplex and back, and computes its homology
//! over several coefficient rings.
//!
//! All angles and distances are rationals in units of pi.

pub mod circle;
pub mod cluster;
pub mod elliptope;
pub mod error;
pub mod exec;
pub mod homology;
pub mod linalg;
pub mod properties;
pub mod rational;
pub mod state_complex;

pub use circle::{
    apply_isometry, chirality, distance_matrix, fold, geodesic_distance, normalize, realize_matrix,
    recover_isometry, CirclePoint, Configuration, DistanceMatrix, Isometry,
};
pub use cluster::{
    convex_decomposition, induced_cluster, phi, predicted_distance, restrict, reverse_barycentric,
    transpose, vertex, vertex_set, vertex_signs, BarycentricPoint, ClusterStructure,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use rational::Rational;
pub use state_complex::{
    build_state_complex, build_state_complex_with, enumerate_cluster_structures,
    euler_characteristic, f_vector, minimal_simplex, stirling2, verify_complex, LocatedSimplex,
    SignVertex, SimplicialComplex,
};
