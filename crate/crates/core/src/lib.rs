//! Constructive machinery for topological Turán problems on 3-uniform
//! hypergraphs: disk recognition, disk-coverability and admissibility
//! estimation, a randomized search for homeomorphs of `K_t^(3)`, builders for
//! the torus, the projective plane and the sphere, and an independent
//! certificate verifier.

pub mod complex;
pub mod coverability;
pub mod error;
pub mod experiments;
pub mod hypergraph;
pub mod io;
pub mod rng;
pub mod search;
pub mod verify;

pub use complex::{
    complex_intersection, Classification, ComplexKind, SimplicialComplex, TwoComplex,
};
pub use error::{Error, Result};
pub use hypergraph::{Hypergraph3, SkeletonGraph, Vertex};
