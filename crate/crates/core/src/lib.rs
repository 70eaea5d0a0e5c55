//! Core and Delaunay core bifiltrations of Euclidean point clouds.
//!
//! The crate builds density-aware bifiltrations indexed by a radius `r` and
//! a density `k` (ordered oppositely), slices them along lines in the
//! `(r, k)` plane, computes one-parameter persistence, bottleneck distances
//! and Hilbert functions, and ships brute-force membership oracles for the
//! interleavings between the multicover, core and Delaunay core bifiltrations.

pub mod analysis;
pub mod bifiltration;
pub mod datasets;
pub mod delaunay;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod par;
pub mod persistence;
pub mod simplex;
pub mod slicing;

pub use error::{Error, Result};
pub use geometry::{CoreProfile, PointCloud};
pub use par::Execution;
pub use simplex::Simplex;
