//! Exact evolution and analysis of two-dimensional linearizable lattice
//! equations: the two-dimensional Heideman-Hogan lattice, the two-frieze
//! equation and its determinant generalizations, together with their
//! one-dimensional reductions.
//!
//! The crate is organized bottom-up:
//!
//! * [`algebra`]: sparse Laurent polynomials, GCDs and rational functions.
//! * [`scalar`]: the field abstraction shared by numeric and symbolic runs.
//! * [`lattice`]: seeding and evolving lattice grids.
//! * [`determinants`]: window matrices, determinants, minors, Dodgson checks.
//! * [`linearization`]: extraction and verification of linear recurrences.
//! * [`reduction`]: one-dimensional recurrences obtained by reduction.
//! * [`analysis`]: Laurent, coprimeness, irreducibility and degree growth.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature is enabled and runs sequentially otherwise.

pub mod algebra;
pub mod analysis;
pub mod determinants;
pub mod lattice;
pub mod linalg;
pub mod linearization;
pub mod par;
pub mod reduction;
pub mod report;
pub mod scalar;

pub use algebra::{LaurentPolynomial, RationalFunction, VariableId};
pub use scalar::{Rational, Scalar};

/// Version tag written into every JSON artifact.
pub const SCHEMA_VERSION: u32 = 1;
