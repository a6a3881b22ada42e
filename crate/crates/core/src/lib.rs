//! SPC and PPT matrices, realignment and separability certificates for
//! bipartite operators in `M_k ⊗ M_m`.
//!
//! All numerical routines are generic over the real scalar type (see
//! [`Real`]); the aliases at the crate root fix it to `f64` or `f32`.
//! Characteristic polynomials of integer matrices are computed exactly.

pub mod bipartite;
pub mod canonical;
pub mod classify;
pub mod constructions;
pub mod error;
pub mod linalg;
pub mod scalar;
pub mod sweeps;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub type Matrix64 = linalg::ComplexMatrix<f64>;
pub type Matrix32 = linalg::ComplexMatrix<f32>;
pub type Operator64 = bipartite::BipartiteOperator<f64>;
pub type Operator32 = bipartite::BipartiteOperator<f32>;

/// Default relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
