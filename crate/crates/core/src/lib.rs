//! Exact symbolic engine for N_K=1 SUSY vertex algebras over quadratic Lie
//! algebras, together with the Killing spinor / F-term / D-term verifiers
//! they are built from.

pub mod ceforms;
pub mod geometry;
pub mod instances;
pub mod killing;
pub mod linalg;
pub mod qla;
pub mod scalar;
pub mod spinor;
pub mod susy;
pub mod sva;

pub use linalg::{Matrix, Vector};
pub use qla::{LieAlgebra, QuadraticLieAlgebra, Subspace};
pub use scalar::{Field, Scalar, ScalarError};
