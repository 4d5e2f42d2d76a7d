//! Scalar and dense-matrix substrate.

mod mat;
mod scalar;
mod solve;

pub use mat::Mat;
pub use scalar::{Approx, Exact, Field, DEFAULT_TOLERANCE};
pub use solve::{
    commutant_basis, independent_subset, inverse, is_positive_semidefinite, nullspace,
    range_projection, rank, rref, span_coefficients, Eliminator,
};
