//! Finite-dimensional von Neumann algebras as multi-matrix algebras.
//!
//! Abstract algebras are [`MultiMatrixAlgebra`]s with elements addressed by
//! matrix-unit coordinates; concrete algebras acting on `ℂ^d` are
//! [`GeneratedAlgebra`]s obtained from a generating set by a bicommutant.

mod coords;
mod generated;
mod map;
mod multi;
mod projections;

pub use coords::Coords;
pub use generated::{generated_algebra, GeneratedAlgebra};
pub use map::{
    apply_tensor, inspect_map, verify_star_antihom, verify_star_hom, HomFlags, LinearMap, MapInspection,
    Multiplicativity, StarHom,
};
pub use multi::{Element, MultiMatrixAlgebra};
pub use projections::{
    central_carrier, kernel_central_projection, sup_projections, CentralProjection,
};
