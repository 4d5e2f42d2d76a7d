//! Projective systems of multi-matrix algebras and their truncated limits.

mod extend;
mod system;

pub use extend::{extend_family_homext, is_contractive, lift_family_antip, Extension};
pub use system::{build_truncated_limit, decompose_system, Decomposition, ProjectiveSystem, TruncatedLimit};
