//! Hopf–von Neumann structures on multi-matrix algebras, their limits along
//! projective systems, and the classical model `C(S_n)`.

mod classical;
mod laws;
mod limit;
mod perm;

pub use classical::{
    check_classical_formulas, check_corner_surjection, classical_algebra, classical_generator, classical_grid,
    classical_hopf_maps, classical_quantum_permutation_algebra, classical_tower, coassociative_on,
    coproduct_concrete, corner_surjection, flip, flipped_coproduct, padded_permutation_action,
    perturbed_classical_coproduct,
};
pub use laws::{
    check_hopf, check_hopf_system, first_failure, trivial_hopf, verify_hopf, verify_hopf_system, HopfData,
    HopfMaps, LawCheck,
};
pub use limit::{check_action, limit_action, limit_hopf, verify_action, ActionSpec, LimitAction, LimitHopf};
pub use perm::SymmetricGroup;
