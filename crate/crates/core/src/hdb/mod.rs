//! Higher derived brackets `Φ(m)` and `Φ(D)` on the complement `A` of a
//! split graded Lie algebra, and verifiers for the identities they satisfy.

pub mod coder;
pub mod endo;
pub mod examples;
pub mod getzler;
pub mod koszul;
pub mod phi;
pub mod split;
pub mod subcomplex;
pub mod theorems;

#[cfg(test)]
mod tests;

pub use coder::{adjoint, verify_adjoint, verify_phi_identity, CoderModel};
pub use endo::MatrixLie;
pub use koszul::{AssocAlgebra, KoszulSplit};
pub use phi::{bracket_on_word, derived_brackets, symmetrized_nested, LieModel, Seed};
pub use split::Split;
pub use subcomplex::SubcomplexSplit;
pub use theorems::{compare_inner, verify_abelian_reduction, verify_fiber_sequence, verify_lie_morphism, NamedElement};
