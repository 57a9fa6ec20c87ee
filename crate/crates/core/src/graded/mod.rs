//! Graded vector spaces, Koszul signs, graded Lie algebras and homology.

pub mod gla;
pub mod homology;
pub mod linalg;
pub mod sign;
pub mod space;

pub use gla::{derivations_of_degree, Derivation, Gla, Part};
pub use space::{BasisElem, GradedSpace, LinearMap, Vector};
