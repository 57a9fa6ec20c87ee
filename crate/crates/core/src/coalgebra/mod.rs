//! The symmetric coalgebra `SV` of a graded space: coderivations,
//! coalgebra morphisms and L∞[1] structures, all stored through their
//! Taylor coefficients.

pub mod coderivation;
pub mod extension;
pub mod json;
pub mod linfty;
pub mod morphism;
pub mod multimap;
pub mod word;

pub use coderivation::{nr_bracket, nr_product, Coderivation, Flavor, TailBound};
pub use extension::{check_ideal, extension_from_morphism, morphism_from_extension, Classifying};
pub use linfty::{check_linfty, curvature, decalage, decalage_on, is_linfty, is_maurer_cartan, push_mc, twist, twist_morphism};
pub use morphism::{check_morphism, morphism_sides, power_terms, CoalgMorphism};
pub use multimap::MultiMap;
pub use word::{words, SymTensor, Word};

#[cfg(test)]
mod tests;
