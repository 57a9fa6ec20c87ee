//! Exact computation of higher derived brackets for a graded Lie algebra
//! split as `M = L ⊕ A`, together with the L∞[1] machinery they are built
//! from: coderivations of the symmetric coalgebra, homotopy transfer, and
//! cocone/cocylinder models.

pub mod coalgebra;
pub mod cocone;
pub mod error;
pub mod fixtures;
pub mod graded;
pub mod hdb;
pub mod random;
pub mod report;
pub mod scalars;
pub mod transfer;

pub use error::{Error, Result};
pub use scalars::Rational;
