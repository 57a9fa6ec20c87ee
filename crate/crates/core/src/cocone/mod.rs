//! Cones and cocylinders of dgla morphisms, their L∞[1] models, and the
//! polynomial-form model they are transferred from.

pub mod cone;
pub mod fiber;
pub mod forms;
pub mod polyform;


pub use cone::Cone;
pub use fiber::{change_of_complement, homotopy_replacement_diagram, ComplementChange, FiberModel, ReplacementDiagram};
pub use forms::{FormModel, Triple};
pub use polyform::{fiber_product_membership, stokes_holds, PolyForm};
