//! Exact computation with singular transversely projective structures on
//! surfaces: projective triples of rational 1-forms, elementary
//! transformations, normal forms and their invariants.

pub mod cli;
pub mod error;
pub mod expr;
pub mod forms;
pub mod monodromy;
pub mod plane;
pub mod reduction;
pub mod samples;
pub mod triple;

pub use error::{Error, Result};
