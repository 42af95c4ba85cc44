//! Exact polynomial arithmetic, triangular decompositions, algebraic group
//! presentations and symbolic bound comparison.

pub mod bounds;
pub mod decompose;
pub mod error;
pub mod groups;
pub mod poly;
pub mod triangular;

pub use error::{Error, Result};
