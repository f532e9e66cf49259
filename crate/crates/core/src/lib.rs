//! Exact-arithmetic representations of deformed preprojective algebras on
//! affine quivers: relation checking, the one-point extension correspondence,
//! and a certified submodule-finding engine.

pub mod affine;
pub mod almost;
pub mod error;
pub mod field;
pub mod gen;
pub mod infinity;
pub mod json;
pub mod matrix;
pub mod poly;
pub mod quiver;
pub mod rep;
pub mod simplicity;
pub mod theorem;

pub use error::{Error, Result};
pub use field::{Elem, Embedding, Field};
pub use matrix::{Matrix, Subspace};
