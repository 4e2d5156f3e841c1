//! Exact computations with pencils of skew-symmetric matrices, their
//! degeneracy loci, and the linear line complexes they span.

pub mod complexes;
pub mod field;
pub mod forms;
pub mod json;
pub mod linalg;
pub mod odd;
pub mod pencils;
pub mod random;
mod roots;
