//! Exact arithmetic in the split octonions and tools for finding, checking and
//! classifying weight-zero Rota-Baxter operators on them.
//!
//! Basis order everywhere: `e11, e12, e21, e22, ve11, ve12, ve21, ve22`.
//! An operator is stored by columns: column `j` is the image of basis vector `j`.

// Matrix kernels read more clearly with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod catalog;
pub mod io;
pub mod linalg;
pub mod maps;
pub mod operator;
pub mod scalar;
pub mod search;

pub use algebra::{Octo, SubalgebraSpec};
pub use operator::{Fingerprint, LinMap};
pub use scalar::{FieldSpec, Prime, Scalar};
