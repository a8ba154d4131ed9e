//! Hochschild cohomology, cup products and Gerstenhaber brackets of
//! finite-dimensional graded algebras and their twisted tensor products.

pub mod field;
pub(crate) mod poly;
pub mod algebra;
pub mod linalg;
pub mod complex;
pub mod homotopy;
pub mod diagonal;
pub mod cli;
pub mod cohomology;
pub mod qci;
pub mod suites;
pub mod theorem;
