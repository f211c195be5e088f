//! Exact finite-dimensional algebra over prime fields: modules, bimodules,
//! Krull–Schmidt decomposition, similarity certificates, quasi-Frobenius
//! predicates for bimodules, ring extensions, corings and group-graded rings.

pub mod algebra;
pub mod coring;
pub mod decomp;
pub mod error;
pub mod exactla;
pub mod fixtures;
pub mod graded;
pub mod modrep;
pub mod par;
pub mod pipeline;
pub mod poly;
pub mod report;
pub mod schema;
pub mod ringext;
pub mod simdiv;
pub mod verify;

pub use error::{Error, Result, Side};
pub use exactla::{Echelon, Mat, PrimeField, Rref};
