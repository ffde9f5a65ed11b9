//! Exact Schubert expansions of rank 2 and rank 3 matroids, the generating matrices
//! `O_{2,n}` and `O_{3,n}`, and exact polytope post-processing.

pub mod canon;
pub mod descriptor;
pub mod error;
pub mod expansion;
pub mod lattice;
pub mod matrix;
pub mod oracle;
pub mod polytope;
pub mod rank2;
pub mod rank3;
pub mod schubert;
pub mod set;
pub mod types;

pub use error::{Error, Result};
