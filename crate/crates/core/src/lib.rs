//! Dirichlet eigenpairs and nodal domains on perturbed ball-and-shell domains.

pub mod discretize;
pub mod eigensolve;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod kv;
pub mod nodal;
pub mod oracles;
pub mod topology;
pub mod vec3;

pub use error::{Error, Result};
