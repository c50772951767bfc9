//! Exact computations with finite rings, finite modules and towers of finite
//! rings: radicals, Wedderburn decompositions, idempotent lifting, windowed
//! row-zero-convergent matrices, endomorphism topologies and perfectness
//! verdicts with machine-checkable certificates.

pub mod algebra;
pub mod corpus;
pub mod endo;
pub mod error;
pub mod field;
pub mod format;
pub mod lifting;
pub mod linalg;
pub mod matrix;
pub mod module;
pub mod poly;
pub mod tower;
pub mod verify;

pub use error::{Error, Result};
