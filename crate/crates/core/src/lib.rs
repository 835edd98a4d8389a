//! Exact construction, verification and factorization of finite-dimensional
//! representations of the additive group `G_a` and the Heisenberg group `H_1`
//! over prime fields and the rationals.

pub mod cli;
pub mod error;
pub mod format;
pub mod generators;
pub mod linalg;
pub mod poly;
pub mod rep;
pub mod scalars;
pub mod search;
pub mod structure;

pub use error::{Error, Result};
