//! Robust multivariate mode estimation.

pub mod bril;
pub mod cli;
pub mod depth;
pub mod error;
pub mod eval;
pub mod linalg;
pub mod points;
pub mod rng;
pub mod synthgen;
pub mod robust;
pub mod stattests;

pub use error::{Error, Result};
pub use points::{IndexSubset, LocationScatter, PointSet};
pub use rng::RngStream;
