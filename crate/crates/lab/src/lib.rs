//! Split-step simulator, file formats, run configuration and comparison
//! pipelines for `nnls-core`.

pub mod config;
pub mod error;
pub mod harness;
pub mod io;
pub mod simulator;

pub use error::{LabError, Result};
