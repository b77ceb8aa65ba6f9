//! Direct scattering and long-time asymptotics for the nonlocal focusing NLS
//! equation
//!
//! ```text
//! i q_t(x,t) + q_xx(x,t) + 2 q^2(x,t) conj(q(-x,t)) = 0
//! ```
//!
//! with step-free background `q -> A` as `x -> ±∞`.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the
//! split-step simulator and the command line live in `nnls-lab`.
#![no_std]
// float methods come from `num_traits::Float`; builds that link std (tests,
// dev-dependencies) resolve them inherently and flag the import
#![allow(unused_imports)]

extern crate alloc;

pub mod background;
pub mod ellipticwave;
pub mod error;
pub mod numerics;
pub mod planewave;
pub mod scattering;

pub use error::{Error, Result};
pub use num_complex::Complex64;
