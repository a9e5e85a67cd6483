//! Two-point-measurement work statistics for quenched finite-dimensional
//! quantum systems: the work distribution, its Shannon entropy, and the
//! coherence-based bounds on that entropy.

extern crate openblas_src;

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod infotheory;
pub mod models;
pub mod output;
pub mod spectral;
pub mod tpm;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;
