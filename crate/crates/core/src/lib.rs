//! Smoothed particle hydrodynamics with a unified theta-scheme and
//! Wasserstein-1 convergence diagnostics.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod benchmarks;
pub mod cli;
pub mod error;
pub mod init;
pub mod integrator;
pub mod io;
pub mod kernels;
pub mod sph;
pub mod transport;
pub mod vector;

pub use error::{Error, Result};
