#![allow(clippy::needless_range_loop)]

pub mod clifford;
pub mod error;
pub mod fundamental;
pub mod harmonic;
pub mod integrate;
pub mod jet;
pub mod kernels;
pub mod linalg;
pub mod operators;
pub mod poly;
pub mod poly_json;
pub mod probe;
pub mod rational;
pub mod scalar;
pub mod verify;

pub use error::{HscaError, Result};
