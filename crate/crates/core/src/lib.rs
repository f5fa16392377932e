//! Exact computations on the polytope `Π_n(x) = { y >= 0 : y_1 + ... + y_i <= x_1 + ... + x_i }`.

pub mod ballot;
pub mod cli;
pub mod config;
pub mod error;
pub mod exactmath;
pub mod lattice;
pub mod parking;
pub mod posets;
pub mod probability;
pub mod treefan;
pub mod verify;
pub mod volume;

pub use error::{Error, Result};
