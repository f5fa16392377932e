//! Exact scalars, sparse polynomials, determinants and small counting kernels.

pub mod combin;
pub mod matrix;
pub mod poly;
pub mod rational;

pub use combin::{binomial, factorial, hook_count_rectangular, multichoose, multichoose_i64, multichoose_poly};
pub use matrix::{Matrix, PolyMatrix, RationalMatrix};
pub use poly::{interpolate, Poly, PolyJson};
pub use rational::{fmt_rational, int, parse_rational, rat, Rational};
