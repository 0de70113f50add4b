//! Exact rationals, guarded interval reals and integer matrix algebra.

pub mod interval;
pub mod matrix;
pub mod rational;

pub use interval::{guarded_floor, GuardedReal, RealSource, DEFAULT_MAX_PRECISION, DEFAULT_PRECISION};
pub use matrix::{determinant, mat_inverse, mat_mul, IntVector, UnimodularMatrix};
pub use num_rational::BigRational;
