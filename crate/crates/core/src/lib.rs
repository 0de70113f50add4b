//! Exact Jacobi–Perron continued fractions, toric AF-algebra Bratteli
//! diagrams, tail-equivalence of digit sequences, and integer matrix
//! representations of groups acting on them.

pub mod bratteli;
pub mod cli;
pub mod error;
pub mod jp;
pub mod json;
pub mod numerics;
pub mod repr;
pub mod toric;

pub use error::{Error, Result};
