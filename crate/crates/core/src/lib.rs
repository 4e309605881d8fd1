//! φ-order growth calculus for meromorphic functions and linear q-difference equations.
//!
//! Radii are carried as `log r` and magnitudes as `log |f|` throughout, so that
//! experiments with `φ(r) = log r` can reach `r = e^{2000}` and beyond.

pub mod bigfloat;
pub mod cli;
pub mod error;
pub mod fit;
pub mod grid;
pub mod logspace;
pub mod models;
pub mod nevanlinna;
pub mod qdiff;
pub mod scales;

pub use error::{Error, Result};
