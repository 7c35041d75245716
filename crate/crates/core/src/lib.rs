//! Exact arithmetic and verification routines for multitype Barsotti-Tate deformation
//! rings of two-dimensional mod p Galois representations.

pub mod algebra;
pub mod brauer;
pub mod checks;
pub mod defring;
pub mod error;
pub mod phi;
pub mod skeleton;
pub mod weights;

pub use error::{Error, Result};
