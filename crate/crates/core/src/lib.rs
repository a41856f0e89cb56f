//! Exact computations with polynomial automorphisms of the affine plane.

pub mod error;
pub mod fields;
pub mod dvr;
pub mod equivariant;
pub mod family;
pub mod group;
pub mod json;

pub use error::{Error, Result};
pub mod linalg;
pub mod plane;
pub mod poly;
pub mod random;
pub mod selftest;
