//! Euclidean Jordan algebras, the `Ψ` operator on quadratic forms, Wishart
//! distributions on symmetric cones and their quadratic regression identities.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod cli;
pub mod division;
pub mod endo;
mod error;
pub mod identities;
pub mod psi;
pub mod regression;
pub mod stats;
pub mod wishart;

pub use algebra::{AlgebraKind, Element, JordanAlgebra};
pub use error::{Error, Result};
