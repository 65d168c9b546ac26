//! Exact computation of Poincaré polynomials, additive Chow bases and ring
//! presentations for spaces of genus-zero stable maps to projective space.
//!
//! The counting currency is [`qpoly::QPoly`], an exact polynomial in `q`.
//! Poincaré polynomials are produced two ways: by summing per-tree
//! contributions over stable rooted trees ([`poincare::poincare_direct`]) and
//! by a degree/leaf recursion ([`poincare::poincare_recursive`]).

pub mod basis;
mod combinat;
pub mod error;
pub mod partitions;
pub mod poincare;
pub mod qpoly;
pub mod trees;

pub use error::{Error, Result};
