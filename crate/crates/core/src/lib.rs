//! Certified exterior-square unit norms for real multi-quadratic fields.
//!
//! For `L = Q(√d_1, …, √d_n)` with Galois group `(Z/2Z)^n`, the fundamental
//! units `u_a` of the `2^n - 1` quadratic subfields span a finite-index
//! sublattice `LOG(E)` of the unit lattice. This crate builds those objects
//! exactly, expands elements of `⋀²LOG(E)` in the standard basis, evaluates
//! their 1-norms with two independent formulas under interval arithmetic, and
//! certifies the lower bound
//!
//! ```text
//! ‖w‖₁ ≥ 2^(2n-1) · log((1+√5)/2) · log(1+√2)
//! ```
//!
//! over exhaustive bounded searches.

pub mod bound;
pub mod cli;
pub mod certify;
pub mod error;
pub mod extsquare;
pub mod f2n;
pub mod interval;
pub mod lemmas;
pub mod multiquad;
pub mod quadunit;
pub mod search;

pub use error::{Error, Result};
