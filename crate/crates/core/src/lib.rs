//! Exact arithmetic for Newton and Hodge polygons of L-functions of
//! exponential sums over finite fields.
//!
//! The library computes, without floating point anywhere on the exact paths:
//!
//! - lattice-polytope geometry (hulls, facets, weight functions, weighted
//!   lattice-point counts, Hodge numbers and Hodge polygons) in [`geometry`];
//! - prime fields, extension towers and torus enumeration in [`field`];
//! - the cyclotomic ring `Z[ζ_p]` with its π-adic valuation in [`cyclotomic`];
//! - brute-force exponential sums, L-polynomial reconstruction and q-adic
//!   Newton polygons in [`lfunction`];
//! - Deligne polytopes, unit-box congruence solving, p-stability orbits and
//!   generic-ordinariness diagnostics in [`ordinarity`].

pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod geometry;
pub mod lfunction;
pub mod linalg;
pub mod ordinarity;

pub use error::Error;

/// Convenience alias used across the crate for exact rational values.
pub type Rat = num_rational::BigRational;

pub type Result<T> = std::result::Result<T, Error>;
