//! Exact differential algebra over differential fields with commuting
//! derivations `Δ = {δ_1, …, δ_m}` and an extra derivation `D`.
//!
//! The core objects are Δ-polynomials with coefficients in a rational
//! function field, the prolongation `τ f = df·ȳ + f^D` and its iterates,
//! and the geometry of the systems they define. All arithmetic is exact.
//!
//! ```
//! use std::sync::Arc;
//! use dprolong::base_field::BaseField;
//! use dprolong::delta::DeltaRing;
//! use dprolong::frontend::print_poly;
//! use dprolong::prolong::tau;
//!
//! let ring = DeltaRing::new(Arc::new(BaseField::rationals(1)), 1);
//! let f = ring.x(0).pow(2);
//! assert_eq!(print_poly(&tau(&ring, &f), &[]), "2*x1*y1");
//! ```

pub mod arith;
pub mod base_field;
pub mod delta;
pub mod prolong;
pub mod geometry;
pub mod transform;
pub mod frontend;
pub mod sample;
pub mod checks;
