//! Exact Newton-polygon invariants, adaptation, Hensel lifting and local
//! exponential sums for bivariate polynomials.
//!
//! The polynomial containers are generic over a [`Coeff`] field; the
//! symbolic pipeline runs on the exact [`Rational`] instantiation.

pub mod adapt;
pub mod arith;
pub mod corpus;
pub mod edge;
pub mod expsum;
pub mod newton;
pub mod padic;
pub mod poly;
pub mod scalar;

pub use poly::{parse_poly, Axis, BivarPoly, PolyError, UnivarPoly};
pub use scalar::Coeff;

/// Arbitrary-precision rational number in lowest terms.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// Exact bivariate polynomial.
pub type QPoly = BivarPoly<Rational>;
/// Exact univariate polynomial.
pub type QUniPoly = UnivarPoly<Rational>;
/// Floating-point bivariate polynomial.
pub type FPoly = BivarPoly<f64>;
