//! Exact computations with divisorial valuations at infinity on the affine plane.
//!
//! A divisorial valuation `v` on C(x,y) centered at infinity with v(x) < 0 is
//! encoded by a *generic degree-wise Puiseux series* `psi = phi(x) + xi*x^r`:
//! a finite fractional power series with strictly decreasing exponents plus a
//! single term whose coefficient `xi` is an indeterminate. The valuation acts
//! on polynomials by `v(f) = -p * deg_x f(x, psi(x, xi))` where `p` is the
//! formal polydromy order of `psi`.
//!
//! Everything here is exact: coefficients live in cyclotomic fields over the
//! rationals, exponents are rationals, and all linear algebra is over Q.
//!
//! Module map:
//! - [`cyclo`]: cyclotomic field elements Q(zeta_N) and big rationals
//! - [`qmatrix`]: exact dense matrices over Q (inverse, determinant, definiteness)
//! - [`dwps`]: degree-wise Puiseux polynomials, formal Puiseux pairs, conjugates
//! - [`laurent`]: Laurent polynomials in (x, y) with named generic parameters
//! - [`valuation`]: evaluation of valuations, curvette elements, skewness
//! - [`normalize`]: normal forms under plane automorphisms, Jung factorization
//! - [`intersection`]: mutual-valuation matrix M, intersection matrix I = M^-1
//! - [`graph`] / [`resolution`]: weighted dual graphs, blow-up calculus,
//!   continued-fraction graph templates and the blow-up simulator
//! - [`parse`] / [`emit`]: surface syntax and DOT/JSON output
//! - [`corpus`]: seeded random series families used by tests and benches

pub mod corpus;
pub mod cyclo;
pub mod dwps;
pub mod emit;
pub mod error;
pub mod graph;
pub mod intersection;
pub mod laurent;
pub mod normalize;
pub mod parse;
mod par;
pub mod qmatrix;
pub mod resolution;
pub mod valuation;

pub use cyclo::{CycloNum, Rational};
pub use dwps::{DwpsPoly, GenericParam, Semidegree};
pub use error::Error;
pub use graph::WeightedGraph;
pub use intersection::CompactificationData;
pub use laurent::LaurentBiPoly;
pub use normalize::{AutoWord, ElementaryAuto};
pub use qmatrix::QMatrix;
