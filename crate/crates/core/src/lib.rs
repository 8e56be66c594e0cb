//! Cyclic group structures hidden on rational curves in affine n-space over GF(p).
//!
//! A line `C = rho(A^1)` is pushed through an invertible polynomial map
//! `theta` of `A^n`; the image curve `D = theta(C)` inherits the additive
//! group of the parameter line. The private pair `(rho, theta)` is the
//! trapdoor; the public face is a generator plus the group law expanded
//! into sparse polynomial form. On top of that this crate provides
//! k-linear pairings between two such groups, and the conic/Groebner
//! pipeline that recovers preimages of `theta` from a discrete-log
//! witness polynomial.
//!
//! Modules:
//! - [`ffield`]: exact GF(p) scalars, vectors, matrices, linear solving.
//! - [`mpoly`]: canonical sparse multivariate polynomials and polynomial
//!   maps, including full expansion of composed maps.
//! - [`autos`]: affine-linear, triangular and tame automorphisms with
//!   symbolic inverses, plus key-space accounting.
//! - [`group`]: linear immersions, trapdoors, group-law synthesis and
//!   the group operations themselves.
//! - [`pairing`]: the k-linear map between two hidden-line groups.
//! - [`groebner`]: Buchberger's algorithm, reduced bases, zero-dimensional
//!   solving and curve implicitization.
//! - [`inversion`]: the conic construction, simulated discrete-log
//!   adversaries, and the Groebner endgame inverting an automorphism.

pub mod autos;
pub mod error;
pub mod ffield;
pub mod groebner;
pub mod group;
pub mod inversion;
pub mod mpoly;
pub mod pairing;
#[cfg(test)]
pub(crate) mod testutil;

pub use error::Error;
