//! Exact evaluation of the weighted sums
//! `Σ (x² + x − (1+4d)k² − (1−2d)k) · d^{-k} C(x,k) C(x+k,k) / C(2k,k)`
//! and their relatives, plus a verifier that checks the closed forms and
//! supercongruences (mod `p²` … `p⁵`) built on them.
//!
//! Layout:
//! - [`padic`]: valuations, residues, congruence of rationals, Jacobi symbols.
//! - [`special`]: harmonic numbers, Fermat quotients, Bernoulli and Euler values.
//! - [`binomial`]: generalized binomials, bridge identities, the weighted sums.
//! - [`verifier`]: one check per statement, producing evidence records.
//! - [`report`]: suite configuration, the parallel runner, and report emission.

pub mod binomial;
pub mod error;
pub mod padic;
pub mod rational;
pub mod report;
pub mod special;
pub mod verifier;

pub use error::{Error, Result};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
