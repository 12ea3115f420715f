//! Exact and numerical machinery for polynomial point patterns `x + P_1(y), ..., x + P_t(y)`:
//! kernel systems and transferability classification, counting operators on `Z/NZ` and their
//! linearized analogues, Gowers and Gowers-Peluse uniformity norms, W-trick rescaling with
//! exact residue-distribution checks, and exact pattern-free set search.
//!
//! Everything algebraic (polynomials, kernel systems, residue distributions) is exact over
//! arbitrary-precision rationals; analytic quantities (norms, counting averages) use `f64`
//! with documented tolerances. The crate is `no_std`-compatible (requires `alloc`).

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod counting;
pub mod cyclic;
pub mod extremal;
pub mod linalg;
pub mod measure;
pub mod patterns;
pub mod poly;
pub mod primes;
pub mod rng;
pub mod wtrick;

pub use num_bigint::{BigInt, BigUint};
pub use num_complex::Complex64;
pub use num_rational::BigRational;
