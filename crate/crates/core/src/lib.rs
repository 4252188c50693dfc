//! Desk-scale number theory around sums of three positive cubes.
//!
//! The crate provides the arithmetic substrate (primes, factorization,
//! multiplicative functions), caches and weight systems for the set of
//! sums of three cubes, smooth-number machinery with Dickman's function,
//! complete exponential sums and their major-arc approximants, local
//! densities and singular series, oscillatory integrals, and exact
//! representability searches with brute-force oracles.

pub mod analytic;
pub mod arith;
pub mod cachefile;
pub mod constants;
pub mod conv;
pub mod cubes;
pub mod error;
pub mod expsums;
pub mod local;
pub mod search;
pub mod smooth;
pub mod verify;

pub use error::{Error, Result};
