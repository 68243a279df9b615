//! Exact computation of q-Euler numbers and polynomials of Norlund type.
//!
//! The crate evaluates every family both through closed-form sums and through
//! truncated fermionic `p`-adic Riemann sums, and checks the identities that
//! relate them in three scalar backends: exact rationals, the rational function
//! field `Q(q)`, and finite-precision `p`-adic numbers.

pub mod error;
pub mod families;
pub mod integrator;
pub mod lab;
pub mod numeric;
pub mod qkit;

pub use error::{NumericError, ParseError, Result};
