//! Size function computations for number fields: fractional-ideal
//! arithmetic in Hermite normal form, Arakelov divisors in log
//! coordinates, LLL reduction on divisors, the jump algorithm for walking
//! to far-away classes, and theta sums with a block Poisson split for the
//! final evaluation of h⁰.
//!
//! The crate works at a configurable binary precision carried by the
//! `NumberField`; exact data (ideals, element coordinates, transforms)
//! stays in GMP integers/rationals, approximate data in MPFR floats.

pub mod divisor;
pub mod error;
pub mod field;
pub mod ideals;
pub mod io;
pub mod lattice;
pub mod pipeline;
pub mod qmat;
pub mod real;
pub mod roots;
pub mod theta;

#[cfg(test)]
pub(crate) mod testfields;

pub use error::{Error, Result};
pub use field::{build_field, FieldElement, NumberField, Place};
pub use ideals::FracIdeal;
pub use divisor::ArakelovDivisor;
pub use theta::H0Result;

