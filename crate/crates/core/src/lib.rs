//! Arithmetic of the eight class-number-one imaginary quadratic fields Q(√d),
//! their quadratic residue symbols and Gauss sums, and desk-scale one-level
//! density experiments for the family of quadratic Hecke characters
//! χ^(-4c_K c).
//!
//! Ring elements are generic over the integer type; `OkElt` is the
//! arbitrary-precision alias and `OkElt64` the fast one used in bulk sweeps.

pub mod analysis;
pub mod arith;
pub mod density;
pub mod error;
pub mod fields;
pub mod gauss;
pub mod num;
pub mod primes;
pub mod symbols;
pub mod verify;

pub use arith::{Elt, ResidueSystem};
pub use error::{Error, Result};
pub use fields::{field_params, FieldParams, Splitting, SUPPORTED_D};

/// Ring element with arbitrary-precision coordinates.
pub type OkElt = Elt<num_bigint::BigInt>;
/// Ring element with 64-bit coordinates.
pub type OkElt64 = Elt<i64>;
