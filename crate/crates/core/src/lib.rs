//! Exact-arithmetic toolkit for twisted loop algebras and twisted loop groups.
//!
//! The crate builds, from a simply-laced root system and a diagram automorphism,
//! the folded (twisted) root system, Chevalley structure constants with a
//! normalized sign table, the twisted loop algebra with its central extension,
//! Steinberg-style group words for the twisted loop group, exact matrix models
//! used as semantic oracles, and a constructive Euclidean decomposition of
//! `SU3` over a Laurent polynomial ring.
//!
//! Everything is computed over `Q` or `Q(xi)` with arbitrary-precision
//! rationals; there is no floating point anywhere.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod groupwords;
pub(crate) mod linalg;
pub mod loopalg;
pub mod matrep;
pub mod roots;
pub mod scalars;
pub mod su3;

use core::fmt;

/// Failure cases surfaced by constructors and partial operations.
///
/// Arithmetic on mismatched ground orders (`r`) is treated as a caller bug and
/// panics; foreign data is validated at the serialization boundary instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Division by zero in a scalar field.
    DivisionByZero,
    /// Inverse requested for a Laurent polynomial that is not a unit.
    NotAUnit,
    /// The requested system/rank/order combination is not supported.
    Unsupported(&'static str),
    /// A vector that was expected to be a root (or folded root) is not one.
    NotARoot,
    /// An affine root pair `(a', n)` lies outside the admissible index set.
    NotInOmega,
    /// A group-word payload does not satisfy its constructor constraints.
    InvalidPayload(&'static str),
    /// An internal consistency condition failed; indicates a bug.
    Internal(&'static str),
    /// The SU3 reduction could not make progress on a purported group element.
    Decomposition(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NotAUnit => write!(f, "not a unit"),
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
            Error::NotARoot => write!(f, "not a root of the system"),
            Error::NotInOmega => write!(f, "affine index outside the admissible set"),
            Error::InvalidPayload(what) => write!(f, "invalid payload: {what}"),
            Error::Internal(what) => write!(f, "internal invariant failed: {what}"),
            Error::Decomposition(what) => write!(f, "decomposition failed: {what}"),
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
