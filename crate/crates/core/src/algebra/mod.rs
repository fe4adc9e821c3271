//! Exact arithmetic in F_q and F_q[T].

mod exponent;
mod field;
mod poly;
mod xpoly;

pub use exponent::{abs_diff, fmt_rational, ratio, AbsExponent, Rational};
pub use field::{Field, Fq, MAX_FIELD_SIZE};
pub use poly::Poly;
pub use xpoly::{resultant, XPoly};

pub(crate) use poly::{axpy, is_power_of, mul_slices};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field degree must be at least 1")]
    InvalidDegree,
    #[error("{p}^{s} exceeds the field size bound {bound}")]
    TooLarge { p: u64, s: u32, bound: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division")]
    NotDivisible,
    #[error("{r} is not a power of the characteristic {p}")]
    NotAPowerOfP { r: u64, p: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}
