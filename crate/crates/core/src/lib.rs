//! Hyperquadratic continued fractions over F_q((1/T)).
//!
//! The crate builds the two letter-stream families `Θ_k^t(λ)` and
//! `Φ_ℓ^t(λ; ε)`, checks their degree-(r+1) equations against truncated
//! Laurent series, measures quadratic approximation exponents as exact
//! rationals from ultimately periodic approximants, and evaluates the
//! exponent and degree conditions without floating point.
//!
//! Module map:
//!
//! * [`algebra`]: F_q, F_q[T], polynomials in X over F_q[T], resultants.
//! * [`laurent`]: truncated Laurent series in 1/T with tracked precision.
//! * [`contfrac`]: words, continued fractions, convergents, expansion.
//! * [`quadratic`]: quadratic elements given by periodic continued fractions.
//! * [`hyperfamilies`]: the Θ and Φ letter streams and their equations.
//! * [`approx`]: approximant sequences, exponent tables, conditions, verdicts.
//! * [`hensel`]: Newton lifting, used as an independent root oracle.

pub mod algebra;
pub mod approx;
pub mod contfrac;
pub mod hensel;
pub mod hyperfamilies;
pub mod laurent;
pub mod quadratic;

pub use algebra::{AbsExponent, Field, Fq, Poly, Rational, XPoly};

pub use contfrac::{ContinuedFraction, Word};
pub use laurent::Laurent;
pub use quadratic::QuadraticNumber;
