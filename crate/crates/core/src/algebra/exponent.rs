use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

/// Exact rational used for exponents and exponent ratios.
pub type Rational = Ratio<i64>;

/// Formats a rational as "num/den" in lowest terms.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// |x| = q^value, with `NegInf` standing for |0| = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AbsExponent {
    NegInf,
    Finite(Rational),
}

impl AbsExponent {
    pub fn int(v: i64) -> Self {
        AbsExponent::Finite(Rational::from_integer(v))
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, AbsExponent::NegInf)
    }

    pub fn finite(&self) -> Option<Rational> {
        match self {
            AbsExponent::NegInf => None,
            AbsExponent::Finite(r) => Some(*r),
        }
    }

    /// Integral value, if finite and integral.
    pub fn as_int(&self) -> Option<i64> {
        self.finite().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Exponent of max(1, |x|).
    pub fn max_one(self) -> Self {
        self.max(AbsExponent::int(0))
    }
}

impl Ord for AbsExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (AbsExponent::NegInf, AbsExponent::NegInf) => Ordering::Equal,
            (AbsExponent::NegInf, _) => Ordering::Less,
            (_, AbsExponent::NegInf) => Ordering::Greater,
            (AbsExponent::Finite(a), AbsExponent::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for AbsExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exponent of a product.
impl Add for AbsExponent {
    type Output = AbsExponent;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (AbsExponent::Finite(a), AbsExponent::Finite(b)) => AbsExponent::Finite(a + b),
            _ => AbsExponent::NegInf,
        }
    }
}

/// Exponent of a quotient; the divisor must be nonzero.
impl Sub for AbsExponent {
    type Output = AbsExponent;
    fn sub(self, rhs: Self) -> Self {
        match (self, rhs) {
            (_, AbsExponent::NegInf) => panic!("division by zero in exponent arithmetic"),
            (AbsExponent::NegInf, _) => AbsExponent::NegInf,
            (AbsExponent::Finite(a), AbsExponent::Finite(b)) => AbsExponent::Finite(a - b),
        }
    }
}

/// Exponent of the reciprocal.
impl Neg for AbsExponent {
    type Output = AbsExponent;
    fn neg(self) -> Self {
        match self {
            AbsExponent::NegInf => panic!("reciprocal of zero"),
            AbsExponent::Finite(a) => AbsExponent::Finite(-a),
        }
    }
}

impl fmt::Display for AbsExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsExponent::NegInf => write!(f, "-inf"),
            AbsExponent::Finite(r) => write!(f, "{}", fmt_rational(r)),
        }
    }
}

impl Serialize for AbsExponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Rational ratio a/b as an exact value; `None` if b is zero.
pub fn ratio(a: Rational, b: Rational) -> Option<Rational> {
    (!b.is_zero()).then(|| a / b)
}

/// |a - b| of two exact rationals.
pub fn abs_diff(a: Rational, b: Rational) -> Rational {
    (a - b).abs()
}
