//! Exact evaluation of the exponent and degree conditions.
//!
//! Inequalities involving √(d² + 4(2r−1)d + 4) are decided by squaring after
//! a sign check, in big-integer arithmetic. Each result also carries a
//! decimal margin, computed from a 10⁻¹⁸-accurate rational square root, for
//! display only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::algebra::{fmt_rational, Rational};

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

fn to_rational(x: &BigRational) -> Option<Rational> {
    Some(Rational::new(x.numer().to_i64()?, x.denom().to_i64()?))
}

/// √x as a rational within 10⁻¹⁸.
fn approx_sqrt(x: &BigInt) -> BigRational {
    let scale = BigInt::from(10u64).pow(18);
    let root = (x * &scale * &scale).sqrt();
    BigRational::new(root, scale)
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// One evaluated inequality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionResult {
    pub name: &'static str,
    pub holds: bool,
    /// (right side) − (left side), for display.
    pub margin: f64,
}

/// Values certified when a condition holds, for every 2 ≤ n ≤ d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqualityClaim {
    pub condition: &'static str,
    #[serde(serialize_with = "crate::approx::ser_rational")]
    pub w_star: Rational,
    #[serde(serialize_with = "crate::approx::ser_rational")]
    pub w: Rational,
    pub d: u64,
}

impl EqualityClaim {
    pub fn describe(&self) -> String {
        format!(
            "w_n* = {}, w_n = {} for 2 <= n <= {} ({})",
            fmt_rational(&self.w_star),
            fmt_rational(&self.w),
            self.d,
            self.condition
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub results: Vec<ConditionResult>,
    pub claims: Vec<EqualityClaim>,
}

/// a (d + √D) ≤ b with D = d² + 4(2r−1)d + 4.
fn sqrt_condition(name: &'static str, a: &BigInt, b: &BigInt, r: u64, d: u64) -> ConditionResult {
    let disc = big(d * d) + big(4 * (2 * r - 1) * d) + big(4);
    let rhs = b - a * big(d);
    let holds = !rhs.is_negative() && a * a * &disc <= &rhs * &rhs;
    let lhs_approx = BigRational::from_integer(a.clone()) * (BigRational::from_integer(big(d)) + approx_sqrt(&disc));
    let margin = to_f64(&(BigRational::from_integer(b.clone()) - lhs_approx));
    ConditionResult { name, holds, margin }
}

/// E = r(r−1)(r−4) / (2 r s + (r−1)(r−2)), with s = k+1 or ℓ.
fn correction(r: u64, s: u64, factor: i64) -> BigRational {
    let r_ = BigInt::from(r as i64);
    let num = &r_ * (&r_ - 1) * (&r_ - BigInt::from(factor));
    let den = BigInt::from(2) * &r_ * BigInt::from(s) + (&r_ - 1) * (&r_ - 2);
    BigRational::new(num, den)
}

/// 2rd ≤ (r − 2 − E)(r − d − E)
fn product_condition(name: &'static str, r: u64, s: u64, d: u64) -> ConditionResult {
    let e = correction(r, s, 4);
    let rr = BigRational::from_integer(big(r));
    let dd = BigRational::from_integer(big(d));
    let two = BigRational::from_integer(big(2));
    let lhs = &two * &rr * &dd;
    let rhs = (&rr - &two - &e) * (&rr - &dd - &e);
    ConditionResult {
        name,
        holds: lhs <= rhs,
        margin: to_f64(&(rhs - lhs)),
    }
}

fn tail_values(r: u64, s: u64) -> (BigRational, BigRational) {
    let rr = BigRational::from_integer(big(r));
    let w_star = &rr - BigRational::one() - correction(r, s, 4);
    let w = &rr - correction(r, s, 3);
    (w_star, w)
}

/// Conditions for Θ_k^t(λ) at a given d: the (k+1)-branch and the tail branch.
pub fn theta_conditions(r: u64, k: u64, d: u64) -> ConditionReport {
    let c1 = sqrt_condition("theta_alpha", &big(k + 1), &big(2 * (r - 1)), r, d);
    let c2 = product_condition("theta_beta", r, k + 1, d);
    let mut claims = Vec::new();
    if c1.holds {
        let w_star = Rational::new((r - 1) as i64, (k + 1) as i64);
        claims.push(EqualityClaim {
            condition: "theta_alpha",
            w_star,
            w: w_star + 1,
            d,
        });
    }
    if c2.holds {
        let (ws, w) = tail_values(r, k + 1);
        if let (Some(w_star), Some(w)) = (to_rational(&ws), to_rational(&w)) {
            claims.push(EqualityClaim {
                condition: "theta_beta",
                w_star,
                w,
                d,
            });
        }
    }
    ConditionReport {
        results: vec![c1, c2],
        claims,
    }
}

/// Conditions for Φ_ℓ^t: part (1) with its m, part (2).
pub fn phi_conditions(r: u64, ell: u64, m: Option<u64>, part2: bool, d: u64) -> ConditionReport {
    let mut results = Vec::new();
    let mut claims = Vec::new();
    if let Some(m) = m {
        let c3 = sqrt_condition("phi_alpha", &big(ell), &big(2 * m * (r - 1)), r, d);
        if c3.holds {
            let w_star = Rational::new((m * (r - 1)) as i64, ell as i64);
            claims.push(EqualityClaim {
                condition: "phi_alpha",
                w_star,
                w: w_star + 1,
                d,
            });
        }
        results.push(c3);
    }
    if part2 {
        let c7 = product_condition("phi_beta", r, ell, d);
        if c7.holds {
            let (ws, w) = tail_values(r, ell);
            if let (Some(w_star), Some(w)) = (to_rational(&ws), to_rational(&w)) {
                claims.push(EqualityClaim {
                    condition: "phi_beta",
                    w_star,
                    w,
                    d,
                });
            }
        }
        results.push(c7);
    }
    ConditionReport { results, claims }
}

/// r ≥ (3n + 2 + √(9n² + 4n + 4)) / 2
pub fn neq_condition(r: u64, n: u64) -> ConditionResult {
    let lhs = BigInt::from(2 * r as i64 - 3 * n as i64 - 2);
    let disc = big(9 * n * n + 4 * n + 4);
    let holds = !lhs.is_negative() && &lhs * &lhs >= disc;
    let threshold =
        (BigRational::from_integer(big(3 * n + 2)) + approx_sqrt(&disc)) / BigRational::from_integer(big(2));
    let margin = to_f64(&(BigRational::from_integer(big(r)) - threshold));
    ConditionResult {
        name: "neq",
        holds,
        margin,
    }
}

/// 2dθ ≤ (d − 2 + δ)δ
pub fn approximation_condition(d: u64, theta: &BigRational, delta: &BigRational) -> bool {
    let dd = BigRational::from_integer(big(d));
    let two = BigRational::from_integer(big(2));
    &two * &dd * theta <= (&dd - &two + delta) * delta
}

/// Degree condition for Θ: k = 0 or 2r(k+1) > (r² − 4r + 2)(r − 1).
pub fn theta_degree_condition(r: u64, k: u64) -> bool {
    let r = r as i128;
    k == 0 || 2 * r * (k as i128 + 1) > (r * r - 4 * r + 2) * (r - 1)
}

/// Degree condition for Φ part (1): m(r−1) > ℓ(r−2).
pub fn phi_degree_condition_part1(r: u64, ell: u64, m: u64) -> bool {
    (m as i128) * (r as i128 - 1) > (ell as i128) * (r as i128 - 2)
}

/// Degree condition for Φ part (2): 2rℓ > (r² − 4r + 2)(r − 1).
pub fn phi_degree_condition_part2(r: u64, ell: u64) -> bool {
    let r = r as i128;
    2 * r * ell as i128 > (r * r - 4 * r + 2) * (r - 1)
}
