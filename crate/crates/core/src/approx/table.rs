//! Exact exponent records for a sequence of quadratic approximants.

use serde::Serialize;

use crate::algebra::{abs_diff, AbsExponent, Rational};
use crate::contfrac::{cf_disagreement, cf_distance_at, ContinuedFraction};

use super::sequences::Approximant;
use super::ApproxError;

/// One row of an exponent table. Exponents are base q; the ratios follow the
/// −log convention, so a good approximation has a large `dist_ratio`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentRecord {
    pub n: u32,
    pub shared_letters: usize,
    /// log_q |ξ − α_n|
    pub dist_exp: AbsExponent,
    /// log_q H(α_n)
    pub height_exp: i64,
    /// log_q |α_n − α_n′|
    pub gap_exp: AbsExponent,
    #[serde(serialize_with = "super::ser_rational")]
    pub dist_ratio: Rational,
    /// Absent when α_n is inseparable.
    #[serde(serialize_with = "super::ser_opt_rational")]
    pub gap_ratio: Option<Rational>,
}

/// Measures each approximant against ξ. The shared prefix length predicted
/// by the construction is checked letter by letter first.
pub fn exponent_table(
    xi: &ContinuedFraction,
    approximants: &[Approximant],
) -> Result<Vec<ExponentRecord>, ApproxError> {
    let mut out: Vec<ExponentRecord> = Vec::with_capacity(approximants.len());
    for a in approximants {
        let cf = a.quad.cf();
        let dis = cf_disagreement(xi, &cf, a.shared + 1)?;
        if dis.shared != a.shared {
            return Err(ApproxError::PrefixMismatch {
                n: a.n,
                expected: a.shared,
                found: dis.shared,
            });
        }
        let dist_exp = cf_distance_at(xi, &cf, a.shared)?;
        debug_assert_eq!(dist_exp, dis.exponent);
        let height_exp = a.quad.height_exp();
        if height_exp <= 0 || out.last().is_some_and(|prev| prev.height_exp >= height_exp) {
            return Err(ApproxError::HeightsNotIncreasing { n: a.n });
        }
        let h = Rational::from_integer(height_exp);
        let dist = dist_exp.finite().expect("distinct expansions have finite distance");
        let gap_exp = a.quad.conjugate_gap();
        out.push(ExponentRecord {
            n: a.n,
            shared_letters: a.shared,
            dist_exp,
            height_exp,
            gap_exp,
            dist_ratio: -dist / h,
            gap_ratio: gap_exp.finite().map(|g| -g / h),
        });
    }
    Ok(out)
}

/// Closed-form limits of the two ratios for one approximant branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    #[serde(serialize_with = "super::ser_rational")]
    pub dist: Rational,
    #[serde(serialize_with = "super::ser_rational")]
    pub gap: Rational,
}

impl Limits {
    /// α-type branch: dist → 1 + a/b, gap → 1.
    pub fn alpha(a: u64, b: u64) -> Limits {
        Limits {
            dist: Rational::new(a as i64, b as i64) + 1,
            gap: Rational::from_integer(1),
        }
    }

    /// β-type branch with s = k + 1 (Θ) or s = ℓ (Φ part 2).
    pub fn beta(r: u64, s: u64) -> Limits {
        let (r, s) = (r as i64, s as i64);
        let den = 2 * r * s + (r - 1) * (r - 2);
        Limits {
            dist: Rational::from_integer(r) - Rational::new(r * (r - 1) * (r - 4), den),
            gap: Rational::from_integer(1) - Rational::new(r * (r - 1), den),
        }
    }

    pub fn w2_star(&self) -> Rational {
        self.dist - 1
    }

    pub fn w2(&self) -> Rational {
        self.dist + self.gap - 1
    }
}

/// Lower bounds read off the last row of a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBounds {
    #[serde(serialize_with = "super::ser_rational")]
    pub w2_star_lower: Rational,
    #[serde(serialize_with = "super::ser_rational")]
    pub w2_lower: Rational,
    /// Set when the table has fewer than two rows.
    pub low_confidence: bool,
}

/// w₂* ≥ dist ratio − 1, and w₂ ≥ dist ratio − 1 + gap ratio. A negative
/// or missing gap ratio contributes nothing, which keeps w₂* ≤ w₂.
pub fn estimate_lower_bounds(table: &[ExponentRecord]) -> Option<LowerBounds> {
    let last = table.last()?;
    let w2_star_lower = last.dist_ratio - 1;
    let gap = last.gap_ratio.unwrap_or_default().max(Rational::from_integer(0));
    Some(LowerBounds {
        w2_star_lower,
        w2_lower: w2_star_lower + gap,
        low_confidence: table.len() < 2,
    })
}

/// |ratio(n) − L| never exceeds the distance of the first row to L.
pub fn envelope_holds(table: &[ExponentRecord], limit: Rational) -> bool {
    let Some(first) = table.first() else { return true };
    let bound = abs_diff(first.dist_ratio, limit);
    table.iter().all(|rec| abs_diff(rec.dist_ratio, limit) <= bound)
}
