//! Verdicts: exponent bounds, equality claims and algebraic degree.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Field, Fq, Rational};
use crate::contfrac::ContinuedFraction;
use crate::hyperfamilies::{phi_reciprocal_letters, theta_letters, PhiParams, ThetaParams};

use super::conditions::{
    neq_condition, phi_conditions, phi_degree_condition_part1, phi_degree_condition_part2, theta_conditions,
    theta_degree_condition, ConditionReport, ConditionResult, EqualityClaim,
};
use super::sequences::{
    phi_alpha_n, phi_beta_n, phi_part1_m, phi_part2_lambda, theta_alpha_n, theta_beta_n, Approximant, Branch,
};
use super::table::{envelope_holds, estimate_lower_bounds, exponent_table, ExponentRecord, Limits, LowerBounds};
use super::ApproxError;

#[derive(Clone, Debug)]
pub enum Family {
    Theta(ThetaParams),
    Phi(PhiParams),
}

impl Family {
    pub fn field(&self) -> &Field {
        match self {
            Family::Theta(p) => p.field(),
            Family::Phi(p) => p.field(),
        }
    }

    pub fn r(&self) -> u64 {
        match self {
            Family::Theta(p) => p.r(),
            Family::Phi(p) => p.r(),
        }
    }

    pub fn is_periodic(&self) -> bool {
        match self {
            Family::Theta(p) => p.is_periodic(),
            Family::Phi(p) => p.is_periodic(),
        }
    }

    /// The expansion the approximants are measured against. For Φ this is
    /// 1/Φ, whose partial quotients are those of Φ shifted by one.
    pub fn target(&self) -> ContinuedFraction {
        match self {
            Family::Theta(p) => theta_letters(p),
            Family::Phi(p) => phi_reciprocal_letters(p),
        }
    }

    /// Stable textual identifier, e.g. `theta(p=2,s=3,t=1,k=0,lambda=g^1)`.
    pub fn describe(&self) -> String {
        let f = self.field();
        let head = format!("p={},s={}", f.characteristic(), f.degree());
        match self {
            Family::Theta(p) => {
                format!("theta({head},t={},k={},lambda={})", p.t(), p.k(), f.format(p.lambda()))
            }
            Family::Phi(p) => {
                let ls: Vec<String> = p.lambdas().iter().map(|&l| f.format(l)).collect();
                let (e1, e2) = p.eps();
                format!(
                    "phi({head},t={},lambdas=[{}],eps=({},{}))",
                    p.t(),
                    ls.join(","),
                    f.format(e1),
                    f.format(e2)
                )
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeVerdict {
    /// Exact degree when decided.
    pub degree: Option<u64>,
    pub upper_bound: u64,
    /// "periodic", "corollary", "measured" or "undetermined".
    pub tag: &'static str,
}

fn phi_degree_condition(p: &PhiParams) -> bool {
    let (r, ell) = (p.r(), p.ell() as u64);
    let part1 = phi_part1_m(p).is_ok_and(|m| phi_degree_condition_part1(r, ell, m as u64));
    let part2 = phi_part2_lambda(p).is_ok() && phi_degree_condition_part2(r, ell);
    part1 || part2
}

/// Periodic expansions are quadratic. Otherwise the degree is at most r + 1,
/// and equals it when the closed-form degree condition holds or when the measured lower
/// bound for w₂ already exceeds r − 1.
pub fn degree_verdict(family: &Family, w2_lower: Option<Rational>) -> DegreeVerdict {
    let r = family.r();
    if family.is_periodic() {
        return DegreeVerdict {
            degree: Some(2),
            upper_bound: 2,
            tag: "periodic",
        };
    }
    let by_condition = match family {
        Family::Theta(p) => theta_degree_condition(r, p.k() as u64),
        Family::Phi(p) => phi_degree_condition(p),
    };
    if by_condition {
        return DegreeVerdict {
            degree: Some(r + 1),
            upper_bound: r + 1,
            tag: "corollary",
        };
    }
    if w2_lower.is_some_and(|w| w > Rational::from_integer(r as i64 - 1)) {
        return DegreeVerdict {
            degree: Some(r + 1),
            upper_bound: r + 1,
            tag: "measured",
        };
    }
    DegreeVerdict {
        degree: None,
        upper_bound: r + 1,
        tag: "undetermined",
    }
}

/// Finite-n proxy for w₁ = limsup deg q_{m+1} / deg q_m: the maximum of the
/// ratio over the tail window ⌈n/2⌉ ≤ m < n. The window drops the first
/// indices, where the ratio (m+1)/m is large for every expansion.
pub fn w1_estimate(cf: &ContinuedFraction, n: usize) -> Result<Rational, ApproxError> {
    if n < 2 {
        return Err(ApproxError::InvalidIndex { n: n as u32, min: 2 });
    }
    let degs = cf.prefix_degrees(n)?;
    let mut q = Vec::with_capacity(n + 1);
    q.push(0i64);
    for d in degs {
        q.push(q.last().unwrap() + d as i64);
    }
    let best = (n.div_ceil(2)..n)
        .map(|m| Rational::new(q[m + 1], q[m]))
        .max()
        .expect("window is nonempty for n >= 2");
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchTable {
    pub branch: Branch,
    pub limits: Limits,
    pub records: Vec<ExponentRecord>,
    pub bounds: Option<LowerBounds>,
    /// Monotone convergence of the distance ratios toward `limits.dist`.
    pub envelope_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentVerdict {
    pub family: String,
    pub r: u64,
    pub n_range: (u32, u32),
    #[serde(serialize_with = "super::ser_rational")]
    pub w1_est: Rational,
    pub w1_letters: usize,
    #[serde(serialize_with = "super::ser_opt_rational")]
    pub w2_star_lower: Option<Rational>,
    #[serde(serialize_with = "super::ser_opt_rational")]
    pub w2_lower: Option<Rational>,
    pub low_confidence: bool,
    /// Largest closed-form limit of w₂* and w₂ over the branches measured.
    #[serde(serialize_with = "super::ser_opt_rational")]
    pub w2_star_limit: Option<Rational>,
    #[serde(serialize_with = "super::ser_opt_rational")]
    pub w2_limit: Option<Rational>,
    /// Both lower bounds are at most r, as an algebraic element of degree
    /// at most r + 1 requires. Finite-n values may overshoot the limit.
    pub within_degree_bound: bool,
    pub conditions: ConditionReport,
    pub equality_claim: Option<EqualityClaim>,
    pub degree_verdict: DegreeVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentReport {
    pub tables: Vec<BranchTable>,
    pub verdict: ExponentVerdict,
}

type Builder = fn(&Family, u32) -> Result<Approximant, ApproxError>;

fn branches(family: &Family) -> Result<Vec<(Branch, Limits, Builder)>, ApproxError> {
    let r = family.r();
    match family {
        Family::Theta(p) => {
            let s = p.k() as u64 + 1;
            let alpha: Builder = |f, n| match f {
                Family::Theta(p) => theta_alpha_n(p, n),
                Family::Phi(_) => unreachable!(),
            };
            let beta: Builder = |f, n| match f {
                Family::Theta(p) => theta_beta_n(p, n),
                Family::Phi(_) => unreachable!(),
            };
            Ok(vec![
                (Branch::Alpha, Limits::alpha(r - 1, s), alpha),
                (Branch::Beta, Limits::beta(r, s), beta),
            ])
        }
        Family::Phi(p) => {
            let ell = p.ell() as u64;
            let mut out = Vec::new();
            if let Ok(m) = phi_part1_m(p) {
                let alpha: Builder = |f, n| match f {
                    Family::Phi(p) => phi_alpha_n(p, n),
                    Family::Theta(_) => unreachable!(),
                };
                out.push((Branch::Alpha, Limits::alpha(m as u64 * (r - 1), ell), alpha));
            }
            if phi_part2_lambda(p).is_ok() {
                let beta: Builder = |f, n| match f {
                    Family::Phi(p) => phi_beta_n(p, n),
                    Family::Theta(_) => unreachable!(),
                };
                out.push((Branch::Beta, Limits::beta(r, ell), beta));
            }
            if out.is_empty() {
                return Err(ApproxError::HypothesisViolated(
                    "the parameters match neither approximant construction".into(),
                ));
            }
            Ok(out)
        }
    }
}

fn conditions_for(family: &Family, d: u64) -> ConditionReport {
    let r = family.r();
    match family {
        Family::Theta(p) => theta_conditions(r, p.k() as u64, d),
        Family::Phi(p) => {
            let m = phi_part1_m(p).ok().map(|m| m as u64);
            phi_conditions(r, p.ell() as u64, m, phi_part2_lambda(p).is_ok(), d)
        }
    }
}

/// Builds every approximant for n in `ns`, measures it against the target,
/// and combines the tables into a verdict. Conditions are evaluated at `d`;
/// w₁ is estimated from the first `w1_letters` partial quotients.
pub fn analyse(
    family: &Family,
    ns: RangeInclusive<u32>,
    d: u64,
    w1_letters: usize,
) -> Result<ExponentReport, ApproxError> {
    if ns.is_empty() {
        return Err(ApproxError::InvalidInput("empty n range".into()));
    }
    if d < 2 {
        return Err(ApproxError::InvalidInput("d must be at least 2".into()));
    }
    let target = family.target();
    let r = family.r();
    let mut tables = Vec::new();
    if !family.is_periodic() {
        for (branch, limits, build) in branches(family)? {
            let approximants: Vec<Approximant> = ns
                .clone()
                .into_par_iter()
                .map(|n| build(family, n))
                .collect::<Result<_, _>>()?;
            let records = exponent_table(&target, &approximants)?;
            let bounds = estimate_lower_bounds(&records);
            let envelope_ok = envelope_holds(&records, limits.dist);
            tables.push(BranchTable {
                branch,
                limits,
                records,
                bounds,
                envelope_ok,
            });
        }
    }

    let best = |get: fn(&LowerBounds) -> Rational| tables.iter().filter_map(|t| t.bounds.as_ref().map(get)).max();
    let w2_star_lower = best(|b| b.w2_star_lower);
    let w2_lower = best(|b| b.w2_lower);
    let low_confidence = tables.iter().any(|t| t.bounds.is_some_and(|b| b.low_confidence));
    let w2_star_limit = tables.iter().map(|t| t.limits.w2_star()).max();
    let w2_limit = tables.iter().map(|t| t.limits.w2()).max();
    let r_q = Rational::from_integer(r as i64);
    let within_degree_bound = w2_lower.is_none_or(|w| w <= r_q);
    let conditions = conditions_for(family, d);
    let equality_claim = conditions.claims.first().cloned();
    let verdict = ExponentVerdict {
        family: family.describe(),
        r,
        n_range: (*ns.start(), *ns.end()),
        w1_est: w1_estimate(&target, w1_letters)?,
        w1_letters,
        w2_star_lower,
        w2_lower,
        low_confidence,
        w2_star_limit,
        w2_limit,
        within_degree_bound,
        conditions,
        equality_claim,
        degree_verdict: degree_verdict(family, w2_lower),
    };
    Ok(ExponentReport { tables, verdict })
}

/// An explicit element with w_n ≠ w_n*.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeqWitness {
    pub family: String,
    pub n: u64,
    pub r: u64,
    pub condition: ConditionResult,
    #[serde(serialize_with = "super::ser_rational")]
    pub w_star: Rational,
    #[serde(serialize_with = "super::ser_rational")]
    pub w: Rational,
    pub degree: u64,
}

/// Θ_0^t(λ) with λ the first power of the generator outside {1, 2}. When
/// r ≥ (3n + 2 + √(9n² + 4n + 4))/2 it has w_n* = r − 1 and w_n = r.
pub fn neq_witness(field: &Field, t: u32, n: u64) -> Result<NeqWitness, ApproxError> {
    if field.size() < 4 {
        return Err(ApproxError::HypothesisViolated(format!(
            "q = {} is below 4",
            field.size()
        )));
    }
    if n < 2 {
        return Err(ApproxError::InvalidIndex { n: n as u32, min: 2 });
    }
    let two = field.from_int(2);
    let lambda: Fq = (1..field.size() as i64)
        .map(|i| field.gen_pow(i))
        .find(|&l| l != Fq::ONE && l != two)
        .expect("q >= 4 leaves a choice");
    let params = ThetaParams::new(field, t, 0, lambda).map_err(|e| ApproxError::InvalidInput(e.to_string()))?;
    let r = params.r();
    let condition = neq_condition(r, n);
    if !condition.holds {
        return Err(ApproxError::ConditionFailed {
            margin: condition.margin,
        });
    }
    let claim = theta_conditions(r, 0, n)
        .claims
        .into_iter()
        .find(|c| c.condition == "theta_alpha")
        .expect("the witness condition is the alpha condition at k = 0");
    let degree = degree_verdict(&Family::Theta(params.clone()), None)
        .degree
        .expect("k = 0 always satisfies the degree condition");
    Ok(NeqWitness {
        family: Family::Theta(params).describe(),
        n,
        r,
        condition,
        w_star: claim.w_star,
        w: claim.w,
        degree,
    })
}
