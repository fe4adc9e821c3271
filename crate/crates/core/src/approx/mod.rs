//! Quadratic approximation exponents of the two families: approximant
//! sequences, exact exponent tables, condition evaluators and verdicts.

pub mod conditions;
pub mod sequences;
pub mod table;
pub mod verdict;

use serde::Serializer;
use thiserror::Error;

use crate::algebra::{fmt_rational, Rational};
use crate::contfrac::CfError;
use crate::quadratic::QuadraticError;

pub use conditions::{
    approximation_condition, neq_condition, phi_conditions, phi_degree_condition_part1, phi_degree_condition_part2,
    theta_conditions, theta_degree_condition, ConditionReport, ConditionResult, EqualityClaim,
};
pub use sequences::{
    phi_alpha_n, phi_beta_n, phi_beta_n_plain, phi_index, phi_part1_m, phi_part2_lambda, theta_alpha_n, theta_beta_n,
    theta_beta_n_plain, Approximant, Branch,
};
pub use table::{envelope_holds, estimate_lower_bounds, exponent_table, ExponentRecord, Limits, LowerBounds};
pub use verdict::{
    analyse, degree_verdict, neq_witness, w1_estimate, BranchTable, DegreeVerdict, ExponentReport, ExponentVerdict,
    Family, NeqWitness,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApproxError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("index n = {n} is below the minimum {min}")]
    InvalidIndex { n: u32, min: u32 },
    #[error("approximant would need {letters} partial quotients")]
    TooLarge { letters: u128 },
    #[error("approximant {n} shares {found} partial quotients with the target, expected {expected}")]
    PrefixMismatch { n: u32, expected: usize, found: usize },
    #[error("heights do not increase at index {n}")]
    HeightsNotIncreasing { n: u32 },
    #[error("condition fails with margin {margin}")]
    ConditionFailed { margin: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Quadratic(#[from] QuadraticError),
    #[error(transparent)]
    Cf(#[from] CfError),
}

/// Serializes a rational as "num/den" in lowest terms.
pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

pub(crate) fn ser_opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&fmt_rational(r)),
        None => s.serialize_none(),
    }
}
