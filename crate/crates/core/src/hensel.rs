//! Newton lifting of simple roots in F_q((1/T)), used to cross-check the
//! continued fraction expansions of the family roots.

use thiserror::Error;

use crate::algebra::XPoly;
use crate::hyperfamilies::HyperquadraticEquation;
use crate::laurent::{Laurent, LaurentError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HenselError {
    #[error("seed violates |P(x)| < |P'(x)|^2 (residual exponent {residual}, derivative exponent {derivative})")]
    SeedNotConvergent { residual: i64, derivative: i64 },
    #[error("residual valuation stalled at {0}")]
    Stalled(i64),
    #[error("derivative vanishes at the seed to precision {0}")]
    DerivativeVanishes(i64),
    #[error(transparent)]
    Series(#[from] LaurentError),
}

/// Something that can be evaluated, together with its derivative, at a series.
pub trait RootEquation {
    fn value(&self, x: &Laurent) -> Result<Laurent, LaurentError>;
    fn derivative(&self, x: &Laurent) -> Result<Laurent, LaurentError>;
    /// Largest T-degree of a coefficient; sizes the working precision margin.
    fn coefficient_degree(&self) -> i64;
}

impl RootEquation for XPoly {
    fn value(&self, x: &Laurent) -> Result<Laurent, LaurentError> {
        Ok(Laurent::eval_xpoly(self, x))
    }

    fn derivative(&self, x: &Laurent) -> Result<Laurent, LaurentError> {
        Ok(Laurent::eval_xpoly(&XPoly::derivative(self), x))
    }

    fn coefficient_degree(&self) -> i64 {
        self.height_exp().map_or(0, |d| d as i64)
    }
}

impl RootEquation for HyperquadraticEquation {
    fn value(&self, x: &Laurent) -> Result<Laurent, LaurentError> {
        self.eval(x)
    }

    fn derivative(&self, x: &Laurent) -> Result<Laurent, LaurentError> {
        self.eval_derivative(x)
    }

    fn coefficient_degree(&self) -> i64 {
        self.height_exp()
    }
}

/// Starting point for [`newton_lift`].
pub struct LiftSeed<'a, E: RootEquation + ?Sized> {
    pub approx: Laurent,
    pub poly: &'a E,
}

#[derive(Clone, Debug)]
pub struct Lift {
    /// The root, valid below `target_prec`.
    pub root: Laurent,
    /// Valuation of P at each Newton iterate (strictly increasing).
    pub residual_valuations: Vec<i64>,
}

const MAX_STEPS: usize = 64;

/// Lifts the seed to a root known to precision `target_prec`.
pub fn newton_lift<E: RootEquation + ?Sized>(seed: LiftSeed<'_, E>, target_prec: i64) -> Result<Lift, HenselError> {
    let poly = seed.poly;
    let mut margin = 64 + 2 * poly.coefficient_degree() + 2 * seed.approx.abs_bound().abs();
    let mut x = seed.approx;
    let mut vals: Vec<i64> = Vec::new();

    for _ in 0..MAX_STEPS {
        let work = target_prec + margin;
        let xe = x.extend_exact(work);
        let d = poly.derivative(&xe)?;
        if d.is_zero() {
            return Err(HenselError::DerivativeVanishes(d.prec()));
        }
        let b = d.abs_bound();
        let v = poly.value(&xe)?;
        let a = v.lead();
        if vals.is_empty() && a + 2 * b <= 0 {
            return Err(HenselError::SeedNotConvergent {
                residual: -a,
                derivative: b,
            });
        }
        // |x − root| = |P(x)/P′(x)|, so x is correct below index a + b
        if a + b >= target_prec {
            return Ok(Lift {
                root: xe.truncate(target_prec),
                residual_valuations: vals,
            });
        }
        if v.is_zero() {
            // the residual vanishes to working precision; widen the margin
            margin *= 2;
            continue;
        }
        if let Some(&last) = vals.last() {
            if a <= last {
                return Err(HenselError::Stalled(a));
            }
        }
        vals.push(a);
        x = xe.sub(&v.div(&d)?);
    }
    Err(HenselError::Stalled(vals.last().copied().unwrap_or(i64::MIN)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, Fq, Poly};
    use crate::contfrac::{eval_cf, Letters, Word};
    use crate::quadratic::quad_from_periodic_cf;
    use proptest::prelude::*;

    #[test]
    fn large_root_of_golden_quadratic() {
        let f = Field::new(2, 1).unwrap();
        let p = XPoly::new(&f, vec![Poly::one(&f), Poly::t(&f), Poly::one(&f)]);
        let seed = Laurent::from_poly(&Poly::t(&f), 3);
        let lift = newton_lift(LiftSeed { approx: seed, poly: &p }, 200).unwrap();
        let small = quad_from_periodic_cf(&Word::empty(), &Word::single(Poly::t(&f)).unwrap()).unwrap();
        let expected = small.series(200).unwrap().add_poly(&Poly::t(&f));
        assert_eq!(lift.root, expected);
        assert!(lift.residual_valuations.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn double_root_is_detected() {
        let f = Field::new(3, 1).unwrap();
        // (X − T)^2
        let t = Poly::t(&f);
        let p = XPoly::new(&f, vec![&t * &t, t.scale(f.from_int(-2)), Poly::one(&f)]);
        let seed = Laurent::from_poly(&t, 10);
        assert!(matches!(
            newton_lift(LiftSeed { approx: seed, poly: &p }, 50),
            Err(HenselError::DerivativeVanishes(_))
        ));
    }

    #[test]
    fn seed_far_from_roots_is_rejected() {
        let f = Field::new(2, 1).unwrap();
        // X^2 + X + T at x = 0: |P| = q while |P'| = 1
        let p = XPoly::new(&f, vec![Poly::t(&f), Poly::one(&f), Poly::one(&f)]);
        let r = newton_lift(
            LiftSeed {
                approx: Laurent::zero(&f, 5),
                poly: &p,
            },
            50,
        );
        assert!(matches!(
            r,
            Err(HenselError::SeedNotConvergent {
                residual: 1,
                derivative: 0
            })
        ));
    }

    fn arb_letter(f: Field) -> impl Strategy<Value = Poly> {
        let q = f.size() as u16;
        (1usize..=2, proptest::collection::vec(0..q, 2), 1..q).prop_map(move |(d, low, lead)| {
            let mut c: Vec<Fq> = low.into_iter().map(Fq).take(d).collect();
            c.push(Fq(lead));
            Poly::new(&f, c)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn lifting_reproduces_periodic_expansions(
            pre in proptest::collection::vec(arb_letter(Field::new(2, 2).unwrap()), 0..=3),
            per in proptest::collection::vec(arb_letter(Field::new(2, 2).unwrap()), 1..=3),
        ) {
            let a = quad_from_periodic_cf(&Word::new(pre).unwrap(), &Word::new(per).unwrap()).unwrap();
            let cf = a.cf();
            let seed = eval_cf(&cf, Letters::Count(4), 40).unwrap();
            let lift = newton_lift(LiftSeed { approx: seed, poly: &a.minpoly_x() }, 300).unwrap();
            prop_assert_eq!(lift.root, a.series(300).unwrap());
        }
    }
}
