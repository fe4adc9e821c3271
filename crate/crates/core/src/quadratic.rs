//! Quadratic elements of F_q((1/T)) given by ultimately periodic continued
//! fractions.

use thiserror::Error;

use crate::algebra::{AbsExponent, AlgebraError, Field, Fq, Poly, Rational, XPoly};
use crate::contfrac::{eval_cf, CfError, ContinuedFraction, ConvergentState, Letters, Word};
use crate::laurent::{Laurent, LaurentError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadraticError {
    #[error("periodic part must be nonempty")]
    EmptyPeriod,
    #[error("continued fraction does not define a quadratic element")]
    NotQuadratic,
    #[error("the element is inseparable, so its conjugate is itself")]
    Inseparable,
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Series(#[from] LaurentError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// α = [a_0; preperiod, period, period, ...] with minimal polynomial
/// A X^2 + B X + C, primitive and with A monic in T.
#[derive(Clone, Debug)]
pub struct QuadraticNumber {
    a0: Poly,
    preperiod: Word,
    period: Word,
    minpoly: [Poly; 3],
    height_exp: i64,
    insep: u8,
    conj_gap_exp: AbsExponent,
}

/// [0; pre, \overline{per}]
pub fn quad_from_periodic_cf(pre: &Word, per: &Word) -> Result<QuadraticNumber, QuadraticError> {
    let field = per
        .letters()
        .first()
        .ok_or(QuadraticError::EmptyPeriod)?
        .field()
        .clone();
    QuadraticNumber::from_periodic_cf(Poly::zero(&field), pre, per)
}

impl QuadraticNumber {
    pub fn from_periodic_cf(a0: Poly, pre: &Word, per: &Word) -> Result<QuadraticNumber, QuadraticError> {
        if per.is_empty() {
            return Err(QuadraticError::EmptyPeriod);
        }
        let field = a0.field().clone();
        let minpoly = minimal_polynomial(&a0, pre.letters(), per.letters())?;
        let [a, b, c] = &minpoly;
        let height_exp = [a, b, c].iter().map(|x| x.deg_i64()).max().unwrap();
        let p2 = field.characteristic() == 2;
        let insep = if p2 && b.is_zero() { 2 } else { 1 };
        let conj_gap_exp = if insep == 2 {
            AbsExponent::NegInf
        } else if p2 {
            AbsExponent::int(b.deg_i64() - a.deg_i64())
        } else {
            let four = field.from_int(4);
            let disc = &(b * b) - &(a * c).scale(four);
            if disc.is_zero() {
                return Err(QuadraticError::NotQuadratic);
            }
            AbsExponent::Finite(Rational::new(disc.deg_i64() - 2 * a.deg_i64(), 2))
        };
        Ok(QuadraticNumber {
            a0,
            preperiod: pre.clone(),
            period: per.clone(),
            minpoly,
            height_exp,
            insep,
            conj_gap_exp,
        })
    }

    /// Builds from a continued fraction with a periodic tail.
    pub fn from_cf(cf: &ContinuedFraction) -> Result<QuadraticNumber, QuadraticError> {
        match cf.tail() {
            crate::contfrac::Tail::Periodic { pre, per } => {
                QuadraticNumber::from_periodic_cf(cf.a0().clone(), pre, per)
            }
            _ => Err(QuadraticError::NotQuadratic),
        }
    }

    pub fn field(&self) -> &Field {
        self.a0.field()
    }

    pub fn a0(&self) -> &Poly {
        &self.a0
    }

    pub fn preperiod(&self) -> &Word {
        &self.preperiod
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    /// (A, B, C)
    pub fn minpoly(&self) -> &[Poly; 3] {
        &self.minpoly
    }

    pub fn minpoly_x(&self) -> XPoly {
        XPoly::new(
            self.field(),
            vec![
                self.minpoly[2].clone(),
                self.minpoly[1].clone(),
                self.minpoly[0].clone(),
            ],
        )
    }

    /// log_q H(α)
    pub fn height_exp(&self) -> i64 {
        self.height_exp
    }

    /// 2 exactly when p = 2 and B = 0.
    pub fn insep(&self) -> u8 {
        self.insep
    }

    /// Exponent of |α − α′|.
    pub fn conjugate_gap(&self) -> AbsExponent {
        self.conj_gap_exp
    }

    pub fn cf(&self) -> ContinuedFraction {
        ContinuedFraction::periodic(self.a0.clone(), self.preperiod.clone(), self.period.clone())
            .expect("period is nonempty")
    }

    /// Exponent of |α|, read off the expansion.
    pub fn abs_exp(&self) -> i64 {
        if !self.a0.is_zero() {
            return self.a0.deg_i64();
        }
        let first = self.preperiod.letters().first().unwrap_or(&self.period.letters()[0]);
        -first.deg_i64()
    }

    /// Exponent of |α′| from Vieta: α α′ = C/A.
    pub fn conjugate_abs_exp(&self) -> AbsExponent {
        let [a, _, c] = &self.minpoly;
        if c.is_zero() {
            return AbsExponent::NegInf;
        }
        AbsExponent::int(c.deg_i64() - a.deg_i64() - self.abs_exp())
    }

    pub fn series(&self, prec: i64) -> Result<Laurent, QuadraticError> {
        Ok(eval_cf(&self.cf(), Letters::All, prec)?)
    }

    /// α′ = −B/A − α, valid to `prec`.
    pub fn conjugate_series(&self, prec: i64) -> Result<Laurent, QuadraticError> {
        if self.insep == 2 {
            return Err(QuadraticError::Inseparable);
        }
        let [a, b, _] = &self.minpoly;
        let sum = Laurent::from_rational(&-b, a, prec)?;
        Ok(sum.sub(&self.series(prec)?))
    }

    /// Compares log_q H(α) with |A| + max(0, |α|) + max(0, |α′|).
    pub fn mahler_height_check(&self) -> Result<MahlerReport, QuadraticError> {
        if self.insep == 2 {
            return Err(QuadraticError::Inseparable);
        }
        let zero = AbsExponent::int(0);
        let rhs = AbsExponent::int(self.minpoly[0].deg_i64())
            + AbsExponent::int(self.abs_exp()).max(zero)
            + self.conjugate_abs_exp().max(zero);
        let lhs = AbsExponent::int(self.height_exp);
        Ok(MahlerReport {
            height_exp: lhs,
            product_exp: rhs,
            holds: lhs == rhs,
        })
    }

    /// "(A;B;C)"
    pub fn encode_minpoly(&self) -> String {
        let [a, b, c] = &self.minpoly;
        format!("({};{};{})", a.encode(), b.encode(), c.encode())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MahlerReport {
    pub height_exp: AbsExponent,
    pub product_exp: AbsExponent,
    pub holds: bool,
}

fn minimal_polynomial(a0: &Poly, pre: &[Poly], per: &[Poly]) -> Result<[Poly; 3], QuadraticError> {
    let field = a0.field();
    // β = [b_1; b_2, ..., b_s, β] gives Q_{s-1} β^2 + (Q_{s-2} − P_{s-1}) β − P_{s-2} = 0.
    let st = ConvergentState::from_letters(&per[0], &per[1..]);
    let beta = [st.q.clone(), &st.q_prev - &st.p, -&st.p_prev];
    let content = beta[0].gcd(&beta[1]).gcd(&beta[2]);
    let beta = beta.map(|c| c.div_exact(&content).expect("content divides"));

    // α = [a_0; pre, β], so β = u/v with u = p_{r-1} − q_{r-1} X and v = q_r X − p_r.
    let tr = ConvergentState::from_letters(a0, pre);
    let u = XPoly::new(field, vec![tr.p_prev.clone(), -&tr.q_prev]);
    let v = XPoly::new(field, vec![-&tr.p, tr.q.clone()]);
    let poly = u
        .mul(&u)
        .scale(&beta[0])
        .add(&u.mul(&v).scale(&beta[1]))
        .add(&v.mul(&v).scale(&beta[2]));
    if poly.degree() != Some(2) {
        return Err(QuadraticError::NotQuadratic);
    }
    // the transport matrix has determinant ±1, so the content stays 1
    let lead = poly.leading().leading();
    let unit: Fq = field.inv(lead).expect("leading coefficient is nonzero");
    let poly = poly.scale_const(unit);
    Ok([poly.coeff(2), poly.coeff(1), poly.coeff(0)])
}
