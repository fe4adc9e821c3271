//! Truncated Laurent series in T^{-1} with explicit precision.
//!
//! A [`Laurent`] value stands for Σ_{n ≥ N} a_n T^{-n} where only the
//! coefficients with index n < prec are known. Every operation returns the
//! largest precision it can prove; coefficients past that bound are never
//! produced.

use std::fmt;

use thiserror::Error;

use crate::algebra::{axpy, is_power_of, mul_slices, AbsExponent, Field, Fq, Poly, XPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("series is zero to precision {0}")]
    ZeroToPrecision(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision {prec} does not cover index {needed}")]
    InsufficientPrecision { prec: i64, needed: i64 },
    #[error("{0} is not a power of the characteristic")]
    NotAPowerOfP(u64),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Laurent {
    field: Field,
    // index of the first stored coefficient; equals `prec` for the zero series
    lead: i64,
    coeffs: Vec<Fq>,
    prec: i64,
}

/// Alias matching the usual mathematical name.
pub type LaurentSeries = Laurent;

impl Laurent {
    fn from_parts(field: &Field, lead: i64, mut coeffs: Vec<Fq>, prec: i64) -> Laurent {
        debug_assert_eq!(coeffs.len() as i64, (prec - lead).max(0));
        let skip = coeffs.iter().take_while(|c| c.is_zero()).count();
        if skip == coeffs.len() {
            return Laurent::zero(field, prec);
        }
        coeffs.drain(..skip);
        Laurent {
            field: field.clone(),
            lead: lead + skip as i64,
            coeffs,
            prec,
        }
    }

    /// The series known to vanish at every index below `prec`.
    pub fn zero(field: &Field, prec: i64) -> Laurent {
        Laurent {
            field: field.clone(),
            lead: prec,
            coeffs: Vec::new(),
            prec,
        }
    }

    /// Builds from a coefficient list starting at index `lead`, valid below `prec`.
    pub fn new(field: &Field, lead: i64, mut coeffs: Vec<Fq>, prec: i64) -> Laurent {
        coeffs.resize((prec - lead).max(0) as usize, Fq::ZERO);
        if prec <= lead {
            return Laurent::zero(field, prec);
        }
        Laurent::from_parts(field, lead, coeffs, prec)
    }

    pub fn from_poly(poly: &Poly, prec: i64) -> Laurent {
        let field = poly.field();
        let Some(d) = poly.degree() else {
            return Laurent::zero(field, prec);
        };
        let lead = -(d as i64);
        if prec <= lead {
            return Laurent::zero(field, prec);
        }
        let coeffs = (lead..prec)
            .map(|n| if n <= 0 { poly.coeff((-n) as usize) } else { Fq::ZERO })
            .collect();
        Laurent::from_parts(field, lead, coeffs, prec)
    }

    /// Long-division expansion of num/den, valid below `prec`.
    pub fn from_rational(num: &Poly, den: &Poly, prec: i64) -> Result<Laurent, LaurentError> {
        let field = den.field().clone();
        let dd = den.degree().ok_or(LaurentError::DivisionByZero)?;
        let Some(dn) = num.degree() else {
            return Ok(Laurent::zero(&field, prec));
        };
        let lead = dd as i64 - dn as i64;
        if prec <= lead {
            return Ok(Laurent::zero(&field, prec));
        }
        let len = (prec - lead) as usize;
        // power series in y = 1/T: num_rev(y) / den_rev(y)
        let num_rev: Vec<Fq> = num.coeffs().iter().rev().copied().collect();
        let den_rev: Vec<Fq> = den.coeffs().iter().rev().copied().collect();
        let inv0 = field.inv(den_rev[0]).expect("nonzero leading coefficient");
        let mut out = vec![Fq::ZERO; len];
        let mut work: Vec<Fq> = (0..len).map(|j| num_rev.get(j).copied().unwrap_or(Fq::ZERO)).collect();
        let neg_den: Vec<Fq> = den_rev.iter().map(|&c| field.neg(c)).collect();
        for j in 0..len {
            let c = field.mul(work[j], inv0);
            out[j] = c;
            if !c.is_zero() {
                let end = (j + neg_den.len()).min(len);
                axpy(&field, &mut work[..end], j, c, &neg_den);
            }
        }
        Ok(Laurent::from_parts(&field, lead, out, prec))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Coefficients are valid for indices below this bound.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Index N of the first nonzero coefficient (`prec` for the zero series).
    pub fn lead(&self) -> i64 {
        self.lead
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of T^{-n}; `None` past the precision bound.
    pub fn coefficient(&self, n: i64) -> Option<Fq> {
        if n >= self.prec {
            return None;
        }
        if n < self.lead {
            return Some(Fq::ZERO);
        }
        Some(self.coeffs[(n - self.lead) as usize])
    }

    /// Drops coefficients at index >= prec.
    pub fn truncate(&self, prec: i64) -> Laurent {
        if prec >= self.prec {
            return self.clone();
        }
        if prec <= self.lead {
            return Laurent::zero(&self.field, prec);
        }
        let coeffs = self.coeffs[..(prec - self.lead) as usize].to_vec();
        Laurent::from_parts(&self.field, self.lead, coeffs, prec)
    }

    /// Treats the known coefficients as an exact element and pads with zeros
    /// up to `prec`.
    pub fn extend_exact(&self, prec: i64) -> Laurent {
        if prec <= self.prec {
            return self.truncate(prec);
        }
        if self.is_zero() {
            return Laurent::zero(&self.field, prec);
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize((prec - self.lead) as usize, Fq::ZERO);
        Laurent {
            field: self.field.clone(),
            lead: self.lead,
            coeffs,
            prec,
        }
    }

    /// |x| = q^{-N}.
    pub fn abs(&self) -> Result<AbsExponent, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroToPrecision(self.prec));
        }
        Ok(AbsExponent::int(-self.lead))
    }

    /// Upper bound on the absolute value exponent: exact when nonzero,
    /// -prec when zero to precision.
    pub fn abs_bound(&self) -> i64 {
        -self.lead
    }

    /// Σ_{n ≤ 0} a_n T^{-n}.
    pub fn polynomial_part(&self) -> Result<Poly, LaurentError> {
        if self.prec < 1 {
            return Err(LaurentError::InsufficientPrecision {
                prec: self.prec,
                needed: 0,
            });
        }
        if self.lead > 0 {
            return Ok(Poly::zero(&self.field));
        }
        let deg = (-self.lead) as usize;
        let coeffs = (0..=deg).map(|i| self.coeffs[deg - i]).collect();
        Ok(Poly::new(&self.field, coeffs))
    }

    pub fn neg(&self) -> Laurent {
        let f = &self.field;
        Laurent {
            field: f.clone(),
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let f = &self.field;
        let prec = self.prec.min(other.prec);
        let lead = self.lead.min(other.lead).min(prec);
        let mut coeffs = vec![Fq::ZERO; (prec - lead) as usize];
        for s in [self, other] {
            for (i, &c) in s.coeffs.iter().enumerate() {
                let n = s.lead + i as i64;
                if n >= prec {
                    break;
                }
                let slot = &mut coeffs[(n - lead) as usize];
                *slot = f.add(*slot, c);
            }
        }
        Laurent::from_parts(f, lead, coeffs, prec)
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let f = &self.field;
        let prec = (self.lead + other.prec).min(other.lead + self.prec);
        if self.is_zero() || other.is_zero() {
            return Laurent::zero(f, prec);
        }
        let lead = self.lead + other.lead;
        if prec <= lead {
            return Laurent::zero(f, prec);
        }
        let len = (prec - lead) as usize;
        let coeffs = mul_slices(f, &self.coeffs, &other.coeffs, len);
        Laurent::from_parts(f, lead, coeffs, prec)
    }

    /// Product with an exact polynomial.
    pub fn mul_poly(&self, p: &Poly) -> Laurent {
        let f = &self.field;
        let Some(d) = p.degree() else {
            return Laurent::zero(f, self.prec);
        };
        let d = d as i64;
        let prec = self.prec - d;
        if self.is_zero() {
            return Laurent::zero(f, prec);
        }
        let lead = self.lead - d;
        if prec <= lead {
            return Laurent::zero(f, prec);
        }
        let rev: Vec<Fq> = p.coeffs().iter().rev().copied().collect();
        let coeffs = mul_slices(f, &self.coeffs, &rev, (prec - lead) as usize);
        Laurent::from_parts(f, lead, coeffs, prec)
    }

    /// Sum with an exact polynomial.
    pub fn add_poly(&self, p: &Poly) -> Laurent {
        self.add(&Laurent::from_poly(p, self.prec))
    }

    pub fn scale(&self, c: Fq) -> Laurent {
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|&x| f.mul(x, c)).collect();
        if c.is_zero() {
            return Laurent::zero(f, self.prec);
        }
        Laurent {
            field: f.clone(),
            lead: self.lead,
            coeffs,
            prec: self.prec,
        }
    }

    pub fn inv(&self) -> Result<Laurent, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroToPrecision(self.prec));
        }
        let f = &self.field;
        let len = self.coeffs.len();
        let u0inv = f.inv(self.coeffs[0]).unwrap();
        let neg_u: Vec<Fq> = self.coeffs.iter().map(|&c| f.neg(f.mul(c, u0inv))).collect();
        // c_j = -Σ_{i=1..j} u_i c_{j-i}, normalised so u_0 = 1
        let mut c = vec![Fq::ZERO; len];
        c[0] = Fq::ONE;
        let mut work = vec![Fq::ZERO; len];
        for j in 1..len {
            axpy(f, &mut work, j, c[j - 1], &neg_u[1..len - j + 1]);
            c[j] = work[j];
        }
        let coeffs = c.into_iter().map(|x| f.mul(x, u0inv)).collect();
        let lead = -self.lead;
        let prec = self.prec - 2 * self.lead;
        Ok(Laurent::from_parts(f, lead, coeffs, prec))
    }

    pub fn div(&self, other: &Laurent) -> Result<Laurent, LaurentError> {
        Ok(self.mul(&other.inv()?))
    }

    /// x -> x^r for r a power of the characteristic.
    pub fn frobenius(&self, r: u64) -> Result<Laurent, LaurentError> {
        let f = &self.field;
        if !is_power_of(r, f.characteristic() as u64) {
            return Err(LaurentError::NotAPowerOfP(r));
        }
        let ri = r as i64;
        let prec = self.prec.saturating_mul(ri);
        if self.is_zero() {
            return Ok(Laurent::zero(f, prec));
        }
        let lead = self.lead * ri;
        let mut coeffs = vec![Fq::ZERO; (prec - lead) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * r as usize] = f.pow(c, ri).unwrap_or(Fq::ZERO);
        }
        Ok(Laurent::from_parts(f, lead, coeffs, prec))
    }

    /// Horner evaluation of P(x) with exact precision propagation.
    pub fn eval_xpoly(poly: &XPoly, x: &Laurent) -> Laurent {
        let coeffs = poly.coeffs();
        let Some((top, rest)) = coeffs.split_last() else {
            return Laurent::zero(x.field(), x.prec);
        };
        if rest.is_empty() {
            return Laurent::from_poly(top, x.prec);
        }
        let mut iter = rest.iter().rev();
        let mut acc = x.mul_poly(top).add_poly(iter.next().unwrap());
        for c in iter {
            acc = acc.mul(x).add_poly(c);
        }
        acc
    }

    /// True when both series agree on every index both of them know.
    pub fn agrees_with(&self, other: &Laurent) -> bool {
        let prec = self.prec.min(other.prec);
        self.sub(other).truncate(prec).is_zero()
    }

    /// Text form "T^{-N}*[c0,c1,...]@prec".
    pub fn encode(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|&c| self.field.format(c)).collect();
        format!("T^{{{}}}*[{}]@{}", -self.lead, parts.join(","), self.prec)
    }
}

/// P(x) for P ∈ (F_q[T])[X].
pub fn eval_poly_at_series(poly: &XPoly, x: &Laurent) -> Laurent {
    Laurent::eval_xpoly(poly, x)
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> Field {
        Field::new(2, 1).unwrap()
    }

    fn poly(f: &Field, c: &[u16]) -> Poly {
        Poly::new(f, c.iter().map(|&x| f.from_int(x as i64)).collect())
    }

    fn ones_at(f: &Field, idx: &[i64], prec: i64) -> Laurent {
        let lead = idx[0];
        let mut coeffs = vec![Fq::ZERO; (prec - lead) as usize];
        for &i in idx {
            coeffs[(i - lead) as usize] = Fq::ONE;
        }
        Laurent::new(f, lead, coeffs, prec)
    }

    #[test]
    fn rational_expansions() {
        let f = f2();
        let s = Laurent::from_rational(&Poly::one(&f), &Poly::t(&f), 5).unwrap();
        assert_eq!(s, ones_at(&f, &[1], 5));
        let s = Laurent::from_rational(&Poly::one(&f), &poly(&f, &[1, 1]), 4).unwrap();
        assert_eq!(s, ones_at(&f, &[1, 2, 3], 4));
        let s = Laurent::from_rational(&poly(&f, &[1, 0, 1]), &poly(&f, &[0, 0, 0, 1]), 6).unwrap();
        assert_eq!(s, ones_at(&f, &[1, 3], 6));
        assert!(matches!(
            Laurent::from_rational(&Poly::one(&f), &Poly::zero(&f), 4),
            Err(LaurentError::DivisionByZero)
        ));
    }

    #[test]
    fn char_two_doubling_vanishes() {
        let f = f2();
        let a = Laurent::from_rational(&Poly::one(&f), &poly(&f, &[1, 1]), 10).unwrap();
        let z = a.add(&a);
        assert!(z.is_zero());
        assert_eq!(z.prec(), 10);
        assert!(matches!(z.abs(), Err(LaurentError::ZeroToPrecision(10))));
    }

    #[test]
    fn inverse_of_one_over_t_is_t() {
        let f = f2();
        let a = Laurent::from_rational(&Poly::one(&f), &Poly::t(&f), 8).unwrap();
        let b = a.inv().unwrap();
        assert_eq!(b.polynomial_part().unwrap(), Poly::t(&f));
        assert_eq!(b.lead(), -1);
        assert_eq!(b.prec(), 6);
        assert!(b.sub(&Laurent::from_poly(&Poly::t(&f), 6)).is_zero());
    }

    #[test]
    fn cancellation_to_one() {
        let f = f2();
        let a = Laurent::from_rational(&Poly::one(&f), &poly(&f, &[1, 1]), 12).unwrap();
        let prod = a.mul_poly(&poly(&f, &[1, 1]));
        assert!(prod.sub(&Laurent::from_poly(&Poly::one(&f), 40)).is_zero());
        assert_eq!(prod.prec(), 11);
    }

    #[test]
    fn polynomial_parts() {
        let f = f2();
        let s = Laurent::from_poly(&poly(&f, &[1, 0, 1]), 6).add(&ones_at(&f, &[1], 6));
        assert_eq!(s.polynomial_part().unwrap(), poly(&f, &[1, 0, 1]));
        assert!(ones_at(&f, &[2], 6).polynomial_part().unwrap().is_zero());
        let s = Laurent::from_rational(&poly(&f, &[0, 1, 0, 1]), &poly(&f, &[1, 1]), 8).unwrap();
        assert_eq!(s.polynomial_part().unwrap(), poly(&f, &[0, 1, 1]));
        let rem = s.sub(&Laurent::from_poly(&s.polynomial_part().unwrap(), 8));
        assert!(rem.is_zero() || rem.lead() >= 1);
    }

    #[test]
    fn abs_examples() {
        let f = f2();
        assert_eq!(ones_at(&f, &[1], 4).abs().unwrap(), AbsExponent::int(-1));
        assert_eq!(
            Laurent::from_poly(&poly(&f, &[0, 0, 1]), 4).abs().unwrap(),
            AbsExponent::int(2)
        );
    }

    #[test]
    fn eval_examples() {
        let f = f2();
        let x = Laurent::from_rational(&poly(&f, &[1, 1]), &poly(&f, &[1, 0, 1, 1]), 20).unwrap();
        assert_eq!(Laurent::eval_xpoly(&XPoly::x(&f), &x), x);
        let c = poly(&f, &[1, 1]);
        let p = XPoly::new(&f, vec![c.clone(), Poly::one(&f)]);
        let z = Laurent::zero(&f, 9);
        assert_eq!(Laurent::eval_xpoly(&p, &z), Laurent::from_poly(&c, 9));
    }

    #[test]
    fn frobenius_matches_power() {
        let f = Field::new(2, 2).unwrap();
        let x = Laurent::from_rational(
            &Poly::new(&f, vec![f.generator(), Fq::ONE]),
            &Poly::new(&f, vec![Fq::ONE, Fq::ZERO, f.generator()]),
            30,
        )
        .unwrap();
        let x4 = x.frobenius(4).unwrap();
        let slow = x.mul(&x).mul(&x).mul(&x);
        assert!(x4.agrees_with(&slow));
        assert!(slow.prec() <= x4.prec());
    }

    #[test]
    fn text_form() {
        let f = f2();
        assert_eq!(ones_at(&f, &[1, 3], 4).encode(), "T^{-1}*[g^0,0,g^0]@4");
    }

    fn arb_poly(f: Field, max_deg: usize) -> impl Strategy<Value = Poly> {
        let q = f.size() as u16;
        proptest::collection::vec(0..q, 1..=max_deg + 1)
            .prop_map(move |c| Poly::new(&f, c.into_iter().map(Fq).collect()))
    }

    fn f8() -> Field {
        Field::new(2, 3).unwrap()
    }

    proptest! {
        #[test]
        fn reciprocal_series_multiply_to_one(a in arb_poly(f8(), 10), b in arb_poly(f8(), 10)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let x = Laurent::from_rational(&a, &b, 40).unwrap();
            let y = Laurent::from_rational(&b, &a, 40).unwrap();
            let one = x.mul(&y);
            prop_assert!(one.sub(&Laurent::from_poly(&Poly::one(a.field()), 100)).is_zero());
            prop_assert!(one.prec() >= 40 - 20);
        }

        #[test]
        fn ultrametric_series(a in arb_poly(f8(), 6), b in arb_poly(f8(), 6), c in arb_poly(f8(), 6)) {
            prop_assume!(!b.is_zero() && !c.is_zero());
            let x = Laurent::from_rational(&a, &b, 30).unwrap();
            let y = Laurent::from_rational(&c, &b, 30).unwrap();
            let s = x.add(&y);
            if let (Ok(ex), Ok(ey), Ok(es)) = (x.abs(), y.abs(), s.abs()) {
                prop_assert!(es <= ex.max(ey));
                if ex != ey {
                    prop_assert_eq!(es, ex.max(ey));
                }
            }
        }

        #[test]
        fn fractional_part_is_small(a in arb_poly(f8(), 9), b in arb_poly(f8(), 5)) {
            prop_assume!(!b.is_zero());
            let x = Laurent::from_rational(&a, &b, 25).unwrap();
            let rem = x.sub(&Laurent::from_poly(&x.polynomial_part().unwrap(), 25));
            prop_assert!(rem.abs_bound() < 0);
        }

        #[test]
        fn precision_is_never_overclaimed(
            a in arb_poly(f8(), 6), b in arb_poly(f8(), 6),
            c in arb_poly(f8(), 6), d in arb_poly(f8(), 6),
        ) {
            prop_assume!(!b.is_zero() && !d.is_zero() && !c.is_zero());
            let lo = |p| (
                Laurent::from_rational(&a, &b, p).unwrap(),
                Laurent::from_rational(&c, &d, p).unwrap(),
            );
            let (x, y) = lo(20);
            let (xh, yh) = lo(200);
            for (low, high) in [
                (x.mul(&y), xh.mul(&yh)),
                (x.add(&y), xh.add(&yh)),
                (y.inv().unwrap(), yh.inv().unwrap()),
                (x.div(&y).unwrap(), xh.div(&yh).unwrap()),
            ] {
                prop_assert!(low.prec() <= high.prec());
                prop_assert!(low.agrees_with(&high));
            }
        }
    }
}
