//! Polynomials in X with coefficients in F_q[T], and their resultants.

use std::fmt;

use super::field::{Field, Fq};
use super::poly::Poly;
use super::AlgebraError;

/// P(X) = Σ c_i X^i with c_i ∈ F_q[T], lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct XPoly {
    field: Field,
    coeffs: Vec<Poly>,
}

impl XPoly {
    pub fn new(field: &Field, mut coeffs: Vec<Poly>) -> XPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        XPoly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Builds from coefficients listed highest degree first.
    pub fn from_high_first(field: &Field, mut coeffs: Vec<Poly>) -> XPoly {
        coeffs.reverse();
        XPoly::new(field, coeffs)
    }

    pub fn zero(field: &Field) -> XPoly {
        XPoly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Poly) -> XPoly {
        let field = c.field().clone();
        XPoly::new(&field, vec![c])
    }

    /// X
    pub fn x(field: &Field) -> XPoly {
        XPoly::new(field, vec![Poly::zero(field), Poly::one(field)])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Poly {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Poly::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// X-degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Poly {
        self.coeffs.last().cloned().unwrap_or_else(|| Poly::zero(&self.field))
    }

    /// Height exponent: max T-degree of the coefficients.
    pub fn height_exp(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(|c| c.degree()).max()
    }

    pub fn add(&self, other: &XPoly) -> XPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        XPoly::new(&self.field, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &XPoly) -> XPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        XPoly::new(&self.field, (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &XPoly) -> XPoly {
        if self.is_zero() || other.is_zero() {
            return XPoly::zero(&self.field);
        }
        let mut out = vec![Poly::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        XPoly::new(&self.field, out)
    }

    pub fn scale(&self, c: &Poly) -> XPoly {
        XPoly::new(&self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn scale_const(&self, c: Fq) -> XPoly {
        XPoly::new(&self.field, self.coeffs.iter().map(|x| x.scale(c)).collect())
    }

    /// Multiply by X^n.
    pub fn shift(&self, n: usize) -> XPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Poly::zero(&self.field); n];
        coeffs.extend(self.coeffs.iter().cloned());
        XPoly::new(&self.field, coeffs)
    }

    /// Formal derivative in X.
    pub fn derivative(&self) -> XPoly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(f.from_int(i as i64)))
            .collect();
        XPoly::new(f, coeffs)
    }

    /// gcd in F_q[T] of all coefficients, made monic.
    pub fn content(&self) -> Poly {
        self.coeffs.iter().fold(Poly::zero(&self.field), |g, c| g.gcd(c))
    }

    /// Divides every coefficient exactly by c.
    pub fn div_exact(&self, c: &Poly) -> Result<XPoly, AlgebraError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|x| x.div_exact(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(XPoly::new(&self.field, coeffs))
    }

    /// Pseudo-remainder lc(b)^{deg a - deg b + 1} a mod b.
    pub fn pseudo_rem(&self, b: &XPoly) -> Result<XPoly, AlgebraError> {
        let db = b.degree().ok_or(AlgebraError::DivisionByZero)?;
        let Some(da) = self.degree() else {
            return Ok(self.clone());
        };
        if da < db {
            return Ok(self.clone());
        }
        let lb = b.leading();
        let mut r = self.clone();
        let mut steps = 0;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading();
            r = r.scale(&lb).sub(&b.scale(&lr).shift(dr - db));
            steps += 1;
        }
        let extra = (da - db + 1) - steps;
        Ok(r.scale(&lb.pow(extra as u64)))
    }

    /// Encoding as coefficient list in X, highest degree first.
    pub fn encode_high_first(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().rev().map(|c| c.encode()).collect();
        format!("[{}]", parts.join(","))
    }
}

impl fmt::Debug for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XPoly{}", self.encode_high_first())
    }
}

/// Resultant with respect to X, by the subresultant remainder sequence.
pub fn resultant(a: &XPoly, b: &XPoly) -> Result<Poly, AlgebraError> {
    let field = a.field().clone();
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return Ok(Poly::zero(&field));
    };
    let minus_one = field.neg(Fq::ONE);
    let (mut a, mut b, mut sign) = if da < db {
        let s = if (da * db) % 2 == 1 { minus_one } else { Fq::ONE };
        (b.clone(), a.clone(), s)
    } else {
        (a.clone(), b.clone(), Fq::ONE)
    };
    let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
    if db == 0 {
        return Ok(b.leading().pow(da as u64).scale(sign));
    }

    let ca = a.content();
    let cb = b.content();
    a = a.div_exact(&ca)?;
    b = b.div_exact(&cb)?;
    let t = &ca.pow(db as u64) * &cb.pow(da as u64);
    let mut g = Poly::one(&field);
    let mut h = Poly::one(&field);

    loop {
        let (dega, degb) = (a.degree().unwrap(), b.degree().unwrap());
        let delta = dega - degb;
        if dega % 2 == 1 && degb % 2 == 1 {
            sign = field.neg(sign);
        }
        let r = a.pseudo_rem(&b)?;
        a = b;
        let divisor = &g * &h.pow(delta as u64);
        b = r.div_exact(&divisor)?;
        g = a.leading();
        if delta > 0 {
            h = g.pow(delta as u64).div_exact(&h.pow(delta as u64 - 1))?;
        }
        match b.degree() {
            None => return Ok(Poly::zero(&field)),
            Some(0) => break,
            Some(_) => {}
        }
    }
    let dega = a.degree().unwrap() as u64;
    let lb = b.leading();
    let h = if dega == 0 {
        h
    } else {
        lb.pow(dega).div_exact(&h.pow(dega - 1))?
    };
    Ok((&t * &h).scale(sign))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::new(2, 1).unwrap()
    }

    fn poly(f: &Field, c: &[u16]) -> Poly {
        Poly::new(f, c.iter().map(|&x| Fq(x)).collect())
    }

    #[test]
    fn resultant_of_coprime_linears() {
        let f = f2();
        let a = XPoly::new(&f, vec![Poly::t(&f), Poly::one(&f)]);
        let b = XPoly::new(&f, vec![poly(&f, &[1, 1]), Poly::one(&f)]);
        assert_eq!(resultant(&a, &b).unwrap(), Poly::one(&f));
    }

    #[test]
    fn resultant_with_itself_vanishes() {
        let f = f2();
        let a = XPoly::new(&f, vec![Poly::one(&f), Poly::t(&f), Poly::one(&f)]);
        assert!(resultant(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn resultant_of_two_quadratics() {
        let f = f2();
        let a = XPoly::new(&f, vec![Poly::one(&f), Poly::t(&f), Poly::one(&f)]);
        let b = XPoly::new(&f, vec![Poly::one(&f), poly(&f, &[1, 1]), Poly::one(&f)]);
        assert_eq!(resultant(&a, &b).unwrap(), Poly::one(&f));
    }

    #[test]
    fn derivative_in_char_two_drops_even_powers() {
        let f = f2();
        // X^3 + T X^2 + X + 1 -> X^2 + 1
        let a = XPoly::new(&f, vec![Poly::one(&f), Poly::one(&f), Poly::t(&f), Poly::one(&f)]);
        let d = a.derivative();
        assert_eq!(d, XPoly::new(&f, vec![Poly::one(&f), Poly::zero(&f), Poly::one(&f)]));
    }

    #[test]
    fn pseudo_remainder_identity() {
        let f = Field::new(3, 1).unwrap();
        let a = XPoly::new(
            &f,
            vec![poly(&f, &[1, 2]), poly(&f, &[0, 1]), poly(&f, &[2]), Poly::t(&f)],
        );
        let b = XPoly::new(&f, vec![poly(&f, &[1]), poly(&f, &[0, 0, 1])]);
        let r = a.pseudo_rem(&b).unwrap();
        assert!(r.degree().unwrap_or(0) < 1);
    }
}
