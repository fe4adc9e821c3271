//! Dense univariate polynomials in F_q[T].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::exponent::AbsExponent;
use super::field::{Field, Fq};
use super::AlgebraError;

/// A polynomial in F_q[T], coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fq>,
}

/// Product of two coefficient slices, truncated to `len` terms.
pub(crate) fn mul_slices(field: &Field, a: &[Fq], b: &[Fq], len: usize) -> Vec<Fq> {
    let mut out = vec![Fq::ZERO; len];
    if a.is_empty() || b.is_empty() || len == 0 {
        return out;
    }
    let exp = field.exp_table();
    let log = field.log_table();
    let b_logs: Vec<(usize, u32)> = b
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j, log[c.0 as usize]))
        .collect();
    let char2 = field.characteristic() == 2;
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() || i >= len {
            continue;
        }
        let la = log[ai.0 as usize];
        let room = len - i;
        if char2 {
            for &(j, lb) in &b_logs {
                if j >= room {
                    break;
                }
                out[i + j].0 ^= exp[(la + lb) as usize].0;
            }
        } else {
            for &(j, lb) in &b_logs {
                if j >= room {
                    break;
                }
                out[i + j] = field.add(out[i + j], exp[(la + lb) as usize]);
            }
        }
    }
    out
}

const KARATSUBA_CUTOFF: usize = 48;

/// Full product of two coefficient slices; Karatsuba above a size cutoff.
pub(crate) fn mul_full(field: &Field, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) < KARATSUBA_CUTOFF {
        return mul_slices(field, a, b, a.len() + b.len() - 1);
    }
    let mut out = vec![Fq::ZERO; a.len() + b.len() - 1];
    let h = a.len().max(b.len()) / 2;
    if b.len() <= h || a.len() <= h {
        // unbalanced: split the longer operand only
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        for (i, chunk) in long.chunks(short.len()).enumerate() {
            add_into(field, &mut out, i * short.len(), &mul_full(field, chunk, short));
        }
        return out;
    }
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = mul_full(field, a0, b0);
    let z2 = mul_full(field, a1, b1);
    let mut sa = a0.to_vec();
    add_into(field, &mut sa, 0, a1);
    let mut sb = b0.to_vec();
    add_into(field, &mut sb, 0, b1);
    let mut z1 = mul_full(field, &sa, &sb);
    sub_into(field, &mut z1, 0, &z0);
    sub_into(field, &mut z1, 0, &z2);
    add_into(field, &mut out, 0, &z0);
    add_into(field, &mut out, h, &z1);
    add_into(field, &mut out, 2 * h, &z2);
    out
}

// dst[offset..] += src, growing dst if needed
fn add_into(field: &Field, dst: &mut Vec<Fq>, offset: usize, src: &[Fq]) {
    if dst.len() < offset + src.len() {
        dst.resize(offset + src.len(), Fq::ZERO);
    }
    if field.characteristic() == 2 {
        for (d, s) in dst[offset..].iter_mut().zip(src) {
            d.0 ^= s.0;
        }
    } else {
        for (d, s) in dst[offset..].iter_mut().zip(src) {
            *d = field.add(*d, *s);
        }
    }
}

fn sub_into(field: &Field, dst: &mut Vec<Fq>, offset: usize, src: &[Fq]) {
    if dst.len() < offset + src.len() {
        dst.resize(offset + src.len(), Fq::ZERO);
    }
    for (d, s) in dst[offset..].iter_mut().zip(src) {
        *d = field.sub(*d, *s);
    }
}

/// dst[offset..] += c * src
pub(crate) fn axpy(field: &Field, dst: &mut [Fq], offset: usize, c: Fq, src: &[Fq]) {
    if c.is_zero() {
        return;
    }
    let exp = field.exp_table();
    let log = field.log_table();
    let lc = log[c.0 as usize];
    let char2 = field.characteristic() == 2;
    for (d, s) in dst[offset..].iter_mut().zip(src) {
        if s.is_zero() {
            continue;
        }
        let term = exp[(lc + log[s.0 as usize]) as usize];
        if char2 {
            d.0 ^= term.0;
        } else {
            *d = field.add(*d, term);
        }
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Fq>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Fq::ONE)
    }

    pub fn constant(field: &Field, c: Fq) -> Poly {
        Poly::new(field, vec![c])
    }

    /// c * T^n
    pub fn monomial(field: &Field, c: Fq, n: usize) -> Poly {
        let mut coeffs = vec![Fq::ZERO; n + 1];
        coeffs[n] = c;
        Poly::new(field, coeffs)
    }

    /// The polynomial T.
    pub fn t(field: &Field) -> Poly {
        Poly::monomial(field, Fq::ONE, 1)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Fq> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fq::ONE
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with deg(0) = -1; only for contexts where the zero case is excluded
    /// or harmless.
    pub fn deg_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fq::ONE
    }

    /// |P| = q^{deg P}, |0| = 0.
    pub fn abs(&self) -> AbsExponent {
        match self.degree() {
            None => AbsExponent::NegInf,
            Some(d) => AbsExponent::int(d as i64),
        }
    }

    pub fn scale(&self, c: Fq) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Multiply by T^n.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Fq::ZERO; n];
        coeffs.extend_from_slice(&self.coeffs);
        Poly {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn monic(&self) -> Poly {
        match self.field.inv(self.leading()) {
            None => self.clone(),
            Some(inv) => self.scale(inv),
        }
    }

    /// Euclidean division: self = q * b + r with deg r < deg b.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly), AlgebraError> {
        let f = &self.field;
        let db = b.degree().ok_or(AlgebraError::DivisionByZero)?;
        let inv_lead = f.inv(b.leading()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![Fq::ZERO; r.len() - db];
        let neg_b: Vec<Fq> = b.coeffs.iter().map(|&c| f.neg(c)).collect();
        for i in (0..quot.len()).rev() {
            let c = f.mul(r[i + db], inv_lead);
            quot[i] = c;
            if !c.is_zero() {
                axpy(f, &mut r[..i + db + 1], i, c, &neg_b);
            }
        }
        r.truncate(db);
        Ok((Poly::new(f, quot), Poly::new(f, r)))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly, AlgebraError> {
        self.divmod(b).map(|(_, r)| r)
    }

    /// Exact quotient; errors if b does not divide self.
    pub fn div_exact(&self, b: &Poly) -> Result<Poly, AlgebraError> {
        let (q, r) = self.divmod(b)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(AlgebraError::NotDivisible)
        }
    }

    /// Monic greatest common divisor (gcd(0, 0) = 0).
    pub fn gcd(&self, b: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// a(T)^r for r a power of p: coefficientwise c -> c^r with T -> T^r.
    pub fn frobenius_power(&self, r: u64) -> Result<Poly, AlgebraError> {
        let p = self.field.characteristic() as u64;
        if !is_power_of(r, p) {
            return Err(AlgebraError::NotAPowerOfP { r, p });
        }
        let f = &self.field;
        if self.is_zero() {
            return Ok(self.clone());
        }
        let r_us = r as usize;
        let mut coeffs = vec![Fq::ZERO; (self.coeffs.len() - 1) * r_us + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * r_us] = f.pow(c, r as i64).unwrap_or(Fq::ZERO);
        }
        Ok(Poly::new(f, coeffs))
    }

    /// Evaluation at a field element.
    pub fn eval(&self, x: Fq) -> Fq {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Encoding "[c0,c1,...]" lowest degree first.
    pub fn encode(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|&c| self.field.format(c)).collect();
        format!("[{}]", parts.join(","))
    }

    pub fn parse(field: &Field, text: &str) -> Result<Poly, AlgebraError> {
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| AlgebraError::Parse(format!("invalid polynomial {t:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Poly::zero(field));
        }
        let coeffs = inner
            .split(',')
            .map(|c| field.parse(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::new(field, coeffs))
    }
}

pub(crate) fn is_power_of(r: u64, p: u64) -> bool {
    if r == 0 {
        return false;
    }
    let mut x = r;
    while x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        debug_assert!(self.field == rhs.field);
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect();
        Poly::new(f, coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        debug_assert!(self.field == rhs.field);
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect();
        Poly::new(f, coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        debug_assert!(self.field == rhs.field);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.field);
        }
        Poly::new(&self.field, mul_full(&self.field, &self.coeffs, &rhs.coeffs))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> Field {
        Field::new(2, 1).unwrap()
    }

    fn p(field: &Field, bits: &[u16]) -> Poly {
        Poly::new(field, bits.iter().map(|&b| Fq(b)).collect())
    }

    #[test]
    fn gcd_of_square_in_char_two() {
        let f = f2();
        let a = p(&f, &[1, 0, 1]); // T^2 + 1
        let b = p(&f, &[1, 1]); // T + 1
        assert_eq!(a.gcd(&b), b);
    }

    #[test]
    fn divmod_t_cubed() {
        let f = f2();
        let (q, r) = p(&f, &[0, 0, 0, 1]).divmod(&p(&f, &[1, 0, 1])).unwrap();
        assert_eq!(q, Poly::t(&f));
        assert_eq!(r, Poly::t(&f));
    }

    #[test]
    fn zero_is_absorbing_and_division_by_zero_errors() {
        let f = f2();
        let a = p(&f, &[1, 1, 0, 1]);
        assert!((&a * &Poly::zero(&f)).is_zero());
        assert!(matches!(a.divmod(&Poly::zero(&f)), Err(AlgebraError::DivisionByZero)));
    }

    #[test]
    fn abs_reads_degree() {
        let f = f2();
        assert_eq!(p(&f, &[0, 0, 0, 1]).abs(), AbsExponent::int(3));
        assert_eq!(Poly::one(&f).abs(), AbsExponent::int(0));
        assert_eq!(Poly::zero(&f).abs(), AbsExponent::NegInf);
    }

    #[test]
    fn frobenius_examples() {
        let f = f2();
        let a = p(&f, &[1, 1]);
        assert_eq!(a.frobenius_power(2).unwrap(), p(&f, &[1, 0, 1]));
        let f4 = Field::new(2, 2).unwrap();
        let lam = f4.generator();
        let lt = Poly::monomial(&f4, lam, 1);
        // lambda^4 = lambda in F_4
        assert_eq!(lt.frobenius_power(4).unwrap(), Poly::monomial(&f4, lam, 4));
        assert_eq!(Poly::one(&f4).frobenius_power(8).unwrap(), Poly::one(&f4));
        assert!(matches!(a.frobenius_power(3), Err(AlgebraError::NotAPowerOfP { .. })));
    }

    #[test]
    fn encoding_round_trip() {
        let f = Field::new(2, 2).unwrap();
        let a = Poly::new(&f, vec![Fq::ONE, f.generator(), Fq::ZERO, Fq::ONE]);
        assert_eq!(a.encode(), "[g^0,g^1,0,g^0]");
        assert_eq!(Poly::parse(&f, "[1,g^1,0,1]").unwrap(), a);
        assert_eq!(Poly::parse(&f, "[]").unwrap(), Poly::zero(&f));
    }

    fn arb_poly(field: Field, max_deg: usize) -> impl Strategy<Value = Poly> {
        let q = field.size() as u16;
        proptest::collection::vec(0..q, 0..=max_deg + 1)
            .prop_map(move |c| Poly::new(&field, c.into_iter().map(Fq).collect()))
    }

    fn fields() -> impl Strategy<Value = Field> {
        prop_oneof![
            Just(Field::new(2, 1).unwrap()),
            Just(Field::new(2, 3).unwrap()),
            Just(Field::new(3, 2).unwrap()),
            Just(Field::new(5, 1).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn karatsuba_matches_schoolbook(
            (a, b) in fields().prop_flat_map(|f| (arb_poly(f.clone(), 400), arb_poly(f, 260)))
        ) {
            if !a.is_zero() && !b.is_zero() {
                let len = a.coeffs.len() + b.coeffs.len() - 1;
                let slow = mul_slices(a.field(), &a.coeffs, &b.coeffs, len);
                prop_assert_eq!(mul_full(a.field(), &a.coeffs, &b.coeffs), slow);
            }
        }

        #[test]
        fn ultrametric_and_multiplicative_abs(
            (a, b) in fields().prop_flat_map(|f| (arb_poly(f.clone(), 12), arb_poly(f, 12)))
        ) {
            prop_assert_eq!((&a * &b).abs(), a.abs() + b.abs());
            let s = (&a + &b).abs();
            prop_assert!(s <= a.abs().max(b.abs()));
            if a.abs() != b.abs() {
                prop_assert_eq!(s, a.abs().max(b.abs()));
            }
        }

        #[test]
        fn divmod_reconstructs_and_gcd_divides(
            (a, b) in fields().prop_flat_map(|f| (arb_poly(f.clone(), 14), arb_poly(f, 8)))
        ) {
            if !b.is_zero() {
                let (q, r) = a.divmod(&b).unwrap();
                prop_assert_eq!(&(&q * &b) + &r, a.clone());
                prop_assert!(r.degree() < b.degree() || r.is_zero());
            }
            let g = a.gcd(&b);
            if !g.is_zero() {
                prop_assert!(g.is_monic());
                prop_assert!(a.rem(&g).unwrap().is_zero());
                prop_assert!(b.rem(&g).unwrap().is_zero());
            }
        }

        #[test]
        fn frobenius_matches_repeated_multiplication(
            (a, e) in fields().prop_flat_map(|f| (arb_poly(f, 8), 0u32..=2))
        ) {
            let p = a.field().characteristic() as u64;
            let r = p.pow(e);
            if r <= 8 {
                let mut slow = Poly::one(a.field());
                for _ in 0..r {
                    slow = &slow * &a;
                }
                prop_assert_eq!(a.frobenius_power(r).unwrap(), slow);
            }
        }
    }
}
