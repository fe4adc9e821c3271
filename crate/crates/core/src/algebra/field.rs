//! The finite field F_q with q = p^s.
//!
//! Elements are stored as their coordinate vector over F_p with respect to
//! the power basis 1, u, ..., u^{s-1} of F_p[u]/(modulus), packed base p into
//! a `u16` (coordinate i is the i-th base-p digit). The modulus is the
//! smallest monic irreducible polynomial in that packed order and the
//! generator is the smallest element of multiplicative order q - 1, so the
//! model of F_q is the same on every run.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::AlgebraError;

/// Largest field size accepted by [`Field::new`].
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

/// An element of F_q, packed as base-p coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(pub(crate) u16);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Packed coordinate value (digit i is the coefficient of u^i).
    pub fn packed(self) -> u32 {
        self.0 as u32
    }
}

struct Tables {
    p: u32,
    s: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Fq,
    // exp[i] = g^i for 0 <= i < 2(q-1)
    exp: Vec<Fq>,
    // log[x] for x != 0
    log: Vec<u32>,
    // q x q addition table for small odd characteristic fields
    add: Option<Vec<Fq>>,
}

/// A finite field configuration (p, s, modulus, generator) with cached
/// logarithm tables. Cloning is cheap.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.inner.p)
            .field("s", &self.inner.s)
            .field("modulus", &self.inner.modulus)
            .field("generator", &self.inner.generator)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || (self.inner.p == other.inner.p && self.inner.s == other.inner.s)
    }
}

impl Eq for Field {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn digits(mut x: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = x % p;
        x /= p;
    }
    out
}

fn pack(coords: &[u32], p: u32) -> u32 {
    coords.iter().rev().fold(0, |acc, &c| acc * p + c)
}

// Remainder of a by the monic polynomial m over F_p (coefficients low-first).
fn rem_monic(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * mi) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let s = m.len() - 1;
    for deg in 1..=s / 2 {
        let count = (p as u64).pow(deg as u32);
        for low in 0..count {
            let mut divisor = digits(low as u32, p, deg);
            divisor.push(1);
            if rem_monic(m, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = rem_monic(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

impl Field {
    /// Builds F_{p^s} with the smallest monic irreducible modulus and the
    /// smallest primitive element.
    pub fn new(p: u64, s: u32) -> Result<Field, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        if s == 0 {
            return Err(AlgebraError::InvalidDegree);
        }
        let q = (p as u128).checked_pow(s).unwrap_or(u128::MAX);
        if q > MAX_FIELD_SIZE as u128 {
            return Err(AlgebraError::TooLarge {
                p,
                s,
                bound: MAX_FIELD_SIZE,
            });
        }
        let (p, q) = (p as u32, q as u32);
        let len = s as usize;

        let modulus = (0..q)
            .map(|low| {
                let mut m = digits(low, p, len);
                m.push(1);
                m
            })
            .find(|m| is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");

        // smallest element of order q - 1, by brute-force power walking
        let mut generator = None;
        for cand in 1..q {
            let g = digits(cand, p, len);
            let mut x = g.clone();
            let mut order = 1;
            while pack(&x, p) != 1 {
                x = mul_mod(&x, &g, &modulus, p);
                order += 1;
            }
            if order == q - 1 {
                generator = Some(cand);
                break;
            }
        }
        let generator = generator.expect("F_q* is cyclic");

        let n = (q - 1) as usize;
        let mut exp = Vec::with_capacity(2 * n);
        let mut log = vec![0u32; q as usize];
        let g = digits(generator, p, len);
        let mut x = digits(1, p, len);
        for i in 0..n {
            let packed = pack(&x, p);
            exp.push(Fq(packed as u16));
            log[packed as usize] = i as u32;
            x = mul_mod(&x, &g, &modulus, p);
        }
        for i in 0..n {
            exp.push(exp[i]);
        }

        let add = if p != 2 && q <= 512 {
            let mut table = vec![Fq::ZERO; (q * q) as usize];
            for a in 0..q {
                let da = digits(a, p, len);
                for b in 0..q {
                    let db = digits(b, p, len);
                    let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    table[(a * q + b) as usize] = Fq(pack(&sum, p) as u16);
                }
            }
            Some(table)
        } else {
            None
        };

        Ok(Field {
            inner: Arc::new(Tables {
                p,
                s,
                q,
                modulus,
                generator: Fq(generator as u16),
                exp,
                log,
                add,
            }),
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.s
    }

    pub fn size(&self) -> u32 {
        self.inner.q
    }

    /// Coefficients of the modulus over F_p, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn generator(&self) -> Fq {
        self.inner.generator
    }

    /// Coordinates of `a` over F_p.
    pub fn coords(&self, a: Fq) -> Vec<u32> {
        digits(a.0 as u32, self.inner.p, self.inner.s as usize)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Fq {
        let p = self.inner.p;
        let mut c: Vec<u32> = coords.iter().map(|&x| x % p).collect();
        c.resize(self.inner.s as usize, 0);
        Fq(pack(&c, p) as u16)
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> Fq {
        let p = self.inner.p as i64;
        Fq(n.rem_euclid(p) as u16)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let t = &*self.inner;
        if t.p == 2 {
            return Fq(a.0 ^ b.0);
        }
        if let Some(table) = &t.add {
            return table[(a.0 as usize) * t.q as usize + b.0 as usize];
        }
        let (p, len) = (t.p, t.s as usize);
        let (da, db) = (digits(a.0 as u32, p, len), digits(b.0 as u32, p, len));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
        Fq(pack(&sum, p) as u16)
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        let t = &*self.inner;
        if t.p == 2 || a.is_zero() {
            return a;
        }
        let p = t.p;
        let d: Vec<u32> = digits(a.0 as u32, p, t.s as usize)
            .into_iter()
            .map(|x| (p - x) % p)
            .collect();
        Fq(pack(&d, p) as u16)
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.is_zero() || b.is_zero() {
            return Fq::ZERO;
        }
        let t = &*self.inner;
        t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            return None;
        }
        let t = &*self.inner;
        let l = t.log[a.0 as usize];
        Some(t.exp[((t.q - 1 - l) % (t.q - 1)) as usize])
    }

    pub fn div(&self, a: Fq, b: Fq) -> Option<Fq> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// a^e for any integer e (negative exponents invert; 0^e for e <= 0 is `None`).
    pub fn pow(&self, a: Fq, e: i64) -> Option<Fq> {
        if a.is_zero() {
            return if e > 0 { Some(Fq::ZERO) } else { None };
        }
        let t = &*self.inner;
        let n = (t.q - 1) as i64;
        let l = (t.log[a.0 as usize] as i64 * e.rem_euclid(n)).rem_euclid(n);
        Some(t.exp[l as usize])
    }

    /// Generator power g^i.
    pub fn gen_pow(&self, i: i64) -> Fq {
        let t = &*self.inner;
        t.exp[i.rem_euclid((t.q - 1) as i64) as usize]
    }

    /// Discrete logarithm to the stored generator.
    pub fn log(&self, a: Fq) -> Option<u32> {
        (!a.is_zero()).then(|| self.inner.log[a.0 as usize])
    }

    pub(crate) fn exp_table(&self) -> &[Fq] {
        &self.inner.exp
    }

    pub(crate) fn log_table(&self) -> &[u32] {
        &self.inner.log
    }

    /// All elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.inner.q).map(|x| Fq(x as u16))
    }

    /// Encodes an element as "0" or "g^i".
    pub fn format(&self, a: Fq) -> String {
        match self.log(a) {
            None => "0".to_string(),
            Some(i) => format!("g^{i}"),
        }
    }

    /// Parses "0", "1", "g", or "g^i".
    pub fn parse(&self, text: &str) -> Result<Fq, AlgebraError> {
        let t = text.trim();
        let bad = || AlgebraError::Parse(format!("invalid field element {t:?}"));
        match t {
            "0" => Ok(Fq::ZERO),
            "1" => Ok(Fq::ONE),
            "g" => Ok(self.generator()),
            _ => {
                let exp = t.strip_prefix("g^").ok_or_else(bad)?;
                let i = i64::from_str(exp.trim()).map_err(|_| bad())?;
                Ok(self.gen_pow(i))
            }
        }
    }
}
