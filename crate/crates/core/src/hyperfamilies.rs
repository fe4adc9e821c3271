//! The hyperquadratic families Θ_k^t(λ) and Φ_ℓ^t(λ; ε): letter streams,
//! their degree-(r+1) equations, and the Fibonacci analogue F_n.

use thiserror::Error;

use crate::algebra::{Field, Fq, Poly, XPoly};
use crate::contfrac::{ContinuedFraction, ConvergentState};
use crate::laurent::{Laurent, LaurentError};

/// Largest r = q^t accepted; keeps Frobenius index scaling in range.
pub const MAX_R: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("lambda = 2 is excluded in odd characteristic")]
    LambdaTwo,
    #[error("epsilon entries must be nonzero")]
    ZeroEpsilon,
    #[error("the Phi family needs characteristic 2, got {0}")]
    NotCharacteristicTwo(u32),
    #[error("the Phi family needs at least one lambda")]
    EmptyLambdas,
    #[error("t must be at least 1")]
    ZeroT,
    #[error("r = {base}^{t} exceeds {max}", max = MAX_R)]
    RTooLarge { base: u64, t: u32 },
}

fn checked_r(base: u64, t: u32) -> Result<u64, FamilyError> {
    if t == 0 {
        return Err(FamilyError::ZeroT);
    }
    base.checked_pow(t)
        .filter(|&r| r <= MAX_R)
        .ok_or(FamilyError::RTooLarge { base, t })
}

#[derive(Clone, Debug)]
pub struct ThetaParams {
    field: Field,
    t: u32,
    k: usize,
    lambda: Fq,
    r: u64,
}

impl ThetaParams {
    pub fn new(field: &Field, t: u32, k: usize, lambda: Fq) -> Result<ThetaParams, FamilyError> {
        if lambda.is_zero() {
            return Err(FamilyError::ZeroLambda);
        }
        if field.characteristic() != 2 && lambda == field.from_int(2) {
            return Err(FamilyError::LambdaTwo);
        }
        let r = checked_r(field.size() as u64, t)?;
        Ok(ThetaParams {
            field: field.clone(),
            t,
            k,
            lambda,
            r,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> Fq {
        self.lambda
    }

    /// μ = 2 − λ; equals λ in characteristic 2.
    pub fn mu(&self) -> Fq {
        let f = &self.field;
        if f.characteristic() == 2 {
            self.lambda
        } else {
            f.sub(f.from_int(2), self.lambda)
        }
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    /// (λμ)^{(r−1)/2} for odd p, 1 for p = 2.
    pub fn equation_constant(&self) -> Fq {
        let f = &self.field;
        if f.characteristic() == 2 {
            return Fq::ONE;
        }
        let lm = f.mul(self.lambda, self.mu());
        f.pow(lm, ((self.r - 1) / 2) as i64).unwrap()
    }

    /// λ = 1 makes the expansion ultimately periodic.
    pub fn is_periodic(&self) -> bool {
        self.lambda == Fq::ONE
    }

    /// Coefficient c with a_n = c T, for n ≥ 1.
    pub fn letter_coefficient(&self, n: usize) -> Fq {
        assert!(n >= 1);
        let k = self.k as u128;
        let n = n as u128;
        if n <= k {
            return Fq::ONE;
        }
        let r = self.r as u128;
        let mut m = n - k - 1;
        let mut ri = r;
        while m >= (k + 1) * ri {
            m -= (k + 1) * ri;
            ri *= r;
        }
        let j = m % ri;
        if j == 0 {
            Fq::ONE
        } else if (j - 1).is_multiple_of(2) {
            self.lambda
        } else {
            self.mu()
        }
    }

    /// Number of letters in T^[k] followed by blocks 1..=n.
    pub fn prefix_len(&self, n: u32) -> u128 {
        let (k, r) = (self.k as u128, self.r as u128);
        k + (k + 1) * (1..=n).map(|i| r.pow(i)).sum::<u128>()
    }
}

#[derive(Clone, Debug)]
pub struct PhiParams {
    field: Field,
    t: u32,
    lambdas: Vec<Fq>,
    eps: (Fq, Fq),
    r: u64,
}

impl PhiParams {
    pub fn new(field: &Field, t: u32, lambdas: Vec<Fq>, eps: (Fq, Fq)) -> Result<PhiParams, FamilyError> {
        if field.characteristic() != 2 {
            return Err(FamilyError::NotCharacteristicTwo(field.characteristic()));
        }
        if lambdas.is_empty() {
            return Err(FamilyError::EmptyLambdas);
        }
        if lambdas.iter().any(|l| l.is_zero()) {
            return Err(FamilyError::ZeroLambda);
        }
        if eps.0.is_zero() || eps.1.is_zero() {
            return Err(FamilyError::ZeroEpsilon);
        }
        let r = checked_r(2, t)?;
        Ok(PhiParams {
            field: field.clone(),
            t,
            lambdas,
            eps,
            r,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn ell(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[Fq] {
        &self.lambdas
    }

    pub fn eps(&self) -> (Fq, Fq) {
        self.eps
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    /// ε = (1, 1) and every λ_i = 1.
    pub fn is_periodic(&self) -> bool {
        self.eps == (Fq::ONE, Fq::ONE) && self.lambdas.iter().all(|&l| l == Fq::ONE)
    }

    /// λ_n for n > ℓ, given λ_1..λ_{n−1}.
    fn next_lambda(&self, n: usize, known: &[Fq]) -> Fq {
        let f = &self.field;
        let ell = self.ell();
        if n <= ell {
            return self.lambdas[n - 1];
        }
        let r = self.r as usize;
        let (m, i) = ((n - ell - 1) / r, (n - ell - 1) % r + 1);
        let (e1, e2) = self.eps;
        let sign = |e: usize| if e.is_multiple_of(2) { 1 } else { -1 };
        if i == 1 {
            let twist = f.pow(e2, sign(m + 1)).unwrap();
            let base = f.mul(f.div(e2, e1).unwrap(), twist);
            f.mul(base, f.pow(known[m], self.r as i64).unwrap())
        } else {
            f.pow(f.div(e1, e2).unwrap(), sign(i)).unwrap()
        }
    }

    /// λ_1..λ_n.
    pub fn lambda_stream(&self, n: usize) -> Vec<Fq> {
        let mut out = Vec::with_capacity(n);
        for j in 1..=n {
            let l = self.next_lambda(j, &out);
            out.push(l);
        }
        out
    }
}

/// Θ_k^t(λ) = [0; T^[k], blocks i ≥ 1], generated lazily.
pub fn theta_letters(params: &ThetaParams) -> ContinuedFraction {
    let p = params.clone();
    let f = params.field.clone();
    ContinuedFraction::generated(Poly::zero(&f), move |n, _| {
        Poly::monomial(&f, p.letter_coefficient(n), 1)
    })
}

/// Φ_ℓ^t(λ; ε) = [λ_1 T; λ_2 T, λ_3 T, ...].
pub fn phi_letters(params: &PhiParams) -> ContinuedFraction {
    let f = params.field.clone();
    let a0 = Poly::monomial(&f, params.lambdas[0], 1);
    ContinuedFraction::generated(a0, phi_generator(params, 1))
}

/// 1/Φ = [0; λ_1 T, λ_2 T, ...], the form the approximants are built for.
pub fn phi_reciprocal_letters(params: &PhiParams) -> ContinuedFraction {
    let f = params.field.clone();
    ContinuedFraction::generated(Poly::zero(&f), phi_generator(params, 0))
}

// Letter j of the stream is λ_{j + offset} T.
fn phi_generator(params: &PhiParams, offset: usize) -> impl Fn(usize, &[Poly]) -> Poly + Send + Sync + 'static {
    let p = params.clone();
    move |j, prev| {
        let n = j + offset;
        let lambda_at = |i: usize| -> Fq {
            if i <= offset {
                p.lambdas[i - 1]
            } else {
                prev[i - offset - 1].leading()
            }
        };
        let known: Vec<Fq> = if n > p.ell() {
            // only λ_{m+1} with m = (n − ℓ − 1)/r is read
            let m = (n - p.ell() - 1) / p.r as usize;
            let mut v = vec![Fq::ZERO; m + 1];
            v[m] = lambda_at(m + 1);
            v
        } else {
            Vec::new()
        };
        Poly::monomial(&p.field, p.next_lambda(n, &known), 1)
    }
}

/// Memoised F_0 = 1, F_1 = T, F_{n+1} = T F_n + F_{n−1}.
#[derive(Clone, Debug)]
pub struct FibSequence {
    field: Field,
    terms: Vec<Poly>,
}

impl FibSequence {
    pub fn new(field: &Field) -> FibSequence {
        FibSequence {
            field: field.clone(),
            terms: vec![Poly::one(field), Poly::t(field)],
        }
    }

    pub fn term(&mut self, n: usize) -> &Poly {
        let t = Poly::t(&self.field);
        while self.terms.len() <= n {
            let len = self.terms.len();
            let next = &(&t * &self.terms[len - 1]) + &self.terms[len - 2];
            self.terms.push(next);
        }
        &self.terms[n]
    }
}

pub fn fib(field: &Field, n: usize) -> Poly {
    FibSequence::new(field).term(n).clone()
}

/// A X^{r+1} + B X^r + C X + D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperquadraticEquation {
    pub r: u64,
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    pub d: Poly,
}

impl HyperquadraticEquation {
    pub fn field(&self) -> &Field {
        self.a.field()
    }

    pub fn degree(&self) -> u64 {
        self.r + 1
    }

    pub fn to_xpoly(&self) -> XPoly {
        let f = self.field();
        let mut coeffs = vec![Poly::zero(f); self.r as usize + 2];
        coeffs[0] = self.d.clone();
        coeffs[1] = &coeffs[1] + &self.c;
        coeffs[self.r as usize] = &coeffs[self.r as usize] + &self.b;
        coeffs[self.r as usize + 1] = self.a.clone();
        XPoly::new(f, coeffs)
    }

    /// Largest T-degree among the coefficients.
    pub fn height_exp(&self) -> i64 {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|p| p.deg_i64())
            .max()
            .unwrap()
    }

    /// (A x + B) x^r + C x + D, using the Frobenius for x^r.
    pub fn eval(&self, x: &Laurent) -> Result<Laurent, LaurentError> {
        let xr = x.frobenius(self.r)?;
        let head = x.mul_poly(&self.a).add_poly(&self.b).mul(&xr);
        Ok(head.add(&x.mul_poly(&self.c).add_poly(&self.d)))
    }

    /// P′(x) = A x^r + C, since r ≡ 0 in F_q.
    pub fn eval_derivative(&self, x: &Laurent) -> Result<Laurent, LaurentError> {
        Ok(x.frobenius(self.r)?.mul_poly(&self.a).add_poly(&self.c))
    }

    /// Same equation with 1 added to D.
    pub fn perturbed(&self) -> HyperquadraticEquation {
        let mut e = self.clone();
        e.d = &e.d + &Poly::one(self.field());
        e
    }

    /// Coefficients in X, highest degree first.
    pub fn encode(&self) -> String {
        self.to_xpoly().encode_high_first()
    }
}

/// q_k X^{r+1} − p_k X^r + c (q_{k+r} X − p_{k+r}) with c = (λμ)^{(r−1)/2}.
pub fn theta_equation(params: &ThetaParams) -> HyperquadraticEquation {
    let (k, r) = (params.k, params.r as usize);
    let cf = theta_letters(params);
    let letters = cf.prefix(k + r).unwrap();
    let at_k = ConvergentState::from_letters(cf.a0(), &letters[..k]);
    let at_kr = ConvergentState::from_letters(cf.a0(), &letters);
    let c = params.equation_constant();
    HyperquadraticEquation {
        r: params.r,
        a: at_k.q.clone(),
        b: -&at_k.p,
        c: at_kr.q.scale(c),
        d: (-&at_kr.p).scale(c),
    }
}

/// q_{ℓ−1} X^{r+1} + p_{ℓ−1} X^r + (ε_1 q_{ℓ−2} F_{r−1} + ε_2 q_{ℓ−1} F_{r−2}) X
/// plus the constant ε_1 p_{ℓ−2} F_{r−1} + ε_2 p_{ℓ−1} F_{r−2}, with p, q the
/// convergents of [λ_1 T; λ_2 T, ..., λ_ℓ T].
pub fn phi_equation(params: &PhiParams) -> HyperquadraticEquation {
    let f = &params.field;
    let letters: Vec<Poly> = params.lambdas.iter().map(|&l| Poly::monomial(f, l, 1)).collect();
    let st = ConvergentState::from_letters(&letters[0], &letters[1..]);
    let mut fs = FibSequence::new(f);
    let r = params.r as usize;
    let f1 = fs.term(r - 1).clone();
    let f2 = fs.term(r - 2).clone();
    let (e1, e2) = params.eps;
    HyperquadraticEquation {
        r: params.r,
        a: st.q.clone(),
        b: st.p.clone(),
        c: &(&st.q_prev * &f1).scale(e1) + &(&st.q * &f2).scale(e2),
        d: &(&st.p_prev * &f1).scale(e1) + &(&st.p * &f2).scale(e2),
    }
}

/// Outcome of evaluating an equation at a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidualReport {
    /// Precision of the series the equation was evaluated at.
    pub precision: i64,
    /// Upper bound on the exponent of |P(x)|: exact if nonzero, minus the
    /// residual precision otherwise.
    pub residual_exp: i64,
    /// Precision of P(x) itself.
    pub residual_prec: i64,
    pub zero_to_precision: bool,
}

impl ResidualReport {
    /// |P(x)| ≤ q^{−(precision − slack)}.
    pub fn passes(&self, slack: i64) -> bool {
        self.residual_exp <= -(self.precision - slack)
    }
}

pub fn residual(eq: &HyperquadraticEquation, x: &Laurent) -> Result<ResidualReport, LaurentError> {
    let v = eq.eval(x)?;
    Ok(ResidualReport {
        precision: x.prec(),
        residual_exp: v.abs_bound(),
        residual_prec: v.prec(),
        zero_to_precision: v.is_zero(),
    })
}
