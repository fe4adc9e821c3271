//! Ultimately periodic approximants α_n, β_n of the two families.

use crate::algebra::{Field, Fq, Poly};
use crate::contfrac::Word;
use crate::hyperfamilies::{PhiParams, ThetaParams};
use crate::quadratic::QuadraticNumber;

use super::ApproxError;

/// Largest approximant (preperiod plus period) the builders accept.
pub const MAX_APPROXIMANT_LETTERS: u128 = 1 << 21;

/// A quadratic approximant together with the number of leading partial
/// quotients it is predicted to share with the target.
#[derive(Clone, Debug)]
pub struct Approximant {
    pub n: u32,
    pub quad: QuadraticNumber,
    pub shared: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Alpha,
    Beta,
}

fn lin(field: &Field, c: Fq) -> Poly {
    Poly::monomial(field, c, 1)
}

fn guard(letters: u128) -> Result<usize, ApproxError> {
    if letters > MAX_APPROXIMANT_LETTERS {
        return Err(ApproxError::TooLarge { letters });
    }
    Ok(letters as usize)
}

/// Alternating λT, μT, ... of the given length (all λT when p = 2).
fn theta_run(params: &ThetaParams, len: usize) -> Word {
    let f = params.field();
    let (l, m) = (lin(f, params.lambda()), lin(f, params.mu()));
    Word::new(
        (0..len)
            .map(|j| if j % 2 == 0 { l.clone() } else { m.clone() })
            .collect(),
    )
    .unwrap()
}

fn theta_block(params: &ThetaParams, i: u32, copies: usize) -> Word {
    let t = Word::single(Poly::t(params.field())).unwrap();
    let run = theta_run(params, params.r().pow(i) as usize - 1);
    t.concat(&run).power(copies)
}

fn theta_head(params: &ThetaParams, last_block: u32) -> Word {
    let f = params.field();
    let mut w = Word::single(Poly::t(f)).unwrap().power(params.k());
    for i in 1..=last_block {
        w.append(&theta_block(params, i, params.k() + 1));
    }
    w
}

fn theta_checks(params: &ThetaParams, n: u32) -> Result<(), ApproxError> {
    if params.is_periodic() {
        return Err(ApproxError::HypothesisViolated(
            "lambda = 1 gives a quadratic expansion".into(),
        ));
    }
    if n < 2 {
        return Err(ApproxError::InvalidIndex { n, min: 2 });
    }
    let r = params.r() as u128;
    let total = params.prefix_len(n).saturating_add(r.saturating_pow(n + 1));
    guard(total)?;
    Ok(())
}

fn theta_alpha_shared(params: &ThetaParams, n: u32) -> usize {
    let (k, r) = (params.k() as u128, params.r() as u128);
    ((k + 1) * (0..n).map(|i| r.pow(i)).sum::<u128>() + r.pow(n) - 1) as usize
}

/// α_n = [0; T^[k], blocks 1..n−1, T, \overline{λT, μT}] (period λT when p = 2).
pub fn theta_alpha_n(params: &ThetaParams, n: u32) -> Result<Approximant, ApproxError> {
    theta_checks(params, n)?;
    let f = params.field();
    let mut pre = theta_head(params, n - 1);
    pre.push(Poly::t(f)).unwrap();
    let per = if f.characteristic() == 2 {
        theta_run(params, 1)
    } else {
        theta_run(params, 2)
    };
    let quad = QuadraticNumber::from_periodic_cf(Poly::zero(f), &pre, &per)?;
    Ok(Approximant {
        n,
        quad,
        shared: theta_alpha_shared(params, n),
    })
}

/// β_n in the rewritten form
/// [0; T^[k], blocks 1..n−2, (T, W_{n−1})^[k], T, \overline{W_{n−1}, T, V_n}]
/// with W_i the run of length r^i − 1 and V_n the run of length r^n − r^{n−1}.
pub fn theta_beta_n(params: &ThetaParams, n: u32) -> Result<Approximant, ApproxError> {
    theta_checks(params, n)?;
    let f = params.field();
    let r = params.r();
    let t = Word::single(Poly::t(f)).unwrap();
    let mut pre = theta_head(params, n - 2);
    pre.append(&theta_block(params, n - 1, params.k()));
    pre.append(&t);
    let w_prev = theta_run(params, r.pow(n - 1) as usize - 1);
    let v = theta_run(params, (r.pow(n) - r.pow(n - 1)) as usize);
    let per = w_prev.concat(&t).concat(&v);
    let quad = QuadraticNumber::from_periodic_cf(Poly::zero(f), &pre, &per)?;
    let (k, rr) = (params.k() as u128, r as u128);
    let shared = ((k + 1) * (0..=n).map(|i| rr.pow(i)).sum::<u128>() + rr.pow(n) - 1) as usize;
    Ok(Approximant { n, quad, shared })
}

/// β_n as first written: [0; T^[k], blocks 1..n−1, \overline{T, W_n}].
pub fn theta_beta_n_plain(params: &ThetaParams, n: u32) -> Result<QuadraticNumber, ApproxError> {
    theta_checks(params, n)?;
    let f = params.field();
    let pre = theta_head(params, n - 1);
    let per = Word::single(Poly::t(f))
        .unwrap()
        .concat(&theta_run(params, params.r().pow(n) as usize - 1));
    Ok(QuadraticNumber::from_periodic_cf(Poly::zero(f), &pre, &per)?)
}

/// i(n) = 1 + ℓ Σ_{j<n} r^j
pub fn phi_index(params: &PhiParams, n: u32) -> u128 {
    let r = params.r() as u128;
    1 + params.ell() as u128 * (0..n).map(|j| r.pow(j)).sum::<u128>()
}

/// The m of part (1): λ_1 = λ ≠ 1, λ_i = 1 for 2 ≤ i ≤ m, λ_{m+1} ≠ 1 if m < ℓ,
/// and ε = (1, 1).
pub fn phi_part1_m(params: &PhiParams) -> Result<usize, ApproxError> {
    if params.eps() != (Fq::ONE, Fq::ONE) {
        return Err(ApproxError::HypothesisViolated(
            "part (1) needs epsilon = (1, 1)".into(),
        ));
    }
    let l = params.lambdas();
    if l[0] == Fq::ONE {
        return Err(ApproxError::HypothesisViolated("part (1) needs lambda_1 != 1".into()));
    }
    Ok(1 + l[1..].iter().take_while(|&&x| x == Fq::ONE).count())
}

/// Part (2): r a power of q, ε = (1, 1), all λ_i equal to one λ ≠ 1.
pub fn phi_part2_lambda(params: &PhiParams) -> Result<Fq, ApproxError> {
    if params.eps() != (Fq::ONE, Fq::ONE) {
        return Err(ApproxError::HypothesisViolated(
            "part (2) needs epsilon = (1, 1)".into(),
        ));
    }
    if !params.t().is_multiple_of(params.field().degree()) {
        return Err(ApproxError::HypothesisViolated(
            "part (2) needs r to be a power of q".into(),
        ));
    }
    let l = params.lambdas();
    if l[0] == Fq::ONE || l.iter().any(|&x| x != l[0]) {
        return Err(ApproxError::HypothesisViolated(
            "part (2) needs all lambda_i equal to one lambda != 1".into(),
        ));
    }
    Ok(l[0])
}

fn phi_checks(params: &PhiParams, n: u32, extra: u128) -> Result<(), ApproxError> {
    if n < 1 {
        return Err(ApproxError::InvalidIndex { n, min: 1 });
    }
    guard(phi_index(params, n).saturating_add(extra))?;
    Ok(())
}

fn phi_word(params: &PhiParams, len: usize) -> Word {
    let f = params.field();
    Word::new(params.lambda_stream(len).into_iter().map(|c| lin(f, c)).collect()).unwrap()
}

/// Part (1): α_n = [0; λ_1 T, ..., λ_{i(n)} T, \overline{T}].
pub fn phi_alpha_n(params: &PhiParams, n: u32) -> Result<Approximant, ApproxError> {
    let m = phi_part1_m(params)?;
    let r = params.r() as u128;
    phi_checks(params, n, (m as u128 + 1) * r.saturating_pow(n))?;
    let f = params.field();
    let i_n = phi_index(params, n) as usize;
    let pre = phi_word(params, i_n);
    let per = Word::single(Poly::t(f)).unwrap();
    let quad = QuadraticNumber::from_periodic_cf(Poly::zero(f), &pre, &per)?;
    let shared = i_n + m * r.pow(n) as usize - 1;
    Ok(Approximant { n, quad, shared })
}

/// Part (2), rewritten form:
/// β_n = [0; λ_1 T, ..., λ_{i(n)−r^{n−1}} T, \overline{T^[r^{n−1}−1], λT, T^[r^n−r^{n−1}]}].
pub fn phi_beta_n(params: &PhiParams, n: u32) -> Result<Approximant, ApproxError> {
    let lambda = phi_part2_lambda(params)?;
    let r = params.r() as u128;
    phi_checks(params, n, (params.ell() as u128 + 2) * r.saturating_pow(n))?;
    let f = params.field();
    let i_n = phi_index(params, n) as usize;
    let (rn, rn1) = (r.pow(n) as usize, r.pow(n - 1) as usize);
    let pre = phi_word(params, i_n - rn1);
    let t = Word::single(Poly::t(f)).unwrap();
    let per = t
        .power(rn1 - 1)
        .concat(&Word::single(lin(f, lambda)).unwrap())
        .concat(&t.power(rn - rn1));
    let quad = QuadraticNumber::from_periodic_cf(Poly::zero(f), &pre, &per)?;
    let shared = i_n + (params.ell() + 1) * rn - 1;
    Ok(Approximant { n, quad, shared })
}

/// β_n as first written: [0; λ_1 T, ..., λ_{i(n)−1} T, \overline{λ^{r^n} T, T^[r^n − 1]}].
pub fn phi_beta_n_plain(params: &PhiParams, n: u32) -> Result<QuadraticNumber, ApproxError> {
    let lambda = phi_part2_lambda(params)?;
    let r = params.r();
    phi_checks(params, n, r as u128)?;
    let f = params.field();
    let i_n = phi_index(params, n) as usize;
    let pre = phi_word(params, i_n - 1);
    let twisted = f.pow(lambda, r.pow(n) as i64).unwrap();
    let per = Word::single(lin(f, twisted))
        .unwrap()
        .concat(&Word::single(Poly::t(f)).unwrap().power(r.pow(n) as usize - 1));
    Ok(QuadraticNumber::from_periodic_cf(Poly::zero(f), &pre, &per)?)
}
