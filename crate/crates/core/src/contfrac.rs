//! Continued fractions [a_0, a_1, a_2, ...] with partial quotients in F_q[T].

use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::algebra::{AbsExponent, Field, Poly};
use crate::laurent::{Laurent, LaurentError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfError {
    #[error("partial quotient {index} has degree < 1")]
    DegreeZeroLetter { index: usize },
    #[error("periodic continued fraction needs a nonempty period")]
    EmptyPeriod,
    #[error("continued fraction has only {available} letters, {requested} requested")]
    InsufficientLetters { available: usize, requested: usize },
    #[error("precision exhausted before a_0 was determined")]
    PrecisionExhausted,
    #[error("no disagreement within the first {checked} partial quotients")]
    IdenticalPrefix { checked: usize },
    #[error("partial quotients agree at index {index}")]
    SharedValue { index: usize },
    #[error("partial quotients already differ at index {index}")]
    PrefixMismatch { index: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Series(#[from] LaurentError),
}

/// A finite word of partial quotients, each of T-degree at least 1.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Word(Vec<Poly>);

impl Word {
    pub fn new(letters: Vec<Poly>) -> Result<Word, CfError> {
        if let Some(i) = letters.iter().position(|l| l.degree().unwrap_or(0) < 1) {
            return Err(CfError::DegreeZeroLetter { index: i + 1 });
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// The one-letter word (a).
    pub fn single(a: Poly) -> Result<Word, CfError> {
        Word::new(vec![a])
    }

    pub fn letters(&self) -> &[Poly] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// W ⊕ V
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    /// W^[n]; W^[0] is the empty word.
    pub fn power(&self, n: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() * n);
        for _ in 0..n {
            v.extend(self.0.iter().cloned());
        }
        Word(v)
    }

    pub fn push(&mut self, letter: Poly) -> Result<(), CfError> {
        if letter.degree().unwrap_or(0) < 1 {
            return Err(CfError::DegreeZeroLetter {
                index: self.0.len() + 1,
            });
        }
        self.0.push(letter);
        Ok(())
    }

    pub fn append(&mut self, other: &Word) {
        self.0.extend(other.0.iter().cloned());
    }

    /// Sum of the letter degrees, i.e. deg q_n for the word as a_1..a_n.
    pub fn total_degree(&self) -> usize {
        self.0.iter().map(|l| l.degree().unwrap()).sum()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

type LetterFn = dyn Fn(usize, &[Poly]) -> Poly + Send + Sync;

/// Memoised letter producer. Letter n (1-based) is computed once from the
/// letters before it; production is serialised by a mutex.
pub struct LetterStream {
    produced: Mutex<Vec<Poly>>,
    generate: Box<LetterFn>,
}

impl LetterStream {
    fn ensure(&self, n: usize) -> std::sync::MutexGuard<'_, Vec<Poly>> {
        let mut guard = self.produced.lock().expect("letter stream poisoned");
        while guard.len() < n {
            let idx = guard.len() + 1;
            let letter = (self.generate)(idx, &guard);
            assert!(
                letter.degree().unwrap_or(0) >= 1,
                "generator produced a letter of degree < 1 at index {idx}"
            );
            guard.push(letter);
        }
        guard
    }

    fn produced_len(&self) -> usize {
        self.produced.lock().expect("letter stream poisoned").len()
    }
}

#[derive(Clone)]
pub enum Tail {
    Finite(Word),
    Periodic { pre: Word, per: Word },
    Generated(Arc<LetterStream>),
}

/// [a_0, a_1, a_2, ...] with a finite, eventually periodic, or generated tail.
#[derive(Clone)]
pub struct ContinuedFraction {
    field: Field,
    a0: Poly,
    tail: Tail,
}

impl ContinuedFraction {
    pub fn finite(a0: Poly, word: Word) -> ContinuedFraction {
        ContinuedFraction {
            field: a0.field().clone(),
            a0,
            tail: Tail::Finite(word),
        }
    }

    pub fn periodic(a0: Poly, pre: Word, per: Word) -> Result<ContinuedFraction, CfError> {
        if per.is_empty() {
            return Err(CfError::EmptyPeriod);
        }
        Ok(ContinuedFraction {
            field: a0.field().clone(),
            a0,
            tail: Tail::Periodic { pre, per },
        })
    }

    /// Lazily generated tail: `generate(n, previous)` returns a_n given
    /// a_1..a_{n-1}.
    pub fn generated<F>(a0: Poly, generate: F) -> ContinuedFraction
    where
        F: Fn(usize, &[Poly]) -> Poly + Send + Sync + 'static,
    {
        let stream = LetterStream {
            produced: Mutex::new(Vec::new()),
            generate: Box::new(generate),
        };
        ContinuedFraction {
            field: a0.field().clone(),
            a0,
            tail: Tail::Generated(Arc::new(stream)),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn a0(&self) -> &Poly {
        &self.a0
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// Number of partial quotients after a_0; `None` if infinite.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> Option<usize> {
        match &self.tail {
            Tail::Finite(w) => Some(w.len()),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.tail, Tail::Finite(_))
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.tail, Tail::Periodic { .. })
    }

    /// a_i for i ≥ 1; `None` past the end of a finite expansion.
    pub fn letter(&self, i: usize) -> Option<Poly> {
        assert!(i >= 1, "letters are indexed from 1");
        match &self.tail {
            Tail::Finite(w) => w.letters().get(i - 1).cloned(),
            Tail::Periodic { pre, per } => {
                if i <= pre.len() {
                    Some(pre.letters()[i - 1].clone())
                } else {
                    Some(per.letters()[(i - 1 - pre.len()) % per.len()].clone())
                }
            }
            Tail::Generated(s) => Some(s.ensure(i)[i - 1].clone()),
        }
    }

    /// a_1..a_n.
    pub fn prefix(&self, n: usize) -> Result<Vec<Poly>, CfError> {
        match &self.tail {
            Tail::Finite(w) if w.len() < n => Err(CfError::InsufficientLetters {
                available: w.len(),
                requested: n,
            }),
            Tail::Finite(w) => Ok(w.letters()[..n].to_vec()),
            Tail::Periodic { .. } => Ok((1..=n).map(|i| self.letter(i).unwrap()).collect()),
            Tail::Generated(s) => Ok(s.ensure(n)[..n].to_vec()),
        }
    }

    /// Degrees of a_1..a_n without cloning letters.
    pub fn prefix_degrees(&self, n: usize) -> Result<Vec<usize>, CfError> {
        let deg = |p: &Poly| p.degree().unwrap();
        match &self.tail {
            Tail::Finite(w) if w.len() < n => Err(CfError::InsufficientLetters {
                available: w.len(),
                requested: n,
            }),
            Tail::Finite(w) => Ok(w.letters()[..n].iter().map(deg).collect()),
            Tail::Periodic { pre, per } => Ok((1..=n)
                .map(|i| {
                    if i <= pre.len() {
                        deg(&pre.letters()[i - 1])
                    } else {
                        deg(&per.letters()[(i - 1 - pre.len()) % per.len()])
                    }
                })
                .collect()),
            Tail::Generated(s) => Ok(s.ensure(n)[..n].iter().map(deg).collect()),
        }
    }

    /// Truncation [a_0, a_1, ..., a_n] as a finite continued fraction.
    pub fn truncated(&self, n: usize) -> Result<ContinuedFraction, CfError> {
        Ok(ContinuedFraction::finite(self.a0.clone(), Word(self.prefix(n)?)))
    }

    /// Iterator over the convergents (p_n, q_n), n = 0, 1, ...
    pub fn convergents(&self) -> Convergents<'_> {
        Convergents {
            cf: self,
            state: ConvergentState::start(&self.a0),
            started: false,
        }
    }

    /// Text form "[a0; a1, a2, ...]"; periodic tails as "[a0; pre | per]".
    pub fn encode(&self) -> String {
        let join = |ls: &[Poly]| ls.iter().map(|l| l.encode()).collect::<Vec<_>>().join(", ");
        match &self.tail {
            Tail::Finite(w) => format!("[{}; {}]", self.a0.encode(), join(w.letters())),
            Tail::Periodic { pre, per } => {
                format!(
                    "[{}; {} | {}]",
                    self.a0.encode(),
                    join(pre.letters()),
                    join(per.letters())
                )
            }
            Tail::Generated(s) => {
                let n = s.produced_len();
                let shown = s.ensure(n.min(8));
                format!("[{}; {}, ...]", self.a0.encode(), join(&shown[..n.min(8)]))
            }
        }
    }

    /// Parses the finite or periodic text form.
    pub fn parse(field: &Field, text: &str) -> Result<ContinuedFraction, CfError> {
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| CfError::Parse(format!("expected [a0; ...], got {t:?}")))?;
        let (head, rest) = inner
            .split_once(';')
            .ok_or_else(|| CfError::Parse("missing ';' after a0".into()))?;
        let parse_poly = |s: &str| Poly::parse(field, s).map_err(|e| CfError::Parse(e.to_string()));
        let a0 = parse_poly(head)?;
        let parse_word = |s: &str| -> Result<Word, CfError> {
            let letters = split_top_level(s)
                .into_iter()
                .filter(|x| !x.trim().is_empty())
                .map(&parse_poly)
                .collect::<Result<Vec<_>, _>>()?;
            Word::new(letters)
        };
        match rest.split_once('|') {
            None => Ok(ContinuedFraction::finite(a0, parse_word(rest)?)),
            Some((pre, per)) => ContinuedFraction::periodic(a0, parse_word(pre)?, parse_word(per)?),
        }
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl fmt::Debug for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

/// The n-th convergent p_n / q_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentPair {
    pub p: Poly,
    pub q: Poly,
    pub index: usize,
}

/// Running state of the convergent recurrence: holds (p_n, q_n) and
/// (p_{n-1}, q_{n-1}).
#[derive(Clone, Debug)]
pub struct ConvergentState {
    pub p: Poly,
    pub q: Poly,
    pub p_prev: Poly,
    pub q_prev: Poly,
    /// n, with n = 0 right after `start`.
    pub index: usize,
}

impl ConvergentState {
    /// p_{-1} = 1, p_0 = a_0, q_{-1} = 0, q_0 = 1.
    pub fn start(a0: &Poly) -> ConvergentState {
        let f = a0.field();
        ConvergentState {
            p: a0.clone(),
            q: Poly::one(f),
            p_prev: Poly::one(f),
            q_prev: Poly::zero(f),
            index: 0,
        }
    }

    /// Applies p_n = a_n p_{n-1} + p_{n-2}.
    pub fn push(&mut self, a: &Poly) {
        let p = &(a * &self.p) + &self.p_prev;
        let q = &(a * &self.q) + &self.q_prev;
        self.p_prev = std::mem::replace(&mut self.p, p);
        self.q_prev = std::mem::replace(&mut self.q, q);
        self.index += 1;
    }

    pub fn pair(&self) -> ConvergentPair {
        ConvergentPair {
            p: self.p.clone(),
            q: self.q.clone(),
            index: self.index,
        }
    }

    /// Runs the recurrence over a word.
    pub fn from_letters(a0: &Poly, letters: &[Poly]) -> ConvergentState {
        let mut st = ConvergentState::start(a0);
        if letters.len() <= TREE_CUTOFF {
            for a in letters {
                st.push(a);
            }
            return st;
        }
        // [[p_n, p_{n-1}], [q_n, q_{n-1}]] = Π [[a_i, 1], [1, 0]]
        let [x, y, z, w] = letters_matrix(letters);
        let a0 = &st.p;
        ConvergentState {
            p: &(a0 * &x) + &z,
            p_prev: &(a0 * &y) + &w,
            q: x,
            q_prev: y,
            index: letters.len(),
        }
    }
}

const TREE_CUTOFF: usize = 64;

// Row-major product of [[a, 1], [1, 0]] over the letters, by halving so the
// large multiplications are balanced.
fn letters_matrix(letters: &[Poly]) -> [Poly; 4] {
    if letters.len() <= TREE_CUTOFF {
        let f = letters[0].field();
        let (mut x, mut y, mut z, mut w) = (Poly::one(f), Poly::zero(f), Poly::zero(f), Poly::one(f));
        for a in letters {
            let nx = &(&x * a) + &y;
            let nz = &(&z * a) + &w;
            y = std::mem::replace(&mut x, nx);
            w = std::mem::replace(&mut z, nz);
        }
        return [x, y, z, w];
    }
    let (l, r) = letters.split_at(letters.len() / 2);
    let [a, b, c, d] = letters_matrix(l);
    let [e, f, g, h] = letters_matrix(r);
    [
        &(&a * &e) + &(&b * &g),
        &(&a * &f) + &(&b * &h),
        &(&c * &e) + &(&d * &g),
        &(&c * &f) + &(&d * &h),
    ]
}

pub struct Convergents<'a> {
    cf: &'a ContinuedFraction,
    state: ConvergentState,
    started: bool,
}

impl Iterator for Convergents<'_> {
    type Item = ConvergentPair;

    fn next(&mut self) -> Option<ConvergentPair> {
        if self.started {
            let a = self.cf.letter(self.state.index + 1)?;
            self.state.push(&a);
        }
        self.started = true;
        Some(self.state.pair())
    }
}

/// Convergents 0..=n.
pub fn convergents(cf: &ContinuedFraction, n: usize) -> Result<Vec<ConvergentPair>, CfError> {
    if let Some(len) = cf.len() {
        if len < n {
            return Err(CfError::InsufficientLetters {
                available: len,
                requested: n,
            });
        }
    }
    Ok(cf.convergents().take(n + 1).collect())
}

/// Why [`expand`] stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// `max_letters` partial quotients were produced.
    MaxLetters,
    /// The remaining precision cannot determine another partial quotient
    /// (this includes a remainder that is zero to precision).
    PrecisionExhausted,
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub cf: ContinuedFraction,
    pub stop: StopReason,
}

/// Continued fraction expansion of a truncated series. Every returned
/// partial quotient is exact.
pub fn expand(x: &Laurent, max_letters: usize) -> Result<Expansion, CfError> {
    let a0 = x.polynomial_part().map_err(|_| CfError::PrecisionExhausted)?;
    let mut letters = Vec::new();
    let mut cur = x.clone();
    let mut a = a0.clone();
    let stop = loop {
        if letters.len() == max_letters {
            break StopReason::MaxLetters;
        }
        let frac = cur.sub(&Laurent::from_poly(&a, cur.prec()));
        if frac.is_zero() {
            break StopReason::PrecisionExhausted;
        }
        let next = frac.inv()?;
        if next.prec() < 1 {
            break StopReason::PrecisionExhausted;
        }
        a = next.polynomial_part()?;
        letters.push(a.clone());
        cur = next;
    };
    Ok(Expansion {
        cf: ContinuedFraction::finite(a0, Word(letters)),
        stop,
    })
}

/// How many partial quotients [`eval_cf`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letters {
    /// The convergent p_n / q_n.
    Count(usize),
    /// The value of the whole continued fraction: exact for finite ones,
    /// otherwise a convergent far enough out that it agrees to `prec`.
    All,
}

/// Series of a continued fraction to precision `prec`.
pub fn eval_cf(cf: &ContinuedFraction, letters: Letters, prec: i64) -> Result<Laurent, CfError> {
    let state = match (letters, cf.len()) {
        (Letters::Count(n), _) => ConvergentState::from_letters(cf.a0(), &cf.prefix(n)?),
        (Letters::All, Some(len)) => ConvergentState::from_letters(cf.a0(), &cf.prefix(len)?),
        (Letters::All, None) => {
            // |ξ - p_n/q_n| = q^{-(deg q_n + deg q_{n+1})}
            let mut st = ConvergentState::start(cf.a0());
            let mut i = 1;
            loop {
                let a = cf.letter(i).expect("infinite tail");
                let dq = st.q.deg_i64();
                if 2 * dq + a.deg_i64() >= prec {
                    break;
                }
                st.push(&a);
                i += 1;
            }
            st
        }
    };
    Ok(Laurent::from_rational(&state.p, &state.q, prec)?)
}

/// Result of locating the first differing partial quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    /// Number of shared partial quotients a_1..a_k.
    pub shared: usize,
    /// Exponent of |x - y|.
    pub exponent: AbsExponent,
}

/// Exponent of |x - y| from the first disagreement of the two expansions:
/// |a_{k+1} - b_{k+1}| / (|a_{k+1} b_{k+1}| |q_k|^2).
pub fn cf_disagreement(x: &ContinuedFraction, y: &ContinuedFraction, budget: usize) -> Result<Disagreement, CfError> {
    if x.a0() != y.a0() {
        return Ok(Disagreement {
            shared: 0,
            exponent: (x.a0() - y.a0()).abs(),
        });
    }
    let mut deg_qk: i64 = 0;
    for i in 1..=budget {
        match (in_range(x, i), in_range(y, i)) {
            (Some(a), Some(b)) if a == b => deg_qk += a.deg_i64(),
            (Some(a), Some(b)) => {
                let e = (&a - &b).deg_i64() - a.deg_i64() - b.deg_i64() - 2 * deg_qk;
                return Ok(Disagreement {
                    shared: i - 1,
                    exponent: AbsExponent::int(e),
                });
            }
            (Some(a), None) | (None, Some(a)) => {
                // one side is the convergent p_k/q_k of the other
                let e = -(2 * deg_qk + a.deg_i64());
                return Ok(Disagreement {
                    shared: i - 1,
                    exponent: AbsExponent::int(e),
                });
            }
            (None, None) => return Err(CfError::IdenticalPrefix { checked: i - 1 }),
        }
    }
    Err(CfError::IdenticalPrefix { checked: budget })
}

fn in_range(cf: &ContinuedFraction, i: usize) -> Option<Poly> {
    match cf.len() {
        Some(len) if i > len => None,
        _ => cf.letter(i),
    }
}

/// Exponent of |x - y| for continued fractions sharing a_0 and at least one
/// later partial quotient difference within `budget`.
pub fn cf_distance(x: &ContinuedFraction, y: &ContinuedFraction, budget: usize) -> Result<AbsExponent, CfError> {
    cf_disagreement(x, y, budget).map(|d| d.exponent)
}

/// Distance exponent given the claimed number k of shared partial quotients.
pub fn cf_distance_at(x: &ContinuedFraction, y: &ContinuedFraction, k: usize) -> Result<AbsExponent, CfError> {
    if x.a0() != y.a0() {
        return Err(CfError::PrefixMismatch { index: 0 });
    }
    let xs = x.prefix(k + 1)?;
    let ys = y.prefix(k + 1)?;
    if let Some(i) = (0..k).find(|&i| xs[i] != ys[i]) {
        return Err(CfError::PrefixMismatch { index: i + 1 });
    }
    let (a, b) = (&xs[k], &ys[k]);
    if a == b {
        return Err(CfError::SharedValue { index: k + 1 });
    }
    let deg_qk: i64 = xs[..k].iter().map(|l| l.deg_i64()).sum();
    Ok(AbsExponent::int(
        (a - b).deg_i64() - a.deg_i64() - b.deg_i64() - 2 * deg_qk,
    ))
}
