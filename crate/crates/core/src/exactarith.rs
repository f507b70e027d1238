//! Exact rational arithmetic on `Q ∪ {∞}` and continued fractions.
//!
//! Every quantity in this crate is exact. [`ExtendedRational`] is the
//! shared slope/fraction type: a reduced `p/q` with `q > 0`, or the single
//! unsigned infinity `1/0`.
//!
//! Continued fractions use the "last term is the integer part" order:
//!
//! ```text
//! F([a_1, ..., a_k]) = a_k + 1/(a_{k-1} + 1/( ... + 1/a_1))
//! ```
//!
//! so `[2, 3]` evaluates to `3 + 1/2 = 7/2`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("0/0 is not a rational number")]
    Indeterminate,
    #[error("operation needs a finite value, got inf")]
    Infinite,
    #[error("empty continued fraction")]
    EmptyContinuedFraction,
}

/// A reduced fraction `p/q` or the infinite slope `1/0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedRational {
    num: BigInt,
    den: BigInt,
}

impl ExtendedRational {
    /// Reduces `p/q`. Any `(p, 0)` with `p != 0` maps to `1/0`.
    pub fn reduce(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, ArithError> {
        let (p, q) = (p.into(), q.into());
        if q.is_zero() {
            if p.is_zero() {
                return Err(ArithError::Indeterminate);
            }
            return Ok(Self::infinity());
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / &g, q / &g);
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        Ok(ExtendedRational { num: p, den: q })
    }

    /// `p/q` for a pair known not to be `(0, 0)`.
    pub(crate) fn ratio(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        Self::reduce(p, q).expect("ratio called with 0/0")
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        ExtendedRational { num: n.into(), den: BigInt::one() }
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn infinity() -> Self {
        ExtendedRational { num: BigInt::one(), den: BigInt::zero() }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.is_finite() && self.num.is_negative()
    }

    /// `1/r`, with `1/0 = inf` and `1/inf = 0`.
    pub fn recip(&self) -> Self {
        Self::ratio(self.den.clone(), self.num.clone())
    }

    pub fn abs(&self) -> Self {
        ExtendedRational { num: self.num.abs(), den: self.den.clone() }
    }

    /// Splits a finite value into `floor(r)` and `r - floor(r)` in `[0, 1)`.
    pub fn floor_fract(&self) -> Result<(BigInt, ExtendedRational), ArithError> {
        if self.is_infinite() {
            return Err(ArithError::Infinite);
        }
        let (q, r) = self.num.div_mod_floor(&self.den);
        Ok((q, ExtendedRational { num: r, den: self.den.clone() }.normalized()))
    }

    fn normalized(self) -> Self {
        Self::ratio(self.num, self.den)
    }

    fn finite_op(
        &self,
        other: &Self,
        op: &str,
        f: impl FnOnce(&BigInt, &BigInt, &BigInt, &BigInt) -> (BigInt, BigInt),
    ) -> Self {
        assert!(
            self.is_finite() && other.is_finite(),
            "{op} of infinite values is undefined"
        );
        let (p, q) = f(&self.num, &self.den, &other.num, &other.den);
        Self::ratio(p, q)
    }
}

impl Neg for ExtendedRational {
    type Output = ExtendedRational;
    fn neg(self) -> Self::Output {
        if self.is_infinite() {
            self
        } else {
            ExtendedRational { num: -self.num, den: self.den }
        }
    }
}

impl Neg for &ExtendedRational {
    type Output = ExtendedRational;
    fn neg(self) -> Self::Output {
        -self.clone()
    }
}

// Field operations are defined on finite values only; they panic on `inf`.
impl Add for &ExtendedRational {
    type Output = ExtendedRational;
    fn add(self, rhs: Self) -> Self::Output {
        self.finite_op(rhs, "sum", |a, b, c, d| (a * d + c * b, b * d))
    }
}

impl Sub for &ExtendedRational {
    type Output = ExtendedRational;
    fn sub(self, rhs: Self) -> Self::Output {
        self.finite_op(rhs, "difference", |a, b, c, d| (a * d - c * b, b * d))
    }
}

impl Mul for &ExtendedRational {
    type Output = ExtendedRational;
    fn mul(self, rhs: Self) -> Self::Output {
        self.finite_op(rhs, "product", |a, b, c, d| (a * c, b * d))
    }
}

impl From<i64> for ExtendedRational {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl From<BigInt> for ExtendedRational {
    fn from(n: BigInt) -> Self {
        Self::integer(n)
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Error produced by the text grammar, carrying the byte offset of the
/// offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at position {position}: {token:?}")]
pub struct ParseError {
    pub message: String,
    pub token: String,
    pub position: usize,
}

impl ParseError {
    pub fn new(message: impl Into<String>, token: impl Into<String>, position: usize) -> Self {
        ParseError { message: message.into(), token: token.into(), position }
    }

    pub(crate) fn shifted(mut self, offset: usize) -> Self {
        self.position += offset;
        self
    }
}

fn parse_int_token(s: &str, signed: bool, offset: usize) -> Result<BigInt, ParseError> {
    let digits = if signed {
        s.strip_prefix(['+', '-']).unwrap_or(s)
    } else {
        s
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::new("malformed integer", s, offset));
    }
    s.parse::<BigInt>()
        .map_err(|_| ParseError::new("malformed integer", s, offset))
}

/// Parses a bare integer with optional sign, ignoring surrounding whitespace.
pub fn parse_integer(s: &str) -> Result<BigInt, ParseError> {
    let lead = s.len() - s.trim_start().len();
    parse_int_token(s.trim(), true, lead)
}

/// Parses `[+-]digits[/digits]` into an unreduced numerator/denominator pair.
pub fn parse_fraction_pair(s: &str) -> Result<(BigInt, BigInt), ParseError> {
    let lead = s.len() - s.trim_start().len();
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseError::new("expected a fraction", s, 0));
    }
    match t.split_once('/') {
        Some((p, q)) => Ok((
            parse_int_token(p, true, lead)?,
            parse_int_token(q, false, lead + p.len() + 1)?,
        )),
        None => Ok((parse_int_token(t, true, lead)?, BigInt::one())),
    }
}

impl FromStr for ExtendedRational {
    type Err = ParseError;

    /// Grammar: `[+-]digits[/digits]` or `inf`, surrounding whitespace allowed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "inf" {
            return Ok(Self::infinity());
        }
        let (p, q) = parse_fraction_pair(s)?;
        let lead = s.len() - s.trim_start().len();
        Self::reduce(p, q).map_err(|e| ParseError::new(e.to_string(), s.trim(), lead))
    }
}

/// Finite list of continued-fraction terms `[a_1, ..., a_k]`, evaluated as
/// `a_k + 1/(a_{k-1} + ...)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction(pub Vec<BigInt>);

impl ContinuedFraction {
    pub fn terms(&self) -> &[BigInt] {
        &self.0
    }

    pub fn negated(&self) -> Self {
        ContinuedFraction(self.0.iter().map(|a| -a).collect())
    }
}

/// Canonical expansion of a finite value. Non-negative values use the
/// Euclidean algorithm; negative values are the term-wise negation of the
/// expansion of `-r`.
pub fn cf_expand(r: &ExtendedRational) -> Result<ContinuedFraction, ArithError> {
    if r.is_infinite() {
        return Err(ArithError::Infinite);
    }
    if r.is_negative() {
        return cf_expand(&-r).map(|cf| cf.negated());
    }
    let (mut p, mut q) = (r.numer().clone(), r.denom().clone());
    let mut terms = Vec::new();
    loop {
        let (a, rem) = p.div_rem(&q);
        terms.push(a);
        if rem.is_zero() {
            break;
        }
        p = q;
        q = rem;
    }
    terms.reverse();
    Ok(ContinuedFraction(terms))
}

/// Exact evaluation; may return `inf`.
pub fn cf_value(cf: &ContinuedFraction) -> Result<ExtendedRational, ArithError> {
    let mut it = cf.0.iter();
    let first = it.next().ok_or(ArithError::EmptyContinuedFraction)?;
    // (p, q) -> a + q/p = (a p + q) / p is unimodular, so (p, q) never hits (0, 0).
    let (mut p, mut q) = (first.clone(), BigInt::one());
    for a in it {
        let next = a * &p + &q;
        q = p;
        p = next;
    }
    Ok(ExtendedRational::ratio(p, q))
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for ContinuedFraction {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lead = s.len() - s.trim_start().len();
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| ParseError::new("expected [a1,a2,...]", t, lead))?;
        if inner.trim().is_empty() {
            return Err(ParseError::new("empty continued fraction", t, lead));
        }
        let mut offset = lead + 1;
        let mut terms = Vec::new();
        for item in inner.split(',') {
            terms.push(parse_integer(item).map_err(|e| e.shifted(offset))?);
            offset += item.len() + 1;
        }
        Ok(ContinuedFraction(terms))
    }
}

/// Negative (Hirzebruch-Jung) continued fraction `[c_1, ..., c_k]^-` of a
/// finite value: `r = c_1 - 1/(c_2 - 1/(... - 1/c_k))`.
pub(crate) fn negative_cf(r: &ExtendedRational) -> Result<Vec<BigInt>, ArithError> {
    if r.is_infinite() {
        return Err(ArithError::Infinite);
    }
    let (mut p, mut q) = (r.numer().clone(), r.denom().clone());
    let mut out = Vec::new();
    loop {
        let c = Integer::div_ceil(&p, &q);
        let rem = &c * &q - &p;
        out.push(c);
        if rem.is_zero() {
            return Ok(out);
        }
        p = q;
        q = rem;
    }
}

/// Value of `[c_1, ..., c_k]^-` as a numerator/denominator pair, via the
/// product of `[[c, -1], [1, 0]]` matrices. Zero terms are allowed.
pub(crate) fn negative_cf_value(terms: &[BigInt]) -> (BigInt, BigInt) {
    let (mut a, mut b, mut c, mut d) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    for t in terms {
        let (na, nb) = (&a * t + &b, -&a);
        let (nc, nd) = (&c * t + &d, -&c);
        a = na;
        b = nb;
        c = nc;
        d = nd;
    }
    (a, c)
}

/// Order of a first homology group: finite, or infinite when the
/// presentation matrix is singular.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum H1Order {
    Finite(BigInt),
    Infinite,
}

impl H1Order {
    /// `|det|`, or infinite for a zero determinant.
    pub fn from_determinant(det: BigInt) -> Self {
        if det.is_zero() {
            H1Order::Infinite
        } else {
            H1Order::Finite(det.abs())
        }
    }

    /// The order of `Z/n`: `|n|`, infinite for `n = 0`.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self::from_determinant(n.into())
    }
}

impl fmt::Display for H1Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            H1Order::Finite(n) => write!(f, "{n}"),
            H1Order::Infinite => f.write_str("infinite"),
        }
    }
}

/// Exact determinant of a square integer matrix by fraction-free
/// (Bareiss) elimination. The empty matrix has determinant 1.
pub fn determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    assert!(matrix.iter().all(|row| row.len() == n), "matrix must be square");
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}
