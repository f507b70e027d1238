//! Seifert fibered spaces over S² and lens spaces.
//!
//! A manifold is written `SFS(b; β_1/α_1, ..., β_k/α_k)`. Orientation is
//! carried by the signs of the invariants: [`mirror`] negates `b` and every
//! `β_i`. The Euler number is `-(b + Σ β_i/α_i)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactarith::{
    determinant, negative_cf, negative_cf_value, parse_fraction_pair, parse_integer,
    ExtendedRational, H1Order, ParseError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeifertError {
    #[error("fiber index must be positive, got {0}")]
    NonPositiveIndex(BigInt),
    #[error("fiber invariants {alpha}, {beta} are not coprime")]
    NotCoprime { alpha: BigInt, beta: BigInt },
}

/// Fiber invariant pair `(α, β)` with `α ≥ 1` and `gcd(α, β) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fiber {
    alpha: BigInt,
    beta: BigInt,
}

impl Fiber {
    pub fn new(alpha: impl Into<BigInt>, beta: impl Into<BigInt>) -> Result<Self, SeifertError> {
        let (alpha, beta) = (alpha.into(), beta.into());
        if !alpha.is_positive() {
            return Err(SeifertError::NonPositiveIndex(alpha));
        }
        if !alpha.gcd(&beta).is_one() {
            return Err(SeifertError::NotCoprime { alpha, beta });
        }
        Ok(Fiber { alpha, beta })
    }

    /// Fiber whose invariant `β/α` is the given finite fraction.
    pub fn from_fraction(r: &ExtendedRational) -> Self {
        assert!(r.is_finite(), "fiber fraction must be finite");
        Fiber { alpha: r.denom().clone(), beta: r.numer().clone() }
    }

    pub fn alpha(&self) -> &BigInt {
        &self.alpha
    }

    pub fn beta(&self) -> &BigInt {
        &self.beta
    }

    pub fn fraction(&self) -> ExtendedRational {
        ExtendedRational::ratio(self.beta.clone(), self.alpha.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeifertManifold {
    obstruction: BigInt,
    fibers: Vec<Fiber>,
}

impl SeifertManifold {
    pub fn new(obstruction: impl Into<BigInt>, fibers: Vec<Fiber>) -> Self {
        SeifertManifold { obstruction: obstruction.into(), fibers }
    }

    /// Convenience constructor from `(α, β)` pairs.
    pub fn from_pairs(
        obstruction: impl Into<BigInt>,
        pairs: &[(i64, i64)],
    ) -> Result<Self, SeifertError> {
        let fibers = pairs
            .iter()
            .map(|&(a, b)| Fiber::new(a, b))
            .collect::<Result<_, _>>()?;
        Ok(Self::new(obstruction, fibers))
    }

    pub fn obstruction(&self) -> &BigInt {
        &self.obstruction
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    /// `b + Σ β_i/α_i`.
    fn total(&self) -> ExtendedRational {
        self.fibers
            .iter()
            .fold(ExtendedRational::integer(self.obstruction.clone()), |acc, f| {
                &acc + &f.fraction()
            })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = normalize(self);
        serde_json::json!({
            "normal_form": n.to_string(),
            "obstruction": crate::json_int(&n.obstruction),
            "fibers": n.fibers.iter()
                .map(|f| [crate::json_int(&f.alpha), crate::json_int(&f.beta)])
                .collect::<Vec<_>>(),
            "euler_number": euler_number(self).to_string(),
            "h1": crate::json_h1(&h1_order(self)),
            "type_triple": small_seifert_type(self)
                .map(|t| t.iter().map(crate::json_int).collect::<Vec<_>>()),
            "lens": as_lens(self).map(|l| l.to_string()),
        })
    }
}

impl fmt::Display for SeifertManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SFS({}", self.obstruction)?;
        for (i, fib) in self.fibers.iter().enumerate() {
            f.write_str(if i == 0 { "; " } else { ", " })?;
            write!(f, "{}/{}", fib.beta, fib.alpha)?;
        }
        f.write_str(")")
    }
}

impl FromStr for SeifertManifold {
    type Err = ParseError;

    /// `SFS(b; β_1/α_1, β_2/α_2, ...)`; fibers are taken unreduced.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lead = s.len() - s.trim_start().len();
        let t = s.trim();
        let inner = t
            .strip_prefix("SFS(")
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| ParseError::new("expected SFS(b; β/α, ...)", t, lead))?;
        let base = lead + 4;
        let (b_str, rest) = match inner.split_once(';') {
            Some((b, rest)) => (b, Some(rest)),
            None => (inner, None),
        };
        let obstruction = parse_integer(b_str).map_err(|e| e.shifted(base))?;
        let mut fibers = Vec::new();
        if let Some(rest) = rest.filter(|r| !r.trim().is_empty()) {
            let mut offset = base + b_str.len() + 1;
            for item in rest.split(',') {
                let (beta, alpha) = parse_fraction_pair(item).map_err(|e| e.shifted(offset))?;
                let fiber = Fiber::new(alpha, beta)
                    .map_err(|e| ParseError::new(e.to_string(), item.trim(), offset))?;
                fibers.push(fiber);
                offset += item.len() + 1;
            }
        }
        Ok(SeifertManifold::new(obstruction, fibers))
    }
}

/// Reduces each `β_i` into `(0, α_i)`, absorbing quotients into `b`, and
/// drops index-1 fibers. Fibers are sorted.
pub fn normalize(s: &SeifertManifold) -> SeifertManifold {
    let mut b = s.obstruction.clone();
    let mut fibers = Vec::new();
    for f in &s.fibers {
        let (q, r) = f.beta.div_mod_floor(&f.alpha);
        b += q;
        if !f.alpha.is_one() {
            fibers.push(Fiber { alpha: f.alpha.clone(), beta: r });
        }
    }
    fibers.sort();
    SeifertManifold { obstruction: b, fibers }
}

pub fn euler_number(s: &SeifertManifold) -> ExtendedRational {
    -s.total()
}

/// `|det|` of the presentation matrix with rows `(α_i e_i | β_i)` and
/// `(1 ... 1 | -b)`.
pub fn h1_order(s: &SeifertManifold) -> H1Order {
    let k = s.fibers.len();
    let mut m = vec![vec![BigInt::zero(); k + 1]; k + 1];
    for (i, f) in s.fibers.iter().enumerate() {
        m[i][i] = f.alpha.clone();
        m[i][k] = f.beta.clone();
        m[k][i] = BigInt::one();
    }
    m[k][k] = -&s.obstruction;
    H1Order::from_determinant(determinant(&m))
}

/// Sorted indices of the exceptional fibers.
pub fn exceptional_indices(s: &SeifertManifold) -> Vec<BigInt> {
    normalize(s).fibers.into_iter().map(|f| f.alpha).collect()
}

pub fn small_seifert_type(s: &SeifertManifold) -> Option<[BigInt; 3]> {
    let idx = exceptional_indices(s);
    <[BigInt; 3]>::try_from(idx).ok()
}

pub fn mirror(s: &SeifertManifold) -> SeifertManifold {
    SeifertManifold {
        obstruction: -&s.obstruction,
        fibers: s
            .fibers
            .iter()
            .map(|f| Fiber { alpha: f.alpha.clone(), beta: -&f.beta })
            .collect(),
    }
}

/// Lens space `L(p, q)` with `0 ≤ q < p`; `L(0, 1)` is S² × S¹ and
/// `L(1, 0)` is S³.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LensSpace {
    p: BigInt,
    q: BigInt,
}

impl LensSpace {
    /// `L(p, q)` for coprime `p, q` of any sign. Equal to `P/Q` surgery on
    /// the unknot with this module's orientation convention.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        let (p, q) = (p.into(), q.into());
        assert!(p.gcd(&q).is_one(), "lens parameters must be coprime");
        let q = if p.is_negative() { -q } else { q };
        let p = p.abs();
        if p.is_zero() {
            return LensSpace { p, q: BigInt::one() };
        }
        let q = q.mod_floor(&p);
        LensSpace { p, q }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn mirror(&self) -> LensSpace {
        LensSpace::new(self.p.clone(), -&self.q)
    }

    /// Orientation-preserving: `q' ≡ q^{±1} (mod p)`. Unoriented also
    /// allows `q' ≡ -q^{±1}`.
    pub fn equivalent(&self, other: &LensSpace, oriented: bool) -> bool {
        if self.p != other.p {
            return false;
        }
        if self.p <= BigInt::one() {
            return true;
        }
        let p = &self.p;
        let candidates = |q: &BigInt| {
            let mut v = vec![q.clone()];
            if let Some(inv) = mod_inverse(q, p) {
                v.push(inv);
            }
            if !oriented {
                let neg: Vec<BigInt> = v.iter().map(|x| (-x).mod_floor(p)).collect();
                v.extend(neg);
            }
            v
        };
        candidates(&self.q).contains(&other.q)
    }

    pub fn homology(&self) -> H1Order {
        H1Order::cyclic(self.p.clone())
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

/// Lens space for manifolds with at most two exceptional fibers.
///
/// The fibration is the surgery chain `m_1 — C — m_2` with coefficients
/// `-α_1/β_1`, `b`, `-α_2/β_2`. Slam-dunking `m_2` into `C` leaves a
/// two-component chain; both rational coefficients are expanded into
/// integer chains and the combined linear chain is evaluated as a negative
/// continued fraction `P/Q`, giving `L(P, Q)`.
pub fn as_lens(s: &SeifertManifold) -> Option<LensSpace> {
    let n = normalize(s);
    let b = ExtendedRational::integer(n.obstruction.clone());
    match n.fibers.as_slice() {
        [] => Some(LensSpace::new(n.obstruction.clone(), 1)),
        [f] => {
            let r = &b + &f.fraction();
            Some(LensSpace::new(r.numer().clone(), r.denom().clone()))
        }
        [f1, f2] => {
            let central = &b + &f2.fraction();
            let meridian = -f1.fraction().recip();
            let mut chain = negative_cf(&meridian).expect("finite");
            chain.reverse();
            chain.extend(negative_cf(&central).expect("finite"));
            let (p, q) = negative_cf_value(&chain);
            Some(LensSpace::new(p, q))
        }
        _ => None,
    }
}

/// Normal forms equal up to fiber order (and global mirror when
/// `oriented` is false). Manifolds with at most two exceptional fibers are
/// compared as lens spaces.
pub fn same_up_to_homeo(a: &SeifertManifold, b: &SeifertManifold, oriented: bool) -> bool {
    match (as_lens(a), as_lens(b)) {
        (Some(la), Some(lb)) => la.equivalent(&lb, oriented),
        (None, None) => {
            let (na, nb) = (normalize(a), normalize(b));
            na == nb || (!oriented && normalize(&mirror(a)) == nb)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sfs(b: i64, pairs: &[(i64, i64)]) -> SeifertManifold {
        SeifertManifold::from_pairs(b, pairs).unwrap()
    }

    fn q(p: i64, d: i64) -> ExtendedRational {
        ExtendedRational::reduce(p, d).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn n1() -> SeifertManifold {
        sfs(0, &[(5, 2), (3, -2), (11, 3)])
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(&n1());
        assert_eq!(n, sfs(-1, &[(3, 1), (5, 2), (11, 3)]));
        assert_eq!(normalize(&n), n);
        assert_eq!(normalize(&sfs(0, &[(1, 7)])), sfs(7, &[]));
    }

    #[test]
    fn euler_number_examples() {
        assert_eq!(euler_number(&n1()), q(-1, 165));
        assert_eq!(euler_number(&sfs(0, &[(5, 2), (3, -2), (15, 4)])), q(0, 1));
        assert_eq!(euler_number(&sfs(6, &[])), q(-6, 1));
    }

    #[test]
    fn h1_examples() {
        assert_eq!(h1_order(&n1()), H1Order::cyclic(1));
        assert_eq!(h1_order(&sfs(0, &[(5, 2), (3, -2), (15, 4)])), H1Order::Infinite);
        assert_eq!(h1_order(&sfs(0, &[(5, 2), (3, -2)])), H1Order::cyclic(4));
    }

    #[test]
    fn indices_and_type() {
        assert_eq!(exceptional_indices(&n1()), ints(&[3, 5, 11]));
        assert_eq!(exceptional_indices(&sfs(0, &[(5, 2), (3, -2)])), ints(&[3, 5]));
        assert!(exceptional_indices(&sfs(3, &[])).is_empty());
        let t = small_seifert_type(&sfs(0, &[(5, 2), (3, -2), (57, 14)])).unwrap();
        assert_eq!(t.to_vec(), ints(&[3, 5, 57]));
        assert_eq!(small_seifert_type(&sfs(0, &[(5, 2), (3, -2)])), None);
    }

    #[test]
    fn lens_examples() {
        let l = as_lens(&sfs(0, &[(5, 2), (3, -2)])).unwrap();
        assert_eq!(l.p(), &BigInt::from(4));
        assert!(l.equivalent(&LensSpace::new(4, 1), false));
        assert_eq!(as_lens(&sfs(0, &[])).unwrap(), LensSpace::new(0, 1));
        assert_eq!(as_lens(&n1()), None);
        assert_eq!(as_lens(&sfs(1, &[])).unwrap(), LensSpace::new(1, 0));
    }

    #[test]
    fn lens_equivalence_rules() {
        // L(7,2) and L(7,5): 5 ≡ -2 and 2^{-1} ≡ 4, so only unoriented-equal.
        let (a, b) = (LensSpace::new(7, 2), LensSpace::new(7, 5));
        assert!(!a.equivalent(&b, true));
        assert!(a.equivalent(&b, false));
        // 2 * 3 ≡ 1 (mod 5)
        assert!(LensSpace::new(5, 2).equivalent(&LensSpace::new(5, 3), true));
        assert!(LensSpace::new(7, 2).equivalent(&LensSpace::new(7, 4), true));
        assert!(!LensSpace::new(7, 1).equivalent(&LensSpace::new(7, 2), false));
        assert_eq!(LensSpace::new(-4, 1), LensSpace::new(4, 3));
    }

    #[test]
    fn lens_independent_of_fiber_order() {
        let a = as_lens(&sfs(2, &[(5, 2), (7, 3)])).unwrap();
        let b = as_lens(&sfs(2, &[(7, 3), (5, 2)])).unwrap();
        assert!(a.equivalent(&b, true));
        assert_eq!(a.homology(), h1_order(&sfs(2, &[(5, 2), (7, 3)])));
    }

    #[test]
    fn mirror_examples() {
        let s = n1();
        assert_eq!(mirror(&mirror(&s)), s);
        assert_eq!(euler_number(&mirror(&s)), q(1, 165));
        assert_eq!(h1_order(&mirror(&s)), h1_order(&s));
        let m3 = mirror(&sfs(0, &[(5, 2), (3, -2), (27, 7)]));
        assert_eq!(exceptional_indices(&m3), ints(&[3, 5, 27]));
    }

    #[test]
    fn homeo_examples() {
        let a = sfs(-1, &[(5, 2), (3, 1), (11, 3)]);
        let b = sfs(-1, &[(11, 3), (5, 2), (3, 1)]);
        assert!(same_up_to_homeo(&a, &b, true));
        assert!(!same_up_to_homeo(&n1(), &mirror(&n1()), true));
        assert!(same_up_to_homeo(&n1(), &mirror(&n1()), false));
        assert!(same_up_to_homeo(&sfs(0, &[(5, 2), (3, -2)]), &sfs(-1, &[(5, 2), (3, 1)]), true));
        assert!(!same_up_to_homeo(&n1(), &sfs(0, &[(5, 2), (3, -2)]), false));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Fiber::new(0, 1),
            Err(SeifertError::NonPositiveIndex(BigInt::zero()))
        );
        assert!(matches!(Fiber::new(4, 2), Err(SeifertError::NotCoprime { .. })));
        assert!(Fiber::new(1, 7).is_ok());
    }

    #[test]
    fn parse_and_print() {
        let s: SeifertManifold = "SFS(0; 2/5, -2/3, 3/11)".parse().unwrap();
        assert_eq!(s, n1());
        assert_eq!(s.to_string(), "SFS(0; 2/5, -2/3, 3/11)");
        assert_eq!("SFS(3)".parse::<SeifertManifold>().unwrap(), sfs(3, &[]));
        assert_eq!("SFS(3;)".parse::<SeifertManifold>().unwrap(), sfs(3, &[]));
        let err = "SFS(0; 2/5, 2/y)".parse::<SeifertManifold>().unwrap_err();
        assert_eq!((err.token.as_str(), err.position), ("y", 14));
        assert!("SFS(0; 1/0)".parse::<SeifertManifold>().is_err());
    }
}
