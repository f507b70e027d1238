//! Montesinos links `M(β_1/α_1, ..., β_k/α_k; e)` and their double
//! branched covers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::exactarith::{parse_integer, ExtendedRational, ParseError};
use crate::seifert::{self, Fiber, SeifertManifold};

/// Sign relating the Montesinos twist to the Seifert obstruction of the
/// cover, `b = COVER_SIGN * e`. With `+1` both normalizations move integer
/// parts the same way, so normalizing commutes with taking the cover.
pub const COVER_SIGN: i64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MontesinosError {
    #[error("Montesinos fractions must be finite (branch {0} is inf)")]
    InfiniteFraction(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MontesinosLink {
    fractions: Vec<ExtendedRational>,
    twist: BigInt,
}

impl MontesinosLink {
    pub fn with_twist(
        fractions: Vec<ExtendedRational>,
        twist: impl Into<BigInt>,
    ) -> Result<Self, MontesinosError> {
        if let Some(i) = fractions.iter().position(|r| r.is_infinite()) {
            return Err(MontesinosError::InfiniteFraction(i));
        }
        Ok(MontesinosLink { fractions, twist: twist.into() })
    }

    pub fn fractions(&self) -> &[ExtendedRational] {
        &self.fractions
    }

    pub fn twist(&self) -> &BigInt {
        &self.twist
    }

    pub fn branch_count(&self) -> usize {
        self.fractions.len()
    }
}

/// Un-normalized link with twist 0.
pub fn make(fractions: Vec<ExtendedRational>) -> Result<MontesinosLink, MontesinosError> {
    MontesinosLink::with_twist(fractions, 0)
}

/// Moves integer parts into the twist so every retained fraction lies in
/// `(0, 1)`; integral branches disappear. Branch order is kept.
pub fn normalize(m: &MontesinosLink) -> MontesinosLink {
    let mut twist = m.twist.clone();
    let mut fractions = Vec::with_capacity(m.fractions.len());
    for r in &m.fractions {
        let (floor, fract) = r.floor_fract().expect("finite by construction");
        twist += floor;
        if !fract.is_zero() {
            fractions.push(fract);
        }
    }
    MontesinosLink { fractions, twist }
}

pub fn mirror(m: &MontesinosLink) -> MontesinosLink {
    MontesinosLink {
        fractions: m.fractions.iter().map(|r| -r).collect(),
        twist: -&m.twist,
    }
}

fn dihedral_equal(a: &[ExtendedRational], b: &[ExtendedRational]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let n = a.len();
    (0..n).any(|shift| {
        (0..n).all(|i| a[i] == b[(i + shift) % n]) || (0..n).all(|i| a[i] == b[(shift + n - i) % n])
    })
}

/// Classification up to isotopy: for three or more branches, normal forms
/// agreeing up to cyclic rotation and reversal; with at most two branches
/// the link is two-bridge and is compared through the lens-space cover.
pub fn equivalent(a: &MontesinosLink, b: &MontesinosLink, oriented: bool) -> bool {
    let (na, nb) = (normalize(a), normalize(b));
    match (na.branch_count() >= 3, nb.branch_count() >= 3) {
        (true, true) => {
            let same = |x: &MontesinosLink| x.twist == nb.twist && dihedral_equal(&x.fractions, &nb.fractions);
            same(&na) || (!oriented && same(&normalize(&mirror(a))))
        }
        (false, false) => {
            let la = seifert::as_lens(&double_branched_cover(&na)).expect("at most two fibers");
            let lb = seifert::as_lens(&double_branched_cover(&nb)).expect("at most two fibers");
            la.equivalent(&lb, oriented)
        }
        _ => false,
    }
}

/// Seifert manifold `SFS(COVER_SIGN * e; β_1/α_1, ...)`, un-normalized.
pub fn double_branched_cover(m: &MontesinosLink) -> SeifertManifold {
    SeifertManifold::new(
        &m.twist * BigInt::from(COVER_SIGN),
        m.fractions.iter().map(Fiber::from_fraction).collect(),
    )
}

impl fmt::Display for MontesinosLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("M(")?;
        for (i, r) in self.fractions.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        if !self.twist.is_zero() {
            write!(f, ";{}", self.twist)?;
        }
        f.write_str(")")
    }
}

impl FromStr for MontesinosLink {
    type Err = ParseError;

    /// `M(2/5,-2/3,3/11)` with optional `;e` twist suffix.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lead = s.len() - s.trim_start().len();
        let t = s.trim();
        let inner = t
            .strip_prefix("M(")
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| ParseError::new("expected M(r1,r2,...[;e])", t, lead))?;
        let base = lead + 2;
        let (list, twist) = match inner.split_once(';') {
            Some((list, e)) => {
                let twist = parse_integer(e).map_err(|err| err.shifted(base + list.len() + 1))?;
                (list, twist)
            }
            None => (inner, BigInt::zero()),
        };
        let mut fractions = Vec::new();
        if !list.trim().is_empty() {
            let mut offset = base;
            for item in list.split(',') {
                let r: ExtendedRational = item.parse().map_err(|e: ParseError| e.shifted(offset))?;
                fractions.push(r);
                offset += item.len() + 1;
            }
        }
        MontesinosLink::with_twist(fractions, twist).map_err(|e| ParseError::new(e.to_string(), t, lead))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactarith::H1Order;
    use crate::seifert::{exceptional_indices, h1_order, LensSpace};

    fn m(s: &str) -> MontesinosLink {
        s.parse().unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn make_examples() {
        let q = |p, d| ExtendedRational::reduce(p, d).unwrap();
        let a = make(vec![q(2, 5), q(-2, 3), q(3, 11)]).unwrap();
        assert_eq!(a.to_string(), "M(2/5,-2/3,3/11)");
        assert_eq!(make(vec![q(2, 5), q(-2, 3), q(0, 1)]).unwrap().to_string(), "M(2/5,-2/3,0/1)");
        let empty = make(vec![]).unwrap();
        assert_eq!((empty.branch_count(), empty.twist()), (0, &BigInt::zero()));
        assert_eq!(
            make(vec![q(1, 2), ExtendedRational::infinity()]),
            Err(MontesinosError::InfiniteFraction(1))
        );
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&m("M(2/5,-2/3,3/11)")), m("M(2/5,1/3,3/11;-1)"));
        let x = m("M(7/2,2/5)");
        assert_eq!(normalize(&normalize(&x)), normalize(&x));
        assert_eq!(normalize(&x), m("M(1/2,2/5;3)"));
        assert_eq!(normalize(&m("M(2/5,-2/3,0)")), m("M(2/5,1/3;-1)"));
    }

    #[test]
    fn mirror_examples() {
        assert_eq!(mirror(&m("M(2/5,-2/3,3/11)")), m("M(-2/5,2/3,-3/11)"));
        let x = m("M(2/5,1/3;-1)");
        assert_eq!(mirror(&mirror(&x)), x);
        assert_eq!(normalize(&mirror(&m("M(2/5)"))), m("M(3/5;-1)"));
    }

    #[test]
    fn equivalence_examples() {
        assert!(equivalent(&m("M(2/5,1/3,3/11;-1)"), &m("M(1/3,3/11,2/5;-1)"), true));
        assert!(equivalent(&m("M(2/5,1/3,3/11;-1)"), &m("M(3/11,1/3,2/5;-1)"), true));
        assert!(equivalent(&m("M(2/5,-2/3,3/11)"), &m("M(2/5,1/3,3/11;-1)"), true));
        assert!(!equivalent(&m("M(2/5,1/3,3/11)"), &m("M(2/5,1/3,3/11;-1)"), true));
        assert!(!equivalent(&m("M(2/5,-2/3,3/11)"), &mirror(&m("M(2/5,-2/3,3/11)")), true));
        assert!(equivalent(&m("M(2/5,-2/3,3/11)"), &mirror(&m("M(2/5,-2/3,3/11)")), false));
    }

    #[test]
    fn two_bridge_equivalence_goes_through_lens_cover() {
        // M(2/5) has cover L(2,1), which is amphichiral.
        assert!(equivalent(&m("M(2/5)"), &m("M(-2/5)"), true));
        // M(3/5) has cover L(3,5) = L(3,2), which is chiral.
        assert!(!equivalent(&m("M(3/5)"), &m("M(-3/5)"), true));
        assert!(equivalent(&m("M(3/5)"), &m("M(-3/5)"), false));
        assert!(!equivalent(&m("M(3/5)"), &m("M(1/3,1/5,1/7)"), false));
    }

    #[test]
    fn cover_examples() {
        let s = double_branched_cover(&m("M(2/5,-2/3,3/11)"));
        assert_eq!(exceptional_indices(&s), ints(&[3, 5, 11]));
        assert_eq!(h1_order(&s), H1Order::cyclic(1));

        let s = double_branched_cover(&m("M(2/5,-2/3,0)"));
        assert_eq!(exceptional_indices(&s), ints(&[3, 5]));
        let lens = seifert::as_lens(&s).unwrap();
        assert!(lens.equivalent(&LensSpace::new(4, 1), false));

        let s = double_branched_cover(&m("M(2/5,-2/3,4/15)"));
        assert_eq!(exceptional_indices(&s), ints(&[3, 5, 15]));
        assert_eq!(h1_order(&s), H1Order::Infinite);
    }

    #[test]
    fn parse_errors() {
        let err = "M(2/5,x)".parse::<MontesinosLink>().unwrap_err();
        assert_eq!((err.token.as_str(), err.position), ("x", 6));
        let err = "M(2/5;e)".parse::<MontesinosLink>().unwrap_err();
        assert_eq!(err.position, 6);
        assert!("M(inf)".parse::<MontesinosLink>().is_err());
        assert_eq!(" M( 2/5 , -2/3 ; 1 )".parse::<MontesinosLink>().unwrap(), m("M(2/5,-2/3;1)"));
        assert_eq!("M()".parse::<MontesinosLink>().unwrap().branch_count(), 0);
    }
}
