//! Rational tangles carried by their Conway fraction, and untangle surgery
//! on cyclic slot presentations.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::exactarith::{cf_expand, cf_value, ContinuedFraction, ExtendedRational, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TangleError {
    #[error("slot {0} is out of range")]
    OutOfRange(usize),
    #[error("slot {0} is not a surgery site")]
    Unmarked(usize),
    #[error("marked slot {0} does not hold the 1/0-untangle")]
    MarkedNotInfinite(usize),
    #[error("a presentation needs at least one slot")]
    Empty,
}

/// A rational tangle. Its fraction is a complete invariant; the word is the
/// canonical continued fraction of that fraction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalTangle {
    fraction: ExtendedRational,
    word: ContinuedFraction,
}

impl RationalTangle {
    pub fn fraction(&self) -> &ExtendedRational {
        &self.fraction
    }

    pub fn word(&self) -> &ContinuedFraction {
        &self.word
    }

    pub fn is_untangle(&self) -> bool {
        self.fraction.is_infinite()
    }

    /// Neither integral nor the 1/0-untangle.
    pub fn is_nontrivial(&self) -> bool {
        self.fraction.is_finite() && !self.fraction.is_integer()
    }
}

/// Tangle with the given fraction. The 1/0-untangle gets the word `[0,0]`.
pub fn tangle_from_fraction(r: &ExtendedRational) -> RationalTangle {
    let word = if r.is_infinite() {
        ContinuedFraction(vec![BigInt::from(0), BigInt::from(0)])
    } else {
        cf_expand(r).expect("finite fraction")
    };
    debug_assert_eq!(cf_value(&word).as_ref(), Ok(r));
    RationalTangle { fraction: r.clone(), word }
}

pub fn mirror(t: &RationalTangle) -> RationalTangle {
    RationalTangle { fraction: -&t.fraction, word: t.word.negated() }
}

impl fmt::Display for RationalTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fraction)
    }
}

/// Cyclic list of tangles with some slots marked as surgery sites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlottedPresentation {
    slots: Vec<RationalTangle>,
    marks: BTreeSet<usize>,
}

impl SlottedPresentation {
    pub fn new(
        slots: Vec<RationalTangle>,
        marks: impl IntoIterator<Item = usize>,
    ) -> Result<Self, TangleError> {
        if slots.is_empty() {
            return Err(TangleError::Empty);
        }
        let marks: BTreeSet<usize> = marks.into_iter().collect();
        for &m in &marks {
            match slots.get(m) {
                None => return Err(TangleError::OutOfRange(m)),
                Some(t) if !t.is_untangle() => return Err(TangleError::MarkedNotInfinite(m)),
                Some(_) => {}
            }
        }
        Ok(SlottedPresentation { slots, marks })
    }

    /// `count` marked 1/0-untangles.
    pub fn untangles(count: usize) -> Result<Self, TangleError> {
        let inf = tangle_from_fraction(&ExtendedRational::infinity());
        Self::new(vec![inf; count], 0..count)
    }

    pub fn slots(&self) -> &[RationalTangle] {
        &self.slots
    }

    pub fn marks(&self) -> &BTreeSet<usize> {
        &self.marks
    }

    pub fn fractions(&self) -> Vec<ExtendedRational> {
        self.slots.iter().map(|t| t.fraction.clone()).collect()
    }
}

impl fmt::Display for SlottedPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.slots.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
            if self.marks.contains(&i) {
                f.write_str("*")?;
            }
        }
        Ok(())
    }
}

impl FromStr for SlottedPresentation {
    type Err = ParseError;

    /// Comma-separated fractions, `*` suffix marks a surgery site:
    /// `inf*,inf*,3/1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut slots = Vec::new();
        let mut marks = Vec::new();
        let mut offset = 0;
        for (i, item) in s.split(',').enumerate() {
            let trimmed = item.trim_end();
            let (body, marked) = match trimmed.strip_suffix('*') {
                Some(b) => (b, true),
                None => (trimmed, false),
            };
            let r: ExtendedRational = body.parse().map_err(|e: ParseError| e.shifted(offset))?;
            if marked {
                marks.push(i);
            }
            slots.push(tangle_from_fraction(&r));
            offset += item.len() + 1;
        }
        SlottedPresentation::new(slots, marks).map_err(|e| ParseError::new(e.to_string(), s, 0))
    }
}

/// Replaces the 1/0-untangle in a marked slot by the `r`-tangle and
/// consumes the mark.
pub fn untangle_surgery(
    p: &SlottedPresentation,
    slot: usize,
    r: &ExtendedRational,
) -> Result<SlottedPresentation, TangleError> {
    if slot >= p.slots.len() {
        return Err(TangleError::OutOfRange(slot));
    }
    if !p.marks.contains(&slot) {
        return Err(TangleError::Unmarked(slot));
    }
    let mut out = p.clone();
    out.slots[slot] = tangle_from_fraction(r);
    out.marks.remove(&slot);
    Ok(out)
}

/// Number of slots that are neither integral nor infinite.
pub fn nontrivial_slot_count(p: &SlottedPresentation) -> usize {
    p.slots.iter().filter(|t| t.is_nontrivial()).count()
}
