//! Known facts about the lens (L), Seifert (S), reducing (R) and toroidal
//! (T) slope sets of hyperbolic knots, loaded from a line-oriented facts
//! file. The shipped file is embedded at compile time; other files can be
//! loaded at run time.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::exactarith::{parse_integer, ExtendedRational};

pub const BUILTIN_FACTS: &str = include_str!("../data/slope_facts.txt");

#[derive(Debug, Error)]
pub enum LedgerError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("reading facts file: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlopeSet {
    Lens,
    Seifert,
    Reducing,
    Toroidal,
}

impl FromStr for SlopeSet {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "L" => Ok(SlopeSet::Lens),
            "S" => Ok(SlopeSet::Seifert),
            "R" => Ok(SlopeSet::Reducing),
            "T" => Ok(SlopeSet::Toroidal),
            other => Err(format!("unknown slope set {other:?} (expected L, S, R or T)")),
        }
    }
}

impl fmt::Display for SlopeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SlopeSet::Lens => "L",
            SlopeSet::Seifert => "S",
            SlopeSet::Reducing => "R",
            SlopeSet::Toroidal => "T",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlopeClass {
    Slope(ExtendedRational),
    Integers,
    /// Integers and half-integers.
    HalfIntegers,
    Empty,
    AbsBelow(BigInt),
    AbsAtLeast(BigInt),
}

impl SlopeClass {
    pub fn contains(&self, r: &ExtendedRational) -> bool {
        if let SlopeClass::Slope(s) = self {
            return s == r;
        }
        if r.is_infinite() {
            return false;
        }
        match self {
            SlopeClass::Slope(_) => unreachable!(),
            SlopeClass::Integers => r.is_integer(),
            SlopeClass::HalfIntegers => r.denom() <= &BigInt::from(2),
            SlopeClass::Empty => false,
            // |p/q| < N  <=>  |p| < N q
            SlopeClass::AbsBelow(n) => r.numer().abs() < n * r.denom(),
            SlopeClass::AbsAtLeast(n) => r.numer().abs() >= n * r.denom(),
        }
    }
}

impl FromStr for SlopeClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Ok(match t {
            "Z" => SlopeClass::Integers,
            "Z/2" => SlopeClass::HalfIntegers,
            "empty" => SlopeClass::Empty,
            _ => {
                if let Some(n) = t.strip_prefix("abs>=") {
                    SlopeClass::AbsAtLeast(parse_integer(n).map_err(|e| e.to_string())?)
                } else if let Some(n) = t.strip_prefix("abs<") {
                    SlopeClass::AbsBelow(parse_integer(n).map_err(|e| e.to_string())?)
                } else {
                    SlopeClass::Slope(t.parse().map_err(|e: crate::exactarith::ParseError| e.to_string())?)
                }
            }
        })
    }
}

impl fmt::Display for SlopeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeClass::Slope(r) if r.is_integer() => write!(f, "{}", r.numer()),
            SlopeClass::Slope(r) => write!(f, "{r}"),
            SlopeClass::Integers => f.write_str("Z"),
            SlopeClass::HalfIntegers => f.write_str("Z/2"),
            SlopeClass::Empty => f.write_str("empty"),
            SlopeClass::AbsBelow(n) => write!(f, "abs<{n}"),
            SlopeClass::AbsAtLeast(n) => write!(f, "abs>={n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Member,
    NonMember,
    Subset,
    ProperSubset,
    Superset,
    Equal,
    Partial,
}

impl Direction {
    fn is_containment(self) -> bool {
        !matches!(self, Direction::Member | Direction::NonMember)
    }
}

impl FromStr for Direction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim() {
            "member" => Direction::Member,
            "non-member" => Direction::NonMember,
            "subset" => Direction::Subset,
            "proper-subset" => Direction::ProperSubset,
            "superset" => Direction::Superset,
            "equal" => Direction::Equal,
            "partial" => Direction::Partial,
            other => return Err(format!("unknown direction {other:?}")),
        })
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Member => "member",
            Direction::NonMember => "non-member",
            Direction::Subset => "subset",
            Direction::ProperSubset => "proper-subset",
            Direction::Superset => "superset",
            Direction::Equal => "equal",
            Direction::Partial => "partial",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Theorem,
    Conjecture,
    Suggested,
}

impl FromStr for Status {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim() {
            "theorem" => Status::Theorem,
            "conjecture" => Status::Conjecture,
            "suggested" => Status::Suggested,
            other => return Err(format!("unknown status {other:?}")),
        })
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Theorem => "theorem",
            Status::Conjecture => "conjecture",
            Status::Suggested => "suggested",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeFact {
    pub set: SlopeSet,
    pub class: SlopeClass,
    pub direction: Direction,
    pub status: Status,
    pub citation: String,
    pub witness: Option<String>,
}

impl SlopeFact {
    /// Membership of `r` in the fact's set implied by this fact, if any.
    pub fn implies(&self, r: &ExtendedRational) -> Option<bool> {
        let inside = self.class.contains(r);
        match self.direction {
            Direction::Member if inside => Some(true),
            Direction::NonMember if inside => Some(false),
            Direction::Subset | Direction::ProperSubset if !inside => Some(false),
            Direction::Superset if inside => Some(true),
            Direction::Equal => Some(inside),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "set": self.set.to_string(),
            "slope_class": self.class.to_string(),
            "direction": self.direction.to_string(),
            "status": self.status.to_string(),
            "citation": self.citation,
            "witness": self.witness,
        })
    }
}

impl fmt::Display for SlopeFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} | {} | {} | {} | {} | {}",
            self.set,
            self.class,
            self.direction,
            self.status,
            self.citation,
            self.witness.as_deref().unwrap_or("")
        )
    }
}

impl FromStr for SlopeFact {
    type Err = String;
    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(format!("expected 6 '|'-separated fields, found {}", fields.len()));
        }
        let fact = SlopeFact {
            set: fields[0].parse()?,
            class: fields[1].parse()?,
            direction: fields[2].parse()?,
            status: fields[3].parse()?,
            citation: fields[4].to_string(),
            witness: (!fields[5].is_empty()).then(|| fields[5].to_string()),
        };
        if fact.status == Status::Theorem && fact.citation.is_empty() {
            return Err("theorem-status facts need a citation".into());
        }
        Ok(fact)
    }
}

#[derive(Debug, Clone)]
pub struct Ledger {
    facts: Vec<SlopeFact>,
}

impl Ledger {
    pub fn parse(text: &str) -> Result<Self, LedgerError> {
        let mut facts = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fact = line
                .parse()
                .map_err(|message| LedgerError::Syntax { line: i + 1, message })?;
            facts.push(fact);
        }
        Ok(Ledger { facts })
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN_FACTS).expect("shipped facts file parses")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LedgerError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn facts(&self) -> &[SlopeFact] {
        &self.facts
    }

    /// Facts that decide membership of `r` in `set`: facts about the slope
    /// itself, then about a class containing it, then containments that
    /// imply membership or non-membership.
    pub fn query(&self, set: SlopeSet, r: &ExtendedRational) -> Vec<&SlopeFact> {
        let rank = |f: &SlopeFact| match (&f.class, f.direction.is_containment()) {
            (SlopeClass::Slope(_), false) => 0,
            (_, false) => 1,
            (_, true) => 2,
        };
        let mut hits: Vec<&SlopeFact> = self
            .facts
            .iter()
            .filter(|f| f.set == set && f.implies(r).is_some())
            .collect();
        hits.sort_by_key(|f| (rank(f), f.status));
        hits
    }

    /// The subset/superset lattice among the slope sets, Z and Z/2.
    pub fn containments(&self) -> Vec<&SlopeFact> {
        self.facts.iter().filter(|f| f.direction.is_containment()).collect()
    }

    /// Slopes among `samples` that receive both member and non-member at
    /// theorem status for the same set.
    pub fn theorem_conflicts(&self, samples: &[ExtendedRational]) -> Vec<(SlopeSet, ExtendedRational)> {
        let mut out = Vec::new();
        for set in [SlopeSet::Lens, SlopeSet::Seifert, SlopeSet::Reducing, SlopeSet::Toroidal] {
            for r in samples {
                let verdicts: Vec<bool> = self
                    .query(set, r)
                    .into_iter()
                    .filter(|f| f.status == Status::Theorem)
                    .filter_map(|f| f.implies(r))
                    .collect();
                if verdicts.contains(&true) && verdicts.contains(&false) {
                    out.push((set, r.clone()));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> ExtendedRational {
        ExtendedRational::reduce(p, d).unwrap()
    }

    #[test]
    fn builtin_parses() {
        let l = Ledger::builtin();
        assert!(l.facts().len() >= 20);
        assert!(l
            .facts()
            .iter()
            .filter(|f| f.status == Status::Theorem)
            .all(|f| !f.citation.is_empty()));
    }

    #[test]
    fn lens_eighteen() {
        let l = Ledger::builtin();
        let hits = l.query(SlopeSet::Lens, &q(18, 1));
        let first = hits[0];
        assert_eq!(first.direction, Direction::Member);
        assert_eq!(first.status, Status::Theorem);
        assert_eq!(first.witness.as_deref(), Some("(-2,3,7) pretzel knot"));
    }

    #[test]
    fn lens_three() {
        let l = Ledger::builtin();
        let first = l.query(SlopeSet::Lens, &q(3, 1))[0];
        assert_eq!((first.direction, first.status), (Direction::NonMember, Status::Theorem));
        assert!(first.citation.contains("KMOS"));
    }

    #[test]
    fn seifert_integers() {
        let l = Ledger::builtin();
        for n in [-1000, -7, 0, 1, 18, 99] {
            let first = l.query(SlopeSet::Seifert, &q(n, 1))[0];
            assert_eq!((first.direction, first.status), (Direction::Member, Status::Theorem));
            assert_eq!(first.class, SlopeClass::Integers);
        }
    }

    #[test]
    fn non_integral_lens_query_uses_cyclic_surgery() {
        let l = Ledger::builtin();
        let hits = l.query(SlopeSet::Lens, &q(7, 2));
        assert!(hits
            .iter()
            .any(|f| f.direction == Direction::Subset && f.citation.contains("CGLS")));
        assert!(hits.iter().all(|f| f.implies(&q(7, 2)) == Some(false)));
    }

    #[test]
    fn containment_lattice() {
        let l = Ledger::builtin();
        let c = l.containments();
        let has = |set, class: SlopeClass, dir, status| {
            c.iter().any(|f| f.set == set && f.class == class && f.direction == dir && f.status == status)
        };
        assert!(has(SlopeSet::Lens, SlopeClass::Integers, Direction::ProperSubset, Status::Theorem));
        assert!(has(SlopeSet::Toroidal, SlopeClass::HalfIntegers, Direction::Subset, Status::Theorem));
        assert!(has(SlopeSet::Toroidal, SlopeClass::HalfIntegers, Direction::ProperSubset, Status::Conjecture));
        assert!(has(SlopeSet::Reducing, SlopeClass::Empty, Direction::Equal, Status::Conjecture));
        assert!(has(SlopeSet::Seifert, SlopeClass::Integers, Direction::Superset, Status::Theorem));
        assert!(has(SlopeSet::Lens, SlopeClass::AbsAtLeast(BigInt::from(18)), Direction::Partial, Status::Suggested));
    }

    #[test]
    fn no_theorem_conflicts() {
        let l = Ledger::builtin();
        let mut samples: Vec<ExtendedRational> = (-60..=60).map(|n| q(n, 2)).collect();
        samples.extend((-20..=20).map(|n| q(n, 3)));
        samples.push(ExtendedRational::infinity());
        assert!(l.theorem_conflicts(&samples).is_empty());
    }

    #[test]
    fn toroidal_half_integer() {
        let l = Ledger::builtin();
        assert!(l.query(SlopeSet::Toroidal, &q(1, 2)).is_empty());
        let hits = l.query(SlopeSet::Toroidal, &q(1, 3));
        assert_eq!(hits[0].implies(&q(1, 3)), Some(false));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Ledger::parse("L | 0 | member"), Err(LedgerError::Syntax { line: 1, .. })));
        assert!(Ledger::parse("# c\nL | 0 | member | theorem |  |").is_err());
        assert!(Ledger::parse("X | 0 | member | theorem | a |").is_err());
        let l = Ledger::parse("R | 5/2 | non-member | suggested |  |").unwrap();
        assert_eq!(l.facts()[0].class, SlopeClass::Slope(q(5, 2)));
    }
}
