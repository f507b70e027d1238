//! Framed-link surgery descriptions, Rolfsen twists and first homology.
//!
//! Coefficients are slopes `p/q`; an `inf` coefficient marks an unfilled
//! component (a filled-back meridian) that can be deleted. Homology is
//! presented by the matrix with `M_ii = p_i` and `M_ij = q_i * lk(i, j)`.
//!
//! Sign convention: `1/m` surgery on an unknotted circle equals a `(-m)`
//! twist of the strands through it.
#![allow(clippy::needless_range_loop)] // symmetric matrices read better indexed

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactarith::{determinant, ExtendedRational, H1Order};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("coefficient count {coefficients} does not match component count {components}")]
    LengthMismatch { components: usize, coefficients: usize },
    #[error("linking matrix must be square of size {0}")]
    NotSquare(usize),
    #[error("linking matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("linking matrix diagonal must be zero at {0}")]
    NonzeroDiagonal(usize),
    #[error("component {0:?} is unfilled; delete it first")]
    Unfilled(String),
    #[error("cannot twist along unfilled component {0:?}")]
    TwistAlongUnfilled(String),
    #[error("no component {0}")]
    NoSuchComponent(String),
    #[error("slope must be finite")]
    InfiniteSlope,
    #[error("invalid link JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedLink {
    labels: Vec<String>,
    coefficients: Vec<ExtendedRational>,
    linking: Vec<Vec<BigInt>>,
}

impl FramedLink {
    pub fn new(
        labels: Vec<String>,
        coefficients: Vec<ExtendedRational>,
        linking: Vec<Vec<BigInt>>,
    ) -> Result<Self, SurgeryError> {
        let n = labels.len();
        if coefficients.len() != n {
            return Err(SurgeryError::LengthMismatch { components: n, coefficients: coefficients.len() });
        }
        if linking.len() != n || linking.iter().any(|row| row.len() != n) {
            return Err(SurgeryError::NotSquare(n));
        }
        for i in 0..n {
            if !linking[i][i].is_zero() {
                return Err(SurgeryError::NonzeroDiagonal(i));
            }
            for j in 0..i {
                if linking[i][j] != linking[j][i] {
                    return Err(SurgeryError::NotSymmetric(i, j));
                }
            }
        }
        Ok(FramedLink { labels, coefficients, linking })
    }

    /// Builds a link from `(label, coefficient)` pairs and an `i64` matrix.
    pub fn from_parts(
        components: &[(&str, ExtendedRational)],
        linking: &[&[i64]],
    ) -> Result<Self, SurgeryError> {
        Self::new(
            components.iter().map(|(l, _)| l.to_string()).collect(),
            components.iter().map(|(_, c)| c.clone()).collect(),
            linking.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    /// The empty link, describing S³.
    pub fn empty() -> Self {
        FramedLink { labels: vec![], coefficients: vec![], linking: vec![] }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coefficients(&self) -> &[ExtendedRational] {
        &self.coefficients
    }

    pub fn coefficient(&self, label: &str) -> Option<&ExtendedRational> {
        self.index_of(label).ok().map(|i| &self.coefficients[i])
    }

    pub fn linking(&self) -> &[Vec<BigInt>] {
        &self.linking
    }

    pub fn index_of(&self, label: &str) -> Result<usize, SurgeryError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| SurgeryError::NoSuchComponent(label.to_string()))
    }

    /// Reorders components by `perm`, where `perm[new] = old`.
    pub fn permuted(&self, perm: &[usize]) -> FramedLink {
        FramedLink {
            labels: perm.iter().map(|&i| self.labels[i].clone()).collect(),
            coefficients: perm.iter().map(|&i| self.coefficients[i].clone()).collect(),
            linking: perm
                .iter()
                .map(|&i| perm.iter().map(|&j| self.linking[i][j].clone()).collect())
                .collect(),
        }
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, SurgeryError> {
        let wire: LinkWire =
            serde_json::from_value(value.clone()).map_err(|e| SurgeryError::Json(e.to_string()))?;
        let mut labels = Vec::new();
        let mut coefficients = Vec::new();
        for c in wire.components {
            let coeff = match &c.coeff {
                serde_json::Value::String(s) => s.parse().map_err(|e| SurgeryError::Json(format!("{e}")))?,
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(ExtendedRational::integer)
                    .ok_or_else(|| SurgeryError::Json(format!("non-integer number {n}")))?,
                other => return Err(SurgeryError::Json(format!("bad coefficient {other}"))),
            };
            labels.push(c.label);
            coefficients.push(coeff);
        }
        let linking = wire
            .linking
            .into_iter()
            .map(|row| row.into_iter().map(BigInt::from).collect())
            .collect();
        Self::new(labels, coefficients, linking)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "components": self.labels.iter().zip(&self.coefficients)
                .map(|(l, c)| serde_json::json!({"label": l, "coeff": c.to_string()}))
                .collect::<Vec<_>>(),
            "linking": self.linking.iter()
                .map(|row| row.iter().map(crate::json_int).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct LinkWire {
    components: Vec<ComponentWire>,
    linking: Vec<Vec<i64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ComponentWire {
    label: String,
    coeff: serde_json::Value,
}

impl fmt::Display for FramedLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (l, c)) in self.labels.iter().zip(&self.coefficients).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}: {c}")?;
        }
        f.write_str("}")?;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if !self.linking[i][j].is_zero() {
                    write!(f, " lk({},{})={}", self.labels[i], self.labels[j], self.linking[i][j])?;
                }
            }
        }
        Ok(())
    }
}

/// Slope on the untwisted knot: `r - m w²`. Together with `-1/m` surgery on
/// the twisting circle it reproduces `r` surgery on the `m`-twisted knot.
pub fn twist_slope(
    r: &ExtendedRational,
    m: impl Into<BigInt>,
    w: impl Into<BigInt>,
) -> Result<ExtendedRational, SurgeryError> {
    if r.is_infinite() {
        return Err(SurgeryError::InfiniteSlope);
    }
    let w = w.into();
    let shift = ExtendedRational::integer(m.into() * &w * &w);
    Ok(r - &shift)
}

pub fn h1_from_link(link: &FramedLink) -> Result<H1Order, SurgeryError> {
    let n = link.len();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        let c = &link.coefficients[i];
        if c.is_infinite() {
            return Err(SurgeryError::Unfilled(link.labels[i].clone()));
        }
        for j in 0..n {
            m[i][j] = if i == j {
                c.numer().clone()
            } else {
                c.denom() * &link.linking[i][j]
            };
        }
    }
    Ok(H1Order::from_determinant(determinant(&m)))
}

/// `t` full twists along the unknotted component `u`. The caller asserts
/// that `u` is unknotted.
pub fn rolfsen_twist(
    link: &FramedLink,
    u: usize,
    t: impl Into<BigInt>,
) -> Result<FramedLink, SurgeryError> {
    let t = t.into();
    let label = link
        .labels
        .get(u)
        .ok_or_else(|| SurgeryError::NoSuchComponent(u.to_string()))?;
    let cu = &link.coefficients[u];
    if cu.is_infinite() {
        return Err(SurgeryError::TwistAlongUnfilled(label.clone()));
    }
    let mut out = link.clone();
    let (p, q) = (cu.numer(), cu.denom());
    out.coefficients[u] = ExtendedRational::ratio(p.clone(), q + &t * p);
    let lk_u: Vec<BigInt> = link.linking.iter().map(|row| row[u].clone()).collect();
    for i in 0..link.len() {
        if i == u {
            continue;
        }
        let ci = &link.coefficients[i];
        if ci.is_finite() {
            let shift = ExtendedRational::integer(&t * &lk_u[i] * &lk_u[i]);
            out.coefficients[i] = ci + &shift;
        }
        for j in 0..link.len() {
            if j != u && j != i {
                out.linking[i][j] = &link.linking[i][j] + &t * &lk_u[i] * &lk_u[j];
            }
        }
    }
    Ok(out)
}

/// Drops every component with an `inf` coefficient.
pub fn delete_unfilled(link: &FramedLink) -> FramedLink {
    let keep: Vec<usize> = (0..link.len()).filter(|&i| link.coefficients[i].is_finite()).collect();
    link.permuted(&keep)
}

/// A knot twisted `m` times along an unknotted circle it links `w` times,
/// with slope `r` on the twisted knot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistFamily {
    pub base_slope: ExtendedRational,
    pub twist_count: BigInt,
    pub winding: BigInt,
}

impl TwistFamily {
    pub fn new(base_slope: ExtendedRational, twist_count: impl Into<BigInt>, winding: impl Into<BigInt>) -> Self {
        let winding: BigInt = winding.into();
        TwistFamily {
            base_slope,
            twist_count: twist_count.into(),
            winding: num_traits::Signed::abs(&winding),
        }
    }

    /// `{knot: r - m w², circle: -1/m}` with `lk = w`.
    pub fn description(&self) -> Result<FramedLink, SurgeryError> {
        let knot = twist_slope(&self.base_slope, self.twist_count.clone(), self.winding.clone())?;
        let circle = ExtendedRational::ratio(-1, self.twist_count.clone());
        FramedLink::new(
            vec!["knot".into(), "circle".into()],
            vec![knot, circle],
            vec![
                vec![BigInt::zero(), self.winding.clone()],
                vec![self.winding.clone(), BigInt::zero()],
            ],
        )
    }

    /// The description after twisting the circle away: `{knot: r}`.
    pub fn untwisted(&self) -> Result<FramedLink, SurgeryError> {
        let d = self.description()?;
        if d.coefficients[1].is_infinite() {
            return Ok(delete_unfilled(&d));
        }
        Ok(delete_unfilled(&rolfsen_twist(&d, 1, self.twist_count.clone())?))
    }
}
