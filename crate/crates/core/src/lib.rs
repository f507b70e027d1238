//! Exact algebra for Seifert fibered surgeries on a twist family of
//! hyperbolic knots: rational tangles, Montesinos links and their double
//! branched covers, Seifert invariants, framed-link surgery, and a ledger
//! of known exceptional-slope facts.
//!
//! Everything is exact over arbitrary-precision integers. All values are
//! immutable and every operation is a pure function.

pub mod cli;
pub mod exactarith;
pub mod family;
pub mod ledger;
pub mod montesinos;
pub mod seifert;
pub mod surgery;
pub mod tangle;

pub use exactarith::{ContinuedFraction, ExtendedRational, H1Order};
pub use family::{FamilyReport, Variant};
pub use montesinos::MontesinosLink;
pub use seifert::{LensSpace, SeifertManifold};
pub use surgery::FramedLink;
pub use tangle::{RationalTangle, SlottedPresentation};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Integers that fit in `i64` become JSON numbers, larger ones strings.
pub(crate) fn json_int(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => v.into(),
        None => n.to_string().into(),
    }
}

pub(crate) fn json_h1(h: &H1Order) -> serde_json::Value {
    match h {
        H1Order::Finite(n) => json_int(n),
        H1Order::Infinite => "infinite".into(),
    }
}
