//! The twist family `K_n`: `K_n` is obtained from the knot `k` of a
//! two-bridge link `k ∪ c` by `1/(4-n)` surgery on `c`, and `n` surgery on
//! `K_n` is the double branched cover of `M(2/5, -2/3, (n-4)/(4n-15))`.
//!
//! The primed variant, defined for `n ∈ {3, 4, 5}`, is the mirror image of
//! `K_{-n}`; its surgered manifold is the mirror of the `-n` manifold.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use thiserror::Error;

use crate::exactarith::{ExtendedRational, H1Order};
use crate::montesinos::{self, MontesinosLink};
use crate::seifert::{self, LensSpace, SeifertManifold};
use crate::surgery::{self, FramedLink, TwistFamily};
use crate::tangle::{untangle_surgery, SlottedPresentation};

pub const HYPERBOLICITY_NOTE: &str = "hyperbolicity is not computed: K_n is hyperbolic for n outside {3,4,5} \
     (twisting a hyperbolic two-bridge link along c with |n-4| > 1); the primed knots for n in {3,4,5} \
     are mirrors of K_{-n}";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("the primed variant is defined only for n in {{3, 4, 5}}, got {0}")]
    PrimedOutOfRange(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Standard,
    Primed,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Standard => "standard",
            Variant::Primed => "primed",
        })
    }
}

fn check_variant(n: i64, variant: Variant) -> Result<(), FamilyError> {
    match variant {
        Variant::Primed if !(3..=5).contains(&n) => Err(FamilyError::PrimedOutOfRange(n)),
        _ => Ok(()),
    }
}

fn q(p: i64, d: i64) -> ExtendedRational {
    ExtendedRational::ratio(p, d)
}

/// `M(2/5, -2/3, (n-4)/(4n-15))`. `4n - 15` is odd, so never zero.
pub fn montesinos_of(n: i64) -> MontesinosLink {
    montesinos::make(vec![q(2, 5), q(-2, 3), q(n - 4, 4 * n - 15)]).expect("finite fractions")
}

/// Surgery coefficients on the upstairs components `t_1, t_2, c, k` of the
/// four-component description, which become untangle-surgery fractions on
/// the branch link.
pub fn untangle_coefficients(n: i64) -> [(&'static str, ExtendedRational); 4] {
    [
        ("t1", q(-1, 2)),
        ("t2", q(-1, 1)),
        ("c", q(3 * n - 11, 4 - n)),
        ("k", q(1, 1)),
    ]
}

/// The branch link: four marked 1/0-untangles, each surgered with the
/// corresponding coefficient from [`untangle_coefficients`].
pub fn branch_link(n: i64) -> SlottedPresentation {
    let mut p = SlottedPresentation::untangles(4).expect("nonempty");
    for (slot, (_, r)) in untangle_coefficients(n).iter().enumerate() {
        p = untangle_surgery(&p, slot, r).expect("every slot is marked");
    }
    p
}

pub fn surgered_manifold(n: i64, variant: Variant) -> Result<SeifertManifold, FamilyError> {
    check_variant(n, variant)?;
    Ok(match variant {
        Variant::Standard => montesinos::double_branched_cover(&montesinos_of(n)),
        Variant::Primed => seifert::mirror(&surgered_manifold(-n, Variant::Standard)?),
    })
}

/// Index of the fiber that the core of the filled twisting circle becomes:
/// `|4n - 15|`, or `4n + 15` for the primed knots.
pub fn companion_fiber_index(n: i64, variant: Variant) -> Result<BigInt, FamilyError> {
    check_variant(n, variant)?;
    Ok(match variant {
        Variant::Standard => BigInt::from(4 * n - 15).abs(),
        Variant::Primed => BigInt::from(4 * n + 15),
    })
}

/// Upstairs components and the fiber index each one becomes.
pub fn fiber_assignment(n: i64, variant: Variant) -> Result<Vec<(&'static str, BigInt)>, FamilyError> {
    let c = companion_fiber_index(n, variant)?;
    Ok(vec![("t1", BigInt::from(5)), ("t2", BigInt::from(3)), ("c", c)])
}

/// Two-component description `{knot: n - m, circle: -1/m}` with `lk = 1`,
/// where `m = n - 4` (standard) or `m = n + 4` (primed).
pub fn surgery_description(n: i64, variant: Variant) -> Result<FramedLink, FamilyError> {
    check_variant(n, variant)?;
    Ok(twist_family(n, variant).description().expect("finite slope"))
}

fn twist_family(n: i64, variant: Variant) -> TwistFamily {
    let m = match variant {
        Variant::Standard => n - 4,
        Variant::Primed => n + 4,
    };
    TwistFamily::new(ExtendedRational::integer(n), m, 1)
}

fn expected_indices(companion: BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = [BigInt::from(3), BigInt::from(5), companion]
        .into_iter()
        .filter(|a| *a > BigInt::from(1))
        .collect();
    v.sort();
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::NotApplicable => "n/a",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, ok: bool, detail: String) -> Self {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        Check { name, status, detail }
    }

    fn skipped(name: &'static str, detail: &str) -> Self {
        Check { name, status: CheckStatus::NotApplicable, detail: detail.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub n: i64,
    pub variant: Variant,
    pub montesinos: MontesinosLink,
    pub manifold: SeifertManifold,
    pub lens: Option<LensSpace>,
    pub type_triple: Option<[BigInt; 3]>,
    pub h1: H1Order,
    pub companion_fiber_index: BigInt,
    pub checks: Vec<Check>,
}

impl FamilyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "variant": self.variant.to_string(),
            "montesinos": self.montesinos.to_string(),
            "manifold": seifert::normalize(&self.manifold).to_string(),
            "euler_number": seifert::euler_number(&self.manifold).to_string(),
            "lens": self.lens.as_ref().map(|l| l.to_string()),
            "type_triple": self.type_triple.as_ref()
                .map(|t| t.iter().map(crate::json_int).collect::<Vec<_>>()),
            "h1": crate::json_h1(&self.h1),
            "companion_fiber_index": crate::json_int(&self.companion_fiber_index),
            "checks": self.checks.iter().map(|c| serde_json::json!({
                "name": c.name,
                "status": c.status.to_string(),
                "detail": c.detail,
            })).collect::<Vec<_>>(),
            "all_passed": self.all_passed(),
            "hyperbolicity": HYPERBOLICITY_NOTE,
        })
    }
}

impl fmt::Display for FamilyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let triple = match &self.type_triple {
            Some([a, b, c]) => format!("S2({a},{b},{c})"),
            None => "none".to_string(),
        };
        let lens = self.lens.as_ref().map_or("none".to_string(), |l| l.to_string());
        writeln!(
            f,
            "n={} variant={} link={} manifold={} type={} lens={} h1={} companion={}",
            self.n,
            self.variant,
            self.montesinos,
            seifert::normalize(&self.manifold),
            triple,
            lens,
            self.h1,
            self.companion_fiber_index
        )?;
        for c in &self.checks {
            writeln!(f, "  [{}] {}: {}", c.status, c.name, c.detail)?;
        }
        Ok(())
    }
}

fn homology_check(n: i64, variant: Variant, h1: &H1Order) -> Check {
    let family = twist_family(n, variant);
    let description = family.description().expect("finite slope");
    let link_h1 = surgery::h1_from_link(&surgery::delete_unfilled(&description)).expect("unfilled deleted");
    let untwisted = family.untwisted().expect("finite slope");
    let untwisted_ok = untwisted.len() == 1 && untwisted.coefficients()[0] == ExtendedRational::integer(n);
    let expected = H1Order::cyclic(n);
    Check::new(
        "homology",
        *h1 == expected && link_h1 == expected && untwisted_ok,
        format!("cover h1={h1}, link h1={link_h1} for {description}, expected |n|={expected}"),
    )
}

fn mirror_check(n: i64, manifold: &SeifertManifold, variant: Variant) -> Check {
    // The orientation-reversing map (K_{-n}; -n) -> (K'_n; n) sends c_{-n}
    // to c'_n, so the mirror of the -n manifold has companion |4n + 15|.
    let other = surgered_manifold(-n, Variant::Standard).expect("standard is total");
    let mirrored = seifert::mirror(&other);
    let via_link = montesinos::double_branched_cover(&montesinos::mirror(&montesinos_of(-n)));
    let expected = expected_indices(BigInt::from(4 * n + 15).abs());
    let indices = seifert::exceptional_indices(&mirrored);
    let mut ok = seifert::same_up_to_homeo(&mirrored, &via_link, true)
        && seifert::h1_order(&mirrored) == H1Order::cyclic(n)
        && indices == expected;
    if variant == Variant::Primed {
        ok &= seifert::same_up_to_homeo(manifold, &mirrored, true);
    }
    Check::new(
        "mirror_coherence",
        ok,
        format!("mirror of the n={} manifold has indices {}", -n, display_ints(&indices)),
    )
}

fn display_ints(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Runs every consistency check for one member of the family. Failed
/// checks are recorded in the report, not returned as errors.
pub fn verify(n: i64, variant: Variant) -> Result<FamilyReport, FamilyError> {
    let manifold = surgered_manifold(n, variant)?;
    let companion = companion_fiber_index(n, variant)?;
    let link = match variant {
        Variant::Standard => montesinos_of(n),
        Variant::Primed => montesinos::mirror(&montesinos_of(-n)),
    };
    let h1 = seifert::h1_order(&manifold);
    let lens = seifert::as_lens(&manifold);
    let type_triple = seifert::small_seifert_type(&manifold);
    let indices = seifert::exceptional_indices(&manifold);
    let lens_case = variant == Variant::Standard && n == 4;

    let mut checks = vec![homology_check(n, variant, &h1)];

    if lens_case {
        checks.push(Check::skipped("type", "n = 4: K_4 is unknotted and the surgery is a lens space"));
    } else {
        let expected = expected_indices(companion.clone());
        let actual = type_triple.as_ref().map(|t| t.to_vec());
        checks.push(Check::new(
            "type",
            actual.as_ref() == Some(&expected),
            format!("indices {}, expected {}", display_ints(&indices), display_ints(&expected)),
        ));
    }

    let maximal_applies = variant == Variant::Primed || !(3..=5).contains(&n);
    if maximal_applies {
        let max_count = indices.iter().filter(|a| **a == companion).count();
        let ok = companion > BigInt::from(5)
            && max_count == 1
            && indices.iter().all(|a| *a <= companion);
        checks.push(Check::new(
            "companion_maximal",
            ok,
            format!("companion index {companion} occurs {max_count} time(s)"),
        ));
    } else {
        checks.push(Check::skipped("companion_maximal", "n in {3,4,5}: companion index is not above 5"));
    }

    if lens_case {
        let target = LensSpace::new(4, 1);
        let ok = lens.as_ref().is_some_and(|l| l.equivalent(&target, false));
        let got = lens.as_ref().map_or("none".to_string(), |l| l.to_string());
        checks.push(Check::new("lens", ok, format!("{got} vs {target} (unoriented)")));
    } else {
        checks.push(Check::skipped("lens", "only n = 4 (standard) degenerates to a lens space"));
    }

    checks.push(mirror_check(n, &manifold, variant));

    Ok(FamilyReport {
        n,
        variant,
        montesinos: link,
        manifold,
        lens,
        type_triple,
        h1,
        companion_fiber_index: companion,
        checks,
    })
}

/// Standard-variant reports for `from..=to`, in order of `n`.
pub fn sweep(from: i64, to: i64) -> Vec<FamilyReport> {
    (from..=to)
        .into_par_iter()
        .map(|n| verify(n, Variant::Standard).expect("standard variant is total"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn montesinos_examples() {
        assert_eq!(montesinos_of(1).to_string(), "M(2/5,-2/3,3/11)");
        assert_eq!(montesinos_of(4).to_string(), "M(2/5,-2/3,0/1)");
        assert_eq!(montesinos_of(0).to_string(), "M(2/5,-2/3,4/15)");
    }

    #[test]
    fn manifold_examples() {
        let m = surgered_manifold(18, Variant::Standard).unwrap();
        assert_eq!(seifert::exceptional_indices(&m), ints(&[3, 5, 57]));
        assert_eq!(seifert::h1_order(&m), H1Order::cyclic(18));

        let m = surgered_manifold(4, Variant::Standard).unwrap();
        assert_eq!(seifert::h1_order(&m), H1Order::cyclic(4));
        assert!(seifert::as_lens(&m).unwrap().equivalent(&LensSpace::new(4, 1), false));

        let m = surgered_manifold(4, Variant::Primed).unwrap();
        assert_eq!(seifert::exceptional_indices(&m), ints(&[3, 5, 31]));
        assert_eq!(seifert::h1_order(&m), H1Order::cyclic(4));

        assert_eq!(surgered_manifold(6, Variant::Primed), Err(FamilyError::PrimedOutOfRange(6)));
    }

    #[test]
    fn companion_examples() {
        assert_eq!(companion_fiber_index(1, Variant::Standard).unwrap(), BigInt::from(11));
        assert_eq!(companion_fiber_index(4, Variant::Standard).unwrap(), BigInt::from(1));
        assert_eq!(companion_fiber_index(5, Variant::Primed).unwrap(), BigInt::from(35));
        assert!(companion_fiber_index(2, Variant::Primed).is_err());
        let a = fiber_assignment(1, Variant::Standard).unwrap();
        assert_eq!(a, vec![("t1", BigInt::from(5)), ("t2", BigInt::from(3)), ("c", BigInt::from(11))]);
    }

    #[test]
    fn small_seifert_type_examples() {
        let t = |n, v| seifert::small_seifert_type(&surgered_manifold(n, v).unwrap()).map(|t| t.to_vec());
        assert_eq!(t(18, Variant::Standard), Some(ints(&[3, 5, 57])));
        assert_eq!(t(4, Variant::Standard), None);
        assert_eq!(t(3, Variant::Standard), Some(ints(&[3, 3, 5])));
    }

    #[test]
    fn mirror_of_minus_three() {
        let m = seifert::mirror(&surgered_manifold(-3, Variant::Standard).unwrap());
        assert_eq!(seifert::exceptional_indices(&m), ints(&[3, 5, 27]));
    }

    #[test]
    fn verify_examples() {
        let r = verify(1, Variant::Standard).unwrap();
        assert!(r.all_passed(), "{r}");
        assert_eq!(r.type_triple.as_ref().unwrap().to_vec(), ints(&[3, 5, 11]));
        assert_eq!(r.h1, H1Order::cyclic(1));

        let r = verify(0, Variant::Standard).unwrap();
        assert!(r.all_passed(), "{r}");
        assert_eq!(r.h1, H1Order::Infinite);
        assert_eq!(r.type_triple.as_ref().unwrap().to_vec(), ints(&[3, 5, 15]));

        let r = verify(4, Variant::Standard).unwrap();
        assert!(r.all_passed(), "{r}");
        assert_eq!(r.check("homology").unwrap().status, CheckStatus::Pass);
        assert_eq!(r.check("lens").unwrap().status, CheckStatus::Pass);
        assert_eq!(r.check("type").unwrap().status, CheckStatus::NotApplicable);
        assert_eq!(r.check("companion_maximal").unwrap().status, CheckStatus::NotApplicable);
        assert!(r.lens.is_some());

        for n in 3..=5 {
            let r = verify(n, Variant::Primed).unwrap();
            assert!(r.all_passed(), "{r}");
            assert_eq!(r.check("companion_maximal").unwrap().status, CheckStatus::Pass);
        }
    }

    #[test]
    fn branch_link_is_fully_surgered() {
        let b = branch_link(1);
        assert!(b.marks().is_empty());
        assert_eq!(b.to_string(), "-1/2,-1/1,-8/3,1/1");
        // At n = 4 the c-coefficient is 1/0, leaving that slot an untangle.
        assert!(branch_link(4).slots()[2].is_untangle());
    }

    #[test]
    fn sweep_is_ordered() {
        let reports = sweep(-3, 3);
        let ns: Vec<i64> = reports.iter().map(|r| r.n).collect();
        assert_eq!(ns, (-3..=3).collect::<Vec<_>>());
    }
}
