//! Density searches behind Kronecker's theorem and the non-definability of
//! `X = {t : C_alpha(0, t, 1)}` from `+` alone.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::cyclic::CyclicOrderSpec;
use crate::exactnum::{surd_cmp, Character, FracPart, QuadSurd};
use crate::{Error, Result};

/// The half-open arc `[lo, hi)` of `R/Z`, wrapping through 0 when `hi < lo`.
/// `hi = 1` is allowed so that `[0, 1)` is the whole circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircleInterval {
    lo: QuadSurd,
    hi: QuadSurd,
}

impl CircleInterval {
    pub fn new(lo: QuadSurd, hi: QuadSurd) -> Result<Self> {
        let lo_ok = FracPart::new(lo.clone()).is_ok();
        let hi_ok = hi.signum() != Ordering::Less && surd_cmp(&hi, &QuadSurd::one()) != Ordering::Greater;
        if !lo_ok || !hi_ok {
            return Err(Error::InvalidInterval(format!(
                "[{lo}, {hi}) needs 0 <= lo < 1 and 0 <= hi <= 1"
            )));
        }
        if surd_cmp(&lo, &hi) == Ordering::Equal {
            return Err(Error::InvalidInterval(format!("[{lo}, {hi}) is empty")));
        }
        Ok(Self { lo, hi })
    }

    pub fn full() -> Self {
        Self {
            lo: QuadSurd::zero(),
            hi: QuadSurd::one(),
        }
    }

    pub fn lo(&self) -> &QuadSurd {
        &self.lo
    }

    pub fn hi(&self) -> &QuadSurd {
        &self.hi
    }

    /// Length of the arc.
    pub fn width(&self) -> QuadSurd {
        let w = self.hi.checked_sub(&self.lo).expect("same radicand checked at parse");
        if w.signum() == Ordering::Less {
            w.add_int(1)
        } else {
            w
        }
    }

    pub fn contains(&self, x: &FracPart) -> bool {
        let x = x.value();
        let at_least_lo = surd_cmp(x, &self.lo) != Ordering::Less;
        let below_hi = surd_cmp(x, &self.hi) == Ordering::Less;
        if surd_cmp(&self.lo, &self.hi) == Ordering::Less {
            at_least_lo && below_hi
        } else {
            at_least_lo || below_hi
        }
    }

    /// Whether `self` contains every point of `other`.
    pub fn covers(&self, other: &Self) -> bool {
        let as_pairs = |c: &Self| -> Vec<(QuadSurd, QuadSurd)> {
            if surd_cmp(&c.lo, &c.hi) == Ordering::Less {
                vec![(c.lo.clone(), c.hi.clone())]
            } else {
                vec![(c.lo.clone(), QuadSurd::one()), (QuadSurd::zero(), c.hi.clone())]
            }
        };
        let mine = as_pairs(self);
        as_pairs(other).iter().all(|(a, b)| {
            surd_cmp(a, b) != Ordering::Less
                || mine.iter().any(|(c, d)| {
                    surd_cmp(c, a) != Ordering::Greater && surd_cmp(b, d) != Ordering::Greater
                })
        })
    }
}

impl fmt::Display for CircleInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

impl FromStr for CircleInterval {
    type Err = Error;

    /// `lo,hi` or `[lo,hi)`; endpoints are rationals, decimals or surds.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('[').unwrap_or(t);
        let t = t.strip_suffix(')').unwrap_or(t);
        let (lo, hi) = t
            .split_once(',')
            .ok_or_else(|| Error::InvalidInterval(format!("expected lo,hi: {s}")))?;
        Self::new(lo.parse()?, hi.parse()?)
    }
}

fn irrational(x: &QuadSurd) -> Result<()> {
    if x.is_rational() {
        return Err(Error::RationalAlpha(x.to_string()));
    }
    Ok(())
}

fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let root = n.sqrt();
        &root * &root == *n
    }
}

/// Rejects `alpha, beta` that are rational or `Q`-linearly dependent
/// together with 1. Two irrational quadratic surds are dependent exactly when
/// they lie in the same quadratic field, i.e. the product of their radicands
/// is a square.
pub fn check_independent(alpha: &QuadSurd, beta: &QuadSurd) -> Result<()> {
    irrational(alpha)?;
    irrational(beta)?;
    if is_square(&(alpha.radicand() * beta.radicand())) {
        return Err(Error::DependentPair(format!("{alpha} and {beta}")));
    }
    Ok(())
}

/// Outcome of a bounded scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Search {
    pub witness: Option<i64>,
    /// Candidates examined.
    pub scanned: u64,
}

/// Smallest `m` in `1..=budget` with `frac(alpha m) ∈ ja` and `frac(beta m) ∈ jb`.
pub fn density_witness(
    alpha: &QuadSurd,
    beta: &QuadSurd,
    ja: &CircleInterval,
    jb: &CircleInterval,
    budget: u64,
) -> Result<Search> {
    check_independent(alpha, beta)?;
    let (ca, cb) = (Character::new(alpha.clone()), Character::new(beta.clone()));
    for m in 1..=budget {
        let m = i64::try_from(m).map_err(|_| Error::Overflow("budget"))?;
        if ja.contains(&ca.frac(m)) && jb.contains(&cb.frac(m)) {
            return Ok(Search {
                witness: Some(m),
                scanned: m as u64,
            });
        }
    }
    Ok(Search {
        witness: None,
        scanned: budget,
    })
}

/// `0, 1, -1, 2, -2, ...`
fn zigzag(i: u64) -> i64 {
    let half = i.div_ceil(2) as i64;
    if i % 2 == 1 {
        half
    } else {
        -half
    }
}

/// Searches `k + n * {l : frac(beta l) ∈ jb}` for a point `x` with
/// `frac(alpha x) ∈ ja`, scanning `l = 0, 1, -1, 2, ...`; returns `x`.
pub fn dense_intersect(
    alpha: &QuadSurd,
    beta: &QuadSurd,
    k: i64,
    n: u64,
    jb: &CircleInterval,
    ja: &CircleInterval,
    budget: u64,
) -> Result<Search> {
    check_independent(alpha, beta)?;
    if n == 0 {
        return Err(Error::InvalidModulus);
    }
    let n = i64::try_from(n).map_err(|_| Error::Overflow("modulus"))?;
    let (ca, cb) = (Character::new(alpha.clone()), Character::new(beta.clone()));
    for i in 0..budget {
        let l = zigzag(i);
        if !jb.contains(&cb.frac(l)) {
            continue;
        }
        let x = l
            .checked_mul(n)
            .and_then(|nl| nl.checked_add(k))
            .ok_or(Error::Overflow("k + n l"))?;
        if ja.contains(&ca.frac(x)) {
            return Ok(Search {
                witness: Some(x),
                scanned: i + 1,
            });
        }
    }
    Ok(Search {
        witness: None,
        scanned: budget,
    })
}

/// Smallest `m` in `1..=budget` with `C_alpha(0, k m + l, 1)`.
pub fn ap_meets_set(alpha: &QuadSurd, k: i64, l: i64, budget: u64) -> Result<Search> {
    if k == 0 {
        return Err(Error::ZeroStep);
    }
    let order = CyclicOrderSpec::Rot(alpha.clone()).validate()?;
    for m in 1..=budget {
        let t = (m as i64)
            .checked_mul(k)
            .and_then(|km| km.checked_add(l))
            .ok_or(Error::Overflow("k m + l"))?;
        if order.holds(0, t, 1) {
            return Ok(Search {
                witness: Some(m as i64),
                scanned: m,
            });
        }
    }
    Ok(Search {
        witness: None,
        scanned: budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::frac;

    fn surd(text: &str) -> QuadSurd {
        text.parse().unwrap()
    }

    fn arc(text: &str) -> CircleInterval {
        text.parse().unwrap()
    }

    #[test]
    fn interval_membership() {
        let half = arc("0,1/2");
        assert!(half.contains(&FracPart::zero()));
        assert!(!half.contains(&FracPart::new(surd("1/2")).unwrap()));
        let wrap = arc("[0.75, 0.25)");
        assert!(wrap.contains(&FracPart::new(surd("0.9")).unwrap()));
        assert!(wrap.contains(&FracPart::new(surd("0.1")).unwrap()));
        assert!(!wrap.contains(&FracPart::new(surd("0.5")).unwrap()));
        assert_eq!(wrap.width(), surd("1/2"));
        assert!(CircleInterval::full().contains(&FracPart::new(surd("0.999")).unwrap()));
        assert!("0.5,0.5".parse::<CircleInterval>().is_err());
        assert!("0,3/2".parse::<CircleInterval>().is_err());
        assert!(arc("sqrt(2)-1, 1").contains(&FracPart::new(surd("0.5")).unwrap()));
    }

    #[test]
    fn covers_wrapping_arcs() {
        assert!(arc("0.7,0.3").covers(&arc("0.8,0.1")));
        assert!(!arc("0.7,0.3").covers(&arc("0.6,0.1")));
        assert!(CircleInterval::full().covers(&arc("0.7,0.3")));
    }

    #[test]
    fn witness_examples() {
        let (a, b) = (surd("sqrt(2)"), surd("sqrt(3)"));
        let half = arc("0,0.5");
        assert_eq!(density_witness(&a, &b, &half, &half, 100).unwrap().witness, Some(3));
        let full = CircleInterval::full();
        assert_eq!(density_witness(&a, &b, &full, &full, 5).unwrap().witness, Some(1));
        for dep in ["1+sqrt(2)", "3*sqrt(2)/2", "sqrt(8)", "sqrt(18)-7"] {
            assert!(matches!(
                density_witness(&a, &surd(dep), &half, &half, 10),
                Err(Error::DependentPair(_))
            ));
        }
        assert!(matches!(
            density_witness(&a, &surd("2/3"), &half, &half, 10),
            Err(Error::RationalAlpha(_))
        ));
    }

    #[test]
    fn dense_intersect_examples() {
        let (a, b) = (surd("sqrt(2)"), surd("sqrt(3)"));
        let found = dense_intersect(&a, &b, 1, 2, &arc("0,1/4"), &arc("1/2,3/4"), 10_000)
            .unwrap()
            .witness
            .unwrap();
        let l = (found - 1) / 2;
        assert!(arc("0,1/4").contains(&frac(&b, l)));
        assert!(arc("1/2,3/4").contains(&frac(&a, found)));
        let full = CircleInterval::full();
        assert_eq!(dense_intersect(&a, &b, 0, 1, &full, &full, 3).unwrap().witness, Some(0));
        assert!(dense_intersect(&a, &surd("sqrt(2)+1"), 0, 1, &full, &full, 3).is_err());
    }

    #[test]
    fn ap_examples() {
        let a = surd("sqrt(2)");
        assert_eq!(ap_meets_set(&a, 1, 0, 10).unwrap().witness, Some(3));
        assert!(matches!(ap_meets_set(&a, 0, 1, 10), Err(Error::ZeroStep)));
        // k m + l = 1 is skipped: X excludes its endpoints
        let s = ap_meets_set(&a, 1, 0, 1).unwrap();
        assert_eq!(s, Search { witness: None, scanned: 1 });
        let two = ap_meets_set(&a, 2, 0, 100).unwrap().witness.unwrap();
        let order = CyclicOrderSpec::Rot(a).validate().unwrap();
        assert!(order.holds(0, 2 * two, 1));
        assert!((1..two).all(|m| !order.holds(0, 2 * m, 1)));
    }

    #[test]
    fn enlarging_intervals_never_loses_witnesses() {
        let (a, b) = (surd("sqrt(2)"), surd("(1+sqrt(5))/2"));
        let small = density_witness(&a, &b, &arc("0.3,0.4"), &arc("0.6,0.7"), 100_000).unwrap();
        let large = density_witness(&a, &b, &arc("0.2,0.5"), &arc("0.55,0.75"), 100_000).unwrap();
        assert!(large.witness.unwrap() <= small.witness.unwrap());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn witness_is_minimal(lo_a in 0u32..90, lo_b in 0u32..90, wa in 10u32..=50, wb in 10u32..=50) {
            let (a, b) = (surd("sqrt(2)"), surd("sqrt(3)"));
            let mk = |lo: u32, w: u32| CircleInterval::new(
                QuadSurd::ratio(lo as i64, 100).unwrap(),
                QuadSurd::ratio(((lo + w) % 100) as i64, 100).unwrap(),
            ).unwrap();
            let (ja, jb) = (mk(lo_a, wa), mk(lo_b, wb));
            let m = density_witness(&a, &b, &ja, &jb, 10_000).unwrap().witness.unwrap();
            proptest::prop_assert!(ja.contains(&frac(&a, m)) && jb.contains(&frac(&b, m)));
            for j in 1..m {
                proptest::prop_assert!(!(ja.contains(&frac(&a, j)) && jb.contains(&frac(&b, j))));
            }
        }
    }
}
