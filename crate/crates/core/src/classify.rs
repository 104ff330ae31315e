//! Classifying a cyclic order on `Z` from oracle access alone.

use std::cell::Cell;
use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::cover::{CarryCover, CoverPoint};
use crate::cyclic::TernaryOracle;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderType {
    /// Some element lies strictly between `1` and `2` on the circle.
    Dense,
    /// No element found between `0 -> 1 -> 2`; looks like `C+`.
    DiscretePlus,
    /// No element found between `0 -> 2 -> 1`; looks like `C-`.
    DiscreteMinus,
    /// No candidate was examined.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeReport {
    pub kind: OrderType,
    /// `(j, l, k)` with `C(j, l, k)` and `{j,k} = {1,2}` when dense.
    pub witness: Option<[i64; 3]>,
    /// Candidates examined for the witness.
    pub budget_spent: u64,
    pub queries: u64,
}

struct Counting<'a, O: ?Sized> {
    oracle: &'a O,
    calls: Cell<u64>,
}

impl<O: TernaryOracle + ?Sized> TernaryOracle for Counting<'_, O> {
    fn holds(&self, j: i64, k: i64, l: i64) -> bool {
        self.calls.set(self.calls.get() + 1);
        self.oracle.holds(j, k, l)
    }
}

/// `0, -1, 3, -2, 4, -3, 5, ...`: every integer except 1 and 2.
fn candidate(i: u64) -> i64 {
    match i {
        0 => 0,
        _ if i % 2 == 1 => -(i.div_ceil(2) as i64),
        _ => (i / 2) as i64 + 2,
    }
}

/// Decides whether the order is dense, by searching for an element strictly
/// between `1` and `2` in the direction the order takes from `0`.
///
/// A discrete verdict only means no such element turned up among `budget`
/// candidates.
pub fn detect_type<O: TernaryOracle + ?Sized>(oracle: &O, budget: u64) -> TypeReport {
    let counting = Counting {
        oracle,
        calls: Cell::new(0),
    };
    if budget == 0 {
        return TypeReport {
            kind: OrderType::Unknown,
            witness: None,
            budget_spent: 0,
            queries: 0,
        };
    }
    let forward = counting.holds(0, 1, 2);
    let (from, to) = if forward { (1, 2) } else { (2, 1) };
    let mut spent = 0;
    for i in 0..budget {
        spent += 1;
        let l = candidate(i);
        if counting.holds(from, l, to) {
            return TypeReport {
                kind: OrderType::Dense,
                witness: Some([from, l, to]),
                budget_spent: spent,
                queries: counting.calls.get(),
            };
        }
    }
    TypeReport {
        kind: if forward {
            OrderType::DiscretePlus
        } else {
            OrderType::DiscreteMinus
        },
        witness: None,
        budget_spent: spent,
        queries: counting.calls.get(),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RecoverOptions {
    /// Number of Stern-Brocot steps.
    pub depth: u32,
    /// Stop before a mediant whose denominator exceeds this.
    pub max_denominator: Option<u64>,
}

impl Default for RecoverOptions {
    fn default() -> Self {
        Self {
            depth: 40,
            max_denominator: None,
        }
    }
}

fn ser_ratio<S: Serializer>(value: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

#[derive(Clone, Debug, Serialize)]
pub struct Step {
    pub m: u64,
    pub n: u64,
    /// `m/n` is below the target.
    pub below: bool,
    #[serde(serialize_with = "ser_ratio")]
    pub lo: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub hi: BigRational,
}

/// Result of [`recover_alpha`].
///
/// The target `beta` lies in the open interval `(lo, hi)` inside `(0, 1/2)`
/// and `alpha = sign * beta (mod 1)` for the unknown rotation angle.
#[derive(Clone, Debug, Serialize)]
pub struct Recovery {
    #[serde(serialize_with = "ser_ratio")]
    pub lo: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub hi: BigRational,
    pub sign: i8,
    pub queries: u64,
    pub steps: Vec<Step>,
}

impl Recovery {
    /// Bounds on `alpha mod 1` in `[0, 1)`.
    pub fn frac_alpha_bounds(&self) -> (BigRational, BigRational) {
        if self.sign > 0 {
            (self.lo.clone(), self.hi.clone())
        } else {
            let one = BigRational::from_integer(BigInt::from(1));
            (&one - &self.hi, &one - &self.lo)
        }
    }
}

fn ratio(m: u64, n: u64) -> BigRational {
    BigRational::new(BigInt::from(m), BigInt::from(n))
}

/// Pins down the rotation angle of a dense order through its carry cover.
///
/// Picks `v` in `{1, -1}` with `0 < 2v < u`, so `v` corresponds to some
/// irrational `beta` in `(0, 1/2)`, then narrows `beta` by Stern-Brocot
/// bisection, deciding each mediant `m/n` with the cover comparison
/// `m*u < n*v`.
pub fn recover_alpha<O: TernaryOracle>(oracle: O, options: RecoverOptions) -> Result<Recovery> {
    let cover = CarryCover::new(oracle);
    let u = CoverPoint::UNIT;
    let w = CoverPoint::new(0, 1);
    if !(cover.lt(CoverPoint::ZERO, w) && cover.lt(w, u)) {
        return Err(Error::OracleInconsistent("1 is not between 0 and u".into()));
    }
    let doubled = cover.add(w, w)?;
    let (v, sign) = if cover.lt(doubled, u) {
        (w, 1)
    } else {
        (cover.sub(u, w)?, -1)
    };
    let two_v = cover.add(v, v)?;
    if !(cover.lt(CoverPoint::ZERO, two_v) && cover.lt(two_v, u)) {
        return Err(Error::OracleInconsistent("no half-unit element among 1, -1".into()));
    }

    let mut power = two_v;
    let mut escapes = false;
    for _ in 0..60 {
        if !cover.lt(power, u) {
            escapes = true;
            break;
        }
        power = cover.add(power, power)?;
    }
    if !escapes {
        return Err(Error::NotDense(
            "powers 2^j of the generator never reach u".into(),
        ));
    }

    let (mut lo, mut hi) = ((0u64, 1u64), (1u64, 2u64));
    let mut steps = Vec::new();
    for _ in 0..options.depth {
        let (m, n) = (lo.0 + hi.0, lo.1 + hi.1);
        if options.max_denominator.is_some_and(|cap| n > cap) {
            break;
        }
        let mu = cover.mul(u, m as i64)?;
        let nv = cover.mul(v, n as i64)?;
        let below = match cover.cmp(mu, nv) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => {
                return Err(Error::OracleInconsistent(format!(
                    "{m}*u equals {n}*v, the order is not a rotation by an irrational"
                )))
            }
        };
        if below {
            lo = (m, n);
        } else {
            hi = (m, n);
        }
        steps.push(Step {
            m,
            n,
            below,
            lo: ratio(lo.0, lo.1),
            hi: ratio(hi.0, hi.1),
        });
    }
    Ok(Recovery {
        lo: ratio(lo.0, lo.1),
        hi: ratio(hi.0, hi.1),
        sign,
        queries: cover.queries(),
        steps,
    })
}
