//! Linear covers of cyclically ordered groups.
//!
//! Two presentations live here. [`CarryCover`] is the cover `Z x G` built from
//! a ternary oracle, with addition carrying into the first coordinate when the
//! second wraps around. [`CoverOrder`] orders plain `Z^2`; each concrete cyclic
//! order on `Z` has one whose ordered group is isomorphic to its carry cover
//! (see [`to_ordered`]), with `u = (1,0)` in both.

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::cyclic::{oracle_lt, CyclicOrder, CyclicOrderSpec, TernaryOracle};
use crate::exactnum::{surd_cmp, Character, QuadSurd};
use crate::{Error, Result};

/// A point `(k, l)` of `Z^2`; serialized as `[k, l]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct CoverPoint {
    pub k: i64,
    pub l: i64,
}

impl From<[i64; 2]> for CoverPoint {
    fn from([k, l]: [i64; 2]) -> Self {
        Self { k, l }
    }
}

impl From<CoverPoint> for [i64; 2] {
    fn from(p: CoverPoint) -> Self {
        [p.k, p.l]
    }
}

impl CoverPoint {
    pub const ZERO: Self = Self { k: 0, l: 0 };
    /// The distinguished positive cofinal element `u`.
    pub const UNIT: Self = Self { k: 1, l: 0 };

    pub const fn new(k: i64, l: i64) -> Self {
        Self { k, l }
    }

    pub fn checked_add(self, other: Self) -> Result<Self> {
        Ok(Self {
            k: self.k.checked_add(other.k).ok_or(Error::Overflow("cover point"))?,
            l: self.l.checked_add(other.l).ok_or(Error::Overflow("cover point"))?,
        })
    }

    pub fn checked_sub(self, other: Self) -> Result<Self> {
        self.checked_add(other.checked_neg()?)
    }

    pub fn checked_neg(self) -> Result<Self> {
        Ok(Self {
            k: self.k.checked_neg().ok_or(Error::Overflow("cover point"))?,
            l: self.l.checked_neg().ok_or(Error::Overflow("cover point"))?,
        })
    }

    pub fn checked_scale(self, n: i64) -> Result<Self> {
        Ok(Self {
            k: self.k.checked_mul(n).ok_or(Error::Overflow("cover point"))?,
            l: self.l.checked_mul(n).ok_or(Error::Overflow("cover point"))?,
        })
    }
}

impl fmt::Display for CoverPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.l)
    }
}

impl FromStr for CoverPoint {
    type Err = Error;

    /// `k,l` or `(k,l)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInterval(format!("not a cover point: {s}"));
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(t);
        let (k, l) = t.split_once(',').ok_or_else(bad)?;
        Ok(Self {
            k: k.trim().parse().map_err(|_| bad())?,
            l: l.trim().parse().map_err(|_| bad())?,
        })
    }
}

/// A total group order on `Z^2`, compatible with addition.
#[derive(Clone, Debug)]
pub enum CoverOrder {
    /// Lexicographic on `(k, l)`.
    Lex,
    /// Lexicographic on `(k, -l)`.
    LexOpposite,
    /// `(k,l) > 0` iff `k + alpha*l > 0`, for irrational `alpha`.
    PullbackAlpha(Character),
}

impl CoverOrder {
    /// The order whose ordered group is the linear cover of `spec`.
    pub fn for_spec(spec: &CyclicOrderSpec) -> Result<Self> {
        Ok(match spec {
            CyclicOrderSpec::Plus => Self::Lex,
            CyclicOrderSpec::Minus => Self::LexOpposite,
            CyclicOrderSpec::Rot(alpha) => Self::pullback(alpha.clone())?,
        })
    }

    pub fn pullback(alpha: QuadSurd) -> Result<Self> {
        if alpha.is_rational() {
            return Err(Error::RationalAlpha(alpha.to_string()));
        }
        Ok(Self::PullbackAlpha(Character::new(alpha)))
    }

    pub fn cmp(&self, p: CoverPoint, q: CoverPoint) -> Ordering {
        match self {
            Self::Lex => (p.k, p.l).cmp(&(q.k, q.l)),
            Self::LexOpposite => p.k.cmp(&q.k).then(q.l.cmp(&p.l)),
            Self::PullbackAlpha(chi) => match (p.k.checked_sub(q.k), p.l.checked_sub(q.l)) {
                (Some(dk), Some(dl)) => chi.sign_affine(dk, dl),
                _ => {
                    let value = |x: CoverPoint| chi.alpha().mul_int(x.l).add_int(x.k);
                    surd_cmp(&value(p), &value(q))
                }
            },
        }
    }

    pub fn lt(&self, p: CoverPoint, q: CoverPoint) -> bool {
        self.cmp(p, q) == Ordering::Less
    }

    pub fn signum(&self, p: CoverPoint) -> Ordering {
        self.cmp(p, CoverPoint::ZERO)
    }
}

impl fmt::Display for CoverOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Lex => f.write_str("lex"),
            Self::LexOpposite => f.write_str("lex-opposite"),
            Self::PullbackAlpha(chi) => write!(f, "alpha:{}", chi.alpha()),
        }
    }
}

impl FromStr for CoverOrder {
    type Err = Error;

    /// `lex | lex-opposite | alpha:<surd>`; a cyclic order name selects its cover.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "lex" => Ok(Self::Lex),
            "lex-opposite" => Ok(Self::LexOpposite),
            _ => match s.strip_prefix("alpha:") {
                Some(alpha) => Self::pullback(alpha.parse()?),
                None => Self::for_spec(&s.parse()?),
            },
        }
    }
}

impl Serialize for CoverOrder {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The cover `Z x G` of a cyclic order given as an oracle, counting queries.
///
/// `(k,a) + (k',a') = (k + k' + c, a + a')` where the carry `c` is 1 exactly
/// when `a` and `a'` are nonzero and `C(0, a, a+a')` fails. The order is
/// lexicographic with the associated linear order on the second coordinate.
pub struct CarryCover<O> {
    oracle: O,
    queries: Cell<u64>,
}

impl<O: TernaryOracle> CarryCover<O> {
    pub fn new(oracle: O) -> Self {
        Self {
            oracle,
            queries: Cell::new(0),
        }
    }

    /// Oracle calls made so far.
    pub fn queries(&self) -> u64 {
        self.queries.get()
    }

    fn query(&self, j: i64, k: i64, l: i64) -> bool {
        self.queries.set(self.queries.get() + 1);
        self.oracle.holds(j, k, l)
    }

    pub fn carry(&self, a: i64, b: i64) -> Result<i64> {
        if a == 0 || b == 0 {
            return Ok(0);
        }
        let sum = a.checked_add(b).ok_or(Error::Overflow("group element"))?;
        Ok(i64::from(!self.query(0, a, sum)))
    }

    pub fn add(&self, p: CoverPoint, q: CoverPoint) -> Result<CoverPoint> {
        let carry = self.carry(p.l, q.l)?;
        let k = p
            .k
            .checked_add(q.k)
            .and_then(|k| k.checked_add(carry))
            .ok_or(Error::Overflow("cover point"))?;
        let l = p.l.checked_add(q.l).ok_or(Error::Overflow("group element"))?;
        Ok(CoverPoint { k, l })
    }

    pub fn neg(&self, p: CoverPoint) -> Result<CoverPoint> {
        let overflow = Error::Overflow("cover point");
        let k = p.k.checked_neg().ok_or(overflow.clone())?;
        if p.l == 0 {
            return Ok(CoverPoint { k, l: 0 });
        }
        Ok(CoverPoint {
            k: k.checked_sub(1).ok_or(overflow.clone())?,
            l: p.l.checked_neg().ok_or(overflow)?,
        })
    }

    pub fn sub(&self, p: CoverPoint, q: CoverPoint) -> Result<CoverPoint> {
        self.add(p, self.neg(q)?)
    }

    /// `n * p` by doubling.
    pub fn mul(&self, p: CoverPoint, n: i64) -> Result<CoverPoint> {
        let (mut base, mut n) = if n < 0 {
            (self.neg(p)?, n.unsigned_abs())
        } else {
            (p, n as u64)
        };
        let mut acc = CoverPoint::ZERO;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(acc, base)?;
            }
            n >>= 1;
            if n > 0 {
                base = self.add(base, base)?;
            }
        }
        Ok(acc)
    }

    pub fn lt(&self, p: CoverPoint, q: CoverPoint) -> bool {
        self.cmp(p, q) == Ordering::Less
    }

    pub fn cmp(&self, p: CoverPoint, q: CoverPoint) -> Ordering {
        p.k.cmp(&q.k).then_with(|| {
            if p.l == q.l {
                Ordering::Equal
            } else if self.lin_lt(p.l, q.l) {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }

    fn lin_lt(&self, a: i64, b: i64) -> bool {
        self.queries.set(self.queries.get() + 1);
        oracle_lt(&self.oracle, a, b)
    }
}

fn carry_cover(spec: &CyclicOrderSpec) -> Result<CarryCover<CyclicOrder>> {
    Ok(CarryCover::new(spec.validate()?))
}

/// Sum in the carry cover of `spec`.
pub fn cover_add(spec: &CyclicOrderSpec, p: CoverPoint, q: CoverPoint) -> Result<CoverPoint> {
    carry_cover(spec)?.add(p, q)
}

/// Strict order in the carry cover of `spec`.
pub fn cover_lt(spec: &CyclicOrderSpec, p: CoverPoint, q: CoverPoint) -> Result<bool> {
    Ok(carry_cover(spec)?.lt(p, q))
}

pub fn cover_neg(spec: &CyclicOrderSpec, p: CoverPoint) -> Result<CoverPoint> {
    carry_cover(spec)?.neg(p)
}

pub fn cover_mul(spec: &CyclicOrderSpec, p: CoverPoint, n: i64) -> Result<CoverPoint> {
    carry_cover(spec)?.mul(p, n)
}

/// The covering map `Z x G -> G`.
pub fn project(p: CoverPoint) -> i64 {
    p.l
}

fn rot_shift(alpha: &QuadSurd, a: i64) -> Result<i64> {
    crate::exactnum::floor_mul(alpha, a)
        .to_i64()
        .ok_or(Error::Overflow("floor(alpha*l)"))
}

/// Maps a carry-cover point to the ordered `Z^2` of [`CoverOrder::for_spec`].
///
/// This is the isomorphism `(k,a) -> k*u + s(a)` with `s` the [`section`].
pub fn to_ordered(spec: &CyclicOrderSpec, p: CoverPoint) -> Result<CoverPoint> {
    let s = section(spec, p.l)?;
    Ok(CoverPoint {
        k: p.k.checked_add(s.k).ok_or(Error::Overflow("cover point"))?,
        l: s.l,
    })
}

/// Inverse of [`to_ordered`].
pub fn from_ordered(spec: &CyclicOrderSpec, p: CoverPoint) -> Result<CoverPoint> {
    let s = section(spec, p.l)?;
    Ok(CoverPoint {
        k: p.k.checked_sub(s.k).ok_or(Error::Overflow("cover point"))?,
        l: p.l,
    })
}

/// The unique lift of `g` into `[0, u)` of the ordered `Z^2` for `spec`.
pub fn section(spec: &CyclicOrderSpec, g: i64) -> Result<CoverPoint> {
    let k = match spec {
        CyclicOrderSpec::Plus => i64::from(g < 0),
        CyclicOrderSpec::Minus => i64::from(g > 0),
        CyclicOrderSpec::Rot(alpha) => {
            if alpha.is_rational() {
                return Err(Error::RationalAlpha(alpha.to_string()));
            }
            rot_shift(alpha, g)?
                .checked_neg()
                .ok_or(Error::Overflow("cover point"))?
        }
    };
    Ok(CoverPoint { k, l: g })
}

/// Addition on `[0, u)`: add and subtract `u` once if the sum reaches it.
///
/// Under [`section`] this is the group law of `G`.
pub fn tilde_add(order: &CoverOrder, x: CoverPoint, y: CoverPoint) -> Result<CoverPoint> {
    let sum = x.checked_add(y)?;
    if order.cmp(sum, CoverPoint::UNIT) == Ordering::Less {
        Ok(sum)
    } else {
        sum.checked_sub(CoverPoint::UNIT)
    }
}

/// Least `n >= 0` with `p < n*u`.
pub fn cofinality_witness(order: &CoverOrder, p: CoverPoint, budget: u64) -> Result<u64> {
    for n in 0..=budget {
        let nu = CoverPoint::new(n as i64, 0);
        if order.lt(p, nu) {
            return Ok(n);
        }
    }
    Err(Error::BudgetExhausted(budget))
}

/// Number of classes of `H / nH` met by points of `[-w, w]^2`, with classes
/// told apart by componentwise residues in ordered coordinates.
pub fn quotient_classes(spec: &CyclicOrderSpec, n: u64, window: i64) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidModulus);
    }
    let n = n as i64;
    let mut classes = std::collections::HashSet::new();
    for k in -window..=window {
        for l in -window..=window {
            let p = to_ordered(spec, CoverPoint { k, l })?;
            classes.insert((p.k.rem_euclid(n), p.l.rem_euclid(n)));
        }
    }
    Ok(classes.len())
}
