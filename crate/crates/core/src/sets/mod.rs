//! Convex, tmc and cnc sets in `Z` (cyclically ordered) and `Z^2` (linearly
//! ordered by a [`CoverOrder`]).
//!
//! A tmc-set is `a + mJ`, a cnc-set is `J ∩ (a + nG)`, with `J` convex.

mod normalize;
mod probe;

use std::cmp::Ordering;

use num_integer::Integer;
use serde::Serialize;

use crate::cover::{CoverOrder, CoverPoint};
use crate::cyclic::{CyclicOrder, CyclicOrderSpec};
use crate::exactnum::{surd_cmp, Character, FracPart, QuadSurd};
use crate::{Error, Result};

pub use normalize::{normalize_qf, unary_decompose, Atom, AtomKind, Normalized};
pub use probe::{probe_single_cnc, CncProbe};

/// An element of `Z` or of `Z^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum Elem {
    Int(i64),
    Point(CoverPoint),
}

/// `den * t` compared against `num`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub num: CoverPoint,
    pub den: u64,
    pub inclusive: bool,
}

impl Bound {
    pub fn at(point: CoverPoint, inclusive: bool) -> Self {
        Self {
            num: point,
            den: 1,
            inclusive,
        }
    }

    fn scaled(&self, t: CoverPoint) -> Result<CoverPoint> {
        t.checked_scale(den_i64(self.den)?)
    }

    /// Divides numerator and denominator by their common factor.
    fn reduced(self) -> Self {
        let g = (self.den as i64).gcd(&self.num.k).gcd(&self.num.l).max(1);
        Self {
            num: CoverPoint::new(self.num.k / g, self.num.l / g),
            den: self.den / g as u64,
            inclusive: self.inclusive,
        }
    }

    /// Compares `self.num/self.den` with `other.num/other.den`.
    fn cmp_value(&self, other: &Self, order: &CoverOrder) -> Result<Ordering> {
        let lhs = self.num.checked_scale(den_i64(other.den)?)?;
        let rhs = other.num.checked_scale(den_i64(self.den)?)?;
        Ok(order.cmp(lhs, rhs))
    }
}

fn den_i64(den: u64) -> Result<i64> {
    if den == 0 {
        return Err(Error::DivisionByZero);
    }
    i64::try_from(den).map_err(|_| Error::Overflow("bound denominator"))
}

/// A convex subset of `Z^2` under `order`, cut out by at most two bounds.
#[derive(Clone, Debug, Serialize)]
pub struct LinearConvex {
    pub order: CoverOrder,
    pub lower: Option<Bound>,
    pub upper: Option<Bound>,
}

impl LinearConvex {
    pub fn all(order: CoverOrder) -> Self {
        Self {
            order,
            lower: None,
            upper: None,
        }
    }

    /// The closed interval `[lo, hi]`.
    pub fn closed(order: CoverOrder, lo: CoverPoint, hi: CoverPoint) -> Self {
        Self {
            order,
            lower: Some(Bound::at(lo, true)),
            upper: Some(Bound::at(hi, true)),
        }
    }

    /// The half-open interval `[lo, hi)`.
    pub fn half_open(order: CoverOrder, lo: CoverPoint, hi: CoverPoint) -> Self {
        Self {
            order,
            lower: Some(Bound::at(lo, true)),
            upper: Some(Bound::at(hi, false)),
        }
    }

    pub fn contains(&self, t: CoverPoint) -> Result<bool> {
        if let Some(b) = &self.lower {
            let c = self.order.cmp(b.scaled(t)?, b.num);
            if c == Ordering::Less || (c == Ordering::Equal && !b.inclusive) {
                return Ok(false);
            }
        }
        if let Some(b) = &self.upper {
            let c = self.order.cmp(b.scaled(t)?, b.num);
            if c == Ordering::Greater || (c == Ordering::Equal && !b.inclusive) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Tightens the lower bound.
    pub fn meet_lower(&mut self, bound: Bound) -> Result<()> {
        let bound = bound.reduced();
        self.lower = Some(match self.lower {
            None => bound,
            Some(old) => match bound.cmp_value(&old, &self.order)? {
                Ordering::Greater => bound,
                Ordering::Less => old,
                Ordering::Equal => Bound {
                    inclusive: old.inclusive && bound.inclusive,
                    ..old
                },
            },
        });
        Ok(())
    }

    /// Tightens the upper bound.
    pub fn meet_upper(&mut self, bound: Bound) -> Result<()> {
        let bound = bound.reduced();
        self.upper = Some(match self.upper {
            None => bound,
            Some(old) => match bound.cmp_value(&old, &self.order)? {
                Ordering::Less => bound,
                Ordering::Greater => old,
                Ordering::Equal => Bound {
                    inclusive: old.inclusive && bound.inclusive,
                    ..old
                },
            },
        });
        Ok(())
    }

    /// True when the bounds leave no room even in the divisible hull.
    pub fn is_trivially_empty(&self) -> Result<bool> {
        match (&self.lower, &self.upper) {
            (Some(lo), Some(hi)) => Ok(match lo.cmp_value(hi, &self.order)? {
                Ordering::Greater => true,
                Ordering::Equal => !(lo.inclusive && hi.inclusive),
                Ordering::Less => false,
            }),
            _ => Ok(false),
        }
    }
}

/// One end of an arc: a group element or a point of the circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcEnd {
    Int(i64),
    /// Only meaningful for rotation orders.
    Circle(FracPart),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArcKind {
    Empty,
    Full,
    Point { at: ArcEnd },
    /// Runs from `start` in the positive direction to `end`. With
    /// `start == end` it is the whole circle minus that point, plus the point
    /// if either end is closed.
    Arc {
        start: ArcEnd,
        start_closed: bool,
        end: ArcEnd,
        end_closed: bool,
    },
}

/// A convex subset of `Z` under a cyclic order.
#[derive(Clone, Debug, Serialize)]
pub struct CyclicInterval {
    pub spec: CyclicOrderSpec,
    pub kind: ArcKind,
}

impl CyclicInterval {
    pub fn new(spec: CyclicOrderSpec, kind: ArcKind) -> Result<Self> {
        let interval = Self { spec, kind };
        interval.check()?;
        Ok(interval)
    }

    pub fn full(spec: CyclicOrderSpec) -> Self {
        Self {
            spec,
            kind: ArcKind::Full,
        }
    }

    pub fn arc(
        spec: CyclicOrderSpec,
        start: ArcEnd,
        start_closed: bool,
        end: ArcEnd,
        end_closed: bool,
    ) -> Result<Self> {
        Self::new(
            spec,
            ArcKind::Arc {
                start,
                start_closed,
                end,
                end_closed,
            },
        )
    }

    fn check(&self) -> Result<()> {
        let order = self.spec.validate()?;
        let ends: Vec<&ArcEnd> = match &self.kind {
            ArcKind::Point { at } => vec![at],
            ArcKind::Arc { start, end, .. } => vec![start, end],
            _ => vec![],
        };
        if order.character().is_none() && ends.iter().any(|e| matches!(e, ArcEnd::Circle(_))) {
            return Err(Error::InvalidInterval(
                "circle endpoints need a rotation order".into(),
            ));
        }
        Ok(())
    }

    pub fn contains(&self, x: i64) -> Result<bool> {
        let order = self.spec.validate()?;
        Ok(match &self.kind {
            ArcKind::Empty => false,
            ArcKind::Full => true,
            ArcKind::Point { at } => position_eq(&order, x, at),
            ArcKind::Arc {
                start,
                start_closed,
                end,
                end_closed,
            } => {
                if position_eq(&order, x, start) {
                    *start_closed || (ends_eq(&order, start, end) && *end_closed)
                } else if position_eq(&order, x, end) {
                    *end_closed
                } else {
                    strictly_between(&order, start, x, end)
                }
            }
        })
    }
}

fn circle_value(chi: &Character, end: &ArcEnd) -> QuadSurd {
    match end {
        ArcEnd::Int(i) => chi.frac(*i).into_inner(),
        ArcEnd::Circle(f) => f.value().clone(),
    }
}

fn position_eq(order: &CyclicOrder, x: i64, end: &ArcEnd) -> bool {
    match (order.character(), end) {
        (_, ArcEnd::Int(i)) => x == *i,
        (Some(chi), ArcEnd::Circle(f)) => chi.cmp_frac_to(x, f.value()) == Ordering::Equal,
        (None, ArcEnd::Circle(_)) => false,
    }
}

fn ends_eq(order: &CyclicOrder, a: &ArcEnd, b: &ArcEnd) -> bool {
    match (a, b) {
        (ArcEnd::Int(i), ArcEnd::Int(j)) => i == j,
        _ => match order.character() {
            Some(chi) => surd_cmp(&circle_value(chi, a), &circle_value(chi, b)) == Ordering::Equal,
            None => false,
        },
    }
}

/// `x` lies on the open arc from `start` to `end` (positive direction).
fn strictly_between(order: &CyclicOrder, start: &ArcEnd, x: i64, end: &ArcEnd) -> bool {
    if let (ArcEnd::Int(s), ArcEnd::Int(e)) = (start, end) {
        if s == e {
            return x != *s;
        }
        return order.holds(*s, x, *e);
    }
    let chi = order.character().expect("checked at construction");
    let (s, e) = (circle_value(chi, start), circle_value(chi, end));
    let f = chi.frac(x).into_inner();
    let lt = |a: &QuadSurd, b: &QuadSurd| surd_cmp(a, b) == Ordering::Less;
    match surd_cmp(&s, &e) {
        Ordering::Less => lt(&s, &f) && lt(&f, &e),
        Ordering::Greater => lt(&s, &f) || lt(&f, &e),
        Ordering::Equal => surd_cmp(&f, &s) != Ordering::Equal,
    }
}

/// A convex set in either ambient group.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "ambient", rename_all = "snake_case")]
pub enum Convex {
    Cyclic(CyclicInterval),
    Linear(LinearConvex),
}

impl Convex {
    pub fn contains(&self, x: Elem) -> Result<bool> {
        match (self, x) {
            (Self::Cyclic(c), Elem::Int(i)) => c.contains(i),
            (Self::Linear(l), Elem::Point(p)) => l.contains(p),
            _ => Err(Error::AmbientMismatch),
        }
    }
}

/// `a + m*J`.
#[derive(Clone, Debug, Serialize)]
pub struct TmcSet {
    pub a: Elem,
    pub m: u64,
    pub j: Convex,
}

/// `J ∩ (a + n*G)`.
#[derive(Clone, Debug, Serialize)]
pub struct CncSet {
    pub j: Convex,
    pub a: Elem,
    pub n: u64,
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct UnionOfCnc(pub Vec<CncSet>);

/// Anything with a membership test.
pub trait Member {
    fn member(&self, x: Elem) -> Result<bool>;
}

fn modulus(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidModulus);
    }
    i64::try_from(n).map_err(|_| Error::Overflow("modulus"))
}

/// `x - a`, if `x` and `a` live in the same group.
fn difference(x: Elem, a: Elem) -> Result<Elem> {
    match (x, a) {
        (Elem::Int(x), Elem::Int(a)) => Ok(Elem::Int(
            x.checked_sub(a).ok_or(Error::Overflow("difference"))?,
        )),
        (Elem::Point(x), Elem::Point(a)) => Ok(Elem::Point(x.checked_sub(a)?)),
        _ => Err(Error::AmbientMismatch),
    }
}

fn divisible(x: Elem, n: i64) -> bool {
    match x {
        Elem::Int(i) => i % n == 0,
        Elem::Point(p) => p.k % n == 0 && p.l % n == 0,
    }
}

fn divide(x: Elem, n: i64) -> Elem {
    match x {
        Elem::Int(i) => Elem::Int(i / n),
        Elem::Point(p) => Elem::Point(CoverPoint::new(p.k / n, p.l / n)),
    }
}

impl Member for TmcSet {
    fn member(&self, x: Elem) -> Result<bool> {
        let m = modulus(self.m)?;
        let d = difference(x, self.a)?;
        let inside = self.j.contains(divide(d, m))?;
        Ok(divisible(d, m) && inside)
    }
}

impl Member for CncSet {
    fn member(&self, x: Elem) -> Result<bool> {
        let n = modulus(self.n)?;
        let d = difference(x, self.a)?;
        Ok(self.j.contains(x)? && divisible(d, n))
    }
}

impl Member for UnionOfCnc {
    fn member(&self, x: Elem) -> Result<bool> {
        for set in &self.0 {
            if set.member(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// `x ∈ set`.
pub fn member<S: Member + ?Sized>(set: &S, x: Elem) -> Result<bool> {
    set.member(x)
}

fn linear_parts(j: &Convex, a: Elem) -> Result<(&LinearConvex, CoverPoint)> {
    match (j, a) {
        (Convex::Linear(j), Elem::Point(a)) => Ok((j, a)),
        _ => Err(Error::AmbientMismatch),
    }
}

fn map_bound(b: &Bound, f: impl Fn(&Bound) -> Result<Bound>) -> Result<Bound> {
    Ok(f(b)?.reduced())
}

/// `a + mJ` as `I ∩ (a + mZ^2)` with `I = {x : den (x - a) >= m num}` for each
/// bound of `J`.
pub fn tmc_to_cnc(x: &TmcSet) -> Result<CncSet> {
    let (j, a) = linear_parts(&x.j, x.a)?;
    let m = modulus(x.m)?;
    let shift = |b: &Bound| -> Result<Bound> {
        Ok(Bound {
            num: b.num.checked_scale(m)?.checked_add(a.checked_scale(den_i64(b.den)?)?)?,
            den: b.den,
            inclusive: b.inclusive,
        })
    };
    let lower = j.lower.as_ref().map(|b| map_bound(b, shift)).transpose()?;
    let upper = j.upper.as_ref().map(|b| map_bound(b, shift)).transpose()?;
    Ok(CncSet {
        j: Convex::Linear(LinearConvex {
            order: j.order.clone(),
            lower,
            upper,
        }),
        a: x.a,
        n: x.m,
    })
}

/// `I ∩ (a + nZ^2)` as `a + nJ` with `J = {t : a + n t ∈ I}`.
pub fn cnc_to_tmc(x: &CncSet) -> Result<TmcSet> {
    let (i, a) = linear_parts(&x.j, x.a)?;
    let n = modulus(x.n)?;
    let pull = |b: &Bound| -> Result<Bound> {
        Ok(Bound {
            num: b.num.checked_sub(a.checked_scale(den_i64(b.den)?)?)?,
            den: b.den.checked_mul(n as u64).ok_or(Error::Overflow("bound denominator"))?,
            inclusive: b.inclusive,
        })
    };
    let lower = i.lower.as_ref().map(|b| map_bound(b, pull)).transpose()?;
    let upper = i.upper.as_ref().map(|b| map_bound(b, pull)).transpose()?;
    Ok(TmcSet {
        a: x.a,
        m: x.n,
        j: Convex::Linear(LinearConvex {
            order: i.order.clone(),
            lower,
            upper,
        }),
    })
}

/// Image of a convex `J ⊆ Z^2` (under `PullbackAlpha`) in `Z` under
/// `(k,l) -> l`, as a convex set for `C_alpha`.
///
/// With `psi(k,l) = k + alpha l`, `J` is `{t : psi(t) in [lo, hi]}` up to
/// closedness, and the image is the set of `l` with `alpha l` in that range
/// modulo 1: everything once the width reaches 1, otherwise an arc.
pub fn project_convex(j: &LinearConvex) -> Result<CyclicInterval> {
    let CoverOrder::PullbackAlpha(chi) = &j.order else {
        return Err(Error::InvalidOrder(format!(
            "projection needs an alpha order, got {}",
            j.order
        )));
    };
    let alpha = chi.alpha();
    let spec = CyclicOrderSpec::Rot(alpha.clone());
    let psi = |b: &Bound| -> Result<QuadSurd> {
        alpha.mul_int(b.num.l).add_int(b.num.k).scale(1, b.den)
    };
    let (Some(lo), Some(hi)) = (&j.lower, &j.upper) else {
        return Ok(CyclicInterval::full(spec));
    };
    let (lo_v, hi_v) = (psi(lo)?, psi(hi)?);
    let width = hi_v.checked_sub(&lo_v)?;
    let kind = match surd_cmp(&width, &QuadSurd::one()) {
        Ordering::Greater => ArcKind::Full,
        Ordering::Equal if lo.inclusive || hi.inclusive => ArcKind::Full,
        _ => match width.signum() {
            Ordering::Less => ArcKind::Empty,
            Ordering::Equal if lo.inclusive && hi.inclusive => ArcKind::Point {
                at: ArcEnd::Circle(FracPart::reduce(&lo_v)),
            },
            Ordering::Equal => ArcKind::Empty,
            Ordering::Greater => ArcKind::Arc {
                start: ArcEnd::Circle(FracPart::reduce(&lo_v)),
                start_closed: lo.inclusive,
                end: ArcEnd::Circle(FracPart::reduce(&hi_v)),
                end_closed: hi.inclusive,
            },
        },
    };
    CyclicInterval::new(spec, kind)
}
