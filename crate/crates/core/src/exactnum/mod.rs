//! Exact arithmetic over quadratic surds `(p + q*sqrt(D)) / r`.
//!
//! Every comparison is decided with integer arithmetic: denominators are
//! cleared, the radical is isolated and both sides are squared with explicit
//! sign tracking. Values with different radicands can still be compared
//! (two squarings suffice); they cannot be added together.

mod character;
mod parse;

pub use character::Character;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Trial division bound used when pulling square factors out of a radicand.
const SQUARE_FACTOR_LIMIT: u64 = 1_000_000;

/// The real number `(p + q*sqrt(d)) / r` in canonical form.
///
/// Canonical means `r >= 1`, `gcd(p, q, r) = 1`, `q = 0` iff `d = 0`, and `d`
/// is not a perfect square. Square factors below [`SQUARE_FACTOR_LIMIT`] are
/// moved out of the radicand, so `sqrt(8)` and `2*sqrt(2)` are structurally
/// equal. Structural equality is never relied on for order decisions; use
/// [`surd_cmp`] for that.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: BigInt,
}

impl QuadSurd {
    /// Builds `(p + q*sqrt(d)) / r` and canonicalizes it.
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        d: impl Into<BigInt>,
        r: impl Into<BigInt>,
    ) -> Result<Self> {
        let (p, q, d, r) = (p.into(), q.into(), d.into(), r.into());
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if d.is_negative() {
            return Err(Error::NegativeRadicand(d.to_string()));
        }
        Ok(Self::canonical(p, q, d, r))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self {
            p: n.into(),
            q: BigInt::zero(),
            r: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The rational `num / den`.
    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        Self::new(num, 0, 0, den)
    }

    /// `sqrt(d)` for a nonnegative integer `d`.
    pub fn sqrt(d: impl Into<BigInt>) -> Result<Self> {
        Self::new(0, 1, d, 1)
    }

    fn canonical(mut p: BigInt, mut q: BigInt, mut d: BigInt, mut r: BigInt) -> Self {
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        if q.is_zero() || d.is_zero() {
            q = BigInt::zero();
            d = BigInt::zero();
        } else {
            let (outside, core) = split_square(&d);
            q *= outside;
            d = core;
            if d.is_one() {
                p += &q;
                q = BigInt::zero();
                d = BigInt::zero();
            }
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() && !g.is_zero() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        Self { p, q, r, d }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    /// The radicand `D` (zero for rationals).
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_irrational(&self) -> bool {
        !self.is_rational()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.r.is_one()
    }

    /// Radicand shared by `self` and `other` when they can be combined linearly.
    fn common_radicand(&self, other: &Self) -> Result<BigInt> {
        match (self.d.is_zero(), other.d.is_zero()) {
            (true, _) => Ok(other.d.clone()),
            (_, true) => Ok(self.d.clone()),
            _ if self.d == other.d => Ok(self.d.clone()),
            _ => Err(Error::MixedRadicals(
                self.d.to_string(),
                other.d.to_string(),
            )),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        Ok(Self::canonical(
            &self.p * &other.r + &other.p * &self.r,
            &self.q * &other.r + &other.q * &self.r,
            d,
            &self.r * &other.r,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        Ok(Self::canonical(
            &self.p * &other.p + &self.q * &other.q * &d,
            &self.p * &other.q + &self.q * &other.p,
            d,
            &self.r * &other.r,
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.common_radicand(other)?;
        // multiply through by the conjugate of the divisor
        let conj = Self {
            p: &other.p * &other.r,
            q: -&other.q * &other.r,
            r: BigInt::one(),
            d: other.d.clone(),
        };
        let norm = &other.p * &other.p - &other.q * &other.q * &other.d;
        let top = self.checked_mul(&conj)?;
        Ok(Self::canonical(top.p, top.q, d, top.r * norm))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Self {
        Self {
            p: -&self.p,
            q: -&self.q,
            r: self.r.clone(),
            d: self.d.clone(),
        }
    }

    pub fn add_int(&self, n: impl Into<BigInt>) -> Self {
        let n = n.into();
        Self::canonical(&self.p + n * &self.r, self.q.clone(), self.d.clone(), self.r.clone())
    }

    pub fn mul_int(&self, n: impl Into<BigInt>) -> Self {
        let n = n.into();
        Self::canonical(&self.p * &n, &self.q * &n, self.d.clone(), self.r.clone())
    }

    /// `self * num / den`.
    pub fn scale(&self, num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(
            &self.p * &num,
            &self.q * &num,
            self.d.clone(),
            &self.r * den,
        ))
    }

    /// `self + num / den`.
    pub fn add_ratio(&self, num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        self.checked_add(&Self::ratio(num, den)?)
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        floor_parts(&self.p, &self.q, &self.d, &self.r)
    }

    /// `self - floor(self)`, in `[0, 1)`.
    pub fn frac(&self) -> Self {
        let f = self.floor();
        Self::canonical(&self.p - f * &self.r, self.q.clone(), self.d.clone(), self.r.clone())
    }

    /// Sign as an ordering against zero.
    pub fn signum(&self) -> Ordering {
        sign_lin(&self.p, &self.q, &self.d)
    }

    /// Decimal rendering truncated toward zero. Display only.
    pub fn to_decimal(&self, digits: u32) -> String {
        let negative = self.signum() == Ordering::Less;
        let magnitude = if negative { self.neg() } else { self.clone() };
        let scaled = magnitude.mul_int(BigInt::from(10u32).pow(digits)).floor();
        let text = scaled.to_string();
        let digits = digits as usize;
        let padded = if text.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - text.len()), text)
        } else {
            text
        };
        let (int_part, frac_part) = padded.split_at(padded.len() - digits);
        let sign = if negative { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    /// Approximate value. Display only; never used for decisions.
    pub fn to_f64(&self) -> f64 {
        self.to_decimal(17).parse().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            if self.r.is_one() {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.r)
            }
        } else {
            let sign = if self.q.is_negative() { '-' } else { '+' };
            write!(
                f,
                "({}{}{}*sqrt({}))/{}",
                self.p,
                sign,
                self.q.abs(),
                self.d,
                self.r
            )
        }
    }
}

impl FromStr for QuadSurd {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse::parse_surd(s)
    }
}

impl Serialize for QuadSurd {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadSurd {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        surd_cmp(self, other)
    }
}

/// A surd known to lie in `[0, 1)`: a point of the circle `R/Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FracPart(QuadSurd);

impl FracPart {
    pub fn new(value: QuadSurd) -> Result<Self> {
        if value.signum() == Ordering::Less || surd_cmp(&value, &QuadSurd::one()) != Ordering::Less
        {
            return Err(Error::NotFractional(value.to_string()));
        }
        Ok(Self(value))
    }

    pub fn zero() -> Self {
        Self(QuadSurd::zero())
    }

    /// Reduces any surd modulo 1.
    pub fn reduce(value: &QuadSurd) -> Self {
        Self(value.frac())
    }

    pub fn value(&self) -> &QuadSurd {
        &self.0
    }

    pub fn into_inner(self) -> QuadSurd {
        self.0
    }
}

impl fmt::Display for FracPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Exact sign of `a - b`.
pub fn surd_cmp(a: &QuadSurd, b: &QuadSurd) -> Ordering {
    let rational = &a.p * &b.r - &b.p * &a.r;
    if a.d.is_zero() || b.d.is_zero() || a.d == b.d {
        let d = if a.d.is_zero() { &b.d } else { &a.d };
        let radical = &a.q * &b.r - &b.q * &a.r;
        return sign_lin(&rational, &radical, d);
    }
    // rational + y*sqrt(da) + z*sqrt(db)
    let y = &a.q * &b.r;
    let z = -&b.q * &a.r;
    let ya = &y * &y * &a.d;
    let zb = &z * &z * &b.d;
    let s_sign = match (y.sign_ord(), z.sign_ord()) {
        (sy, sz) if sy == sz => sy,
        (sy, sz) => match ya.cmp(&zb) {
            Ordering::Greater => sy,
            Ordering::Less => sz,
            Ordering::Equal => Ordering::Equal,
        },
    };
    let x_sign = rational.sign_ord();
    if s_sign == Ordering::Equal {
        return x_sign;
    }
    if x_sign == Ordering::Equal || x_sign == s_sign {
        return s_sign;
    }
    // opposite signs: compare s^2 = ya + zb + 2yz*sqrt(da*db) against x^2
    let excess = sign_lin(
        &(ya + zb - &rational * &rational),
        &(BigInt::from(2) * &y * &z),
        &(&a.d * &b.d),
    );
    match excess {
        Ordering::Greater => s_sign,
        Ordering::Less => x_sign,
        Ordering::Equal => Ordering::Equal,
    }
}

/// `floor(alpha * l)`.
pub fn floor_mul(alpha: &QuadSurd, l: impl Into<BigInt>) -> BigInt {
    let l = l.into();
    floor_parts(&(&alpha.p * &l), &(&alpha.q * &l), &alpha.d, &alpha.r)
}

/// `alpha * l - floor(alpha * l)`.
pub fn frac(alpha: &QuadSurd, l: impl Into<BigInt>) -> FracPart {
    FracPart(alpha.mul_int(l).frac())
}

trait SignOrd {
    fn sign_ord(&self) -> Ordering;
}

impl SignOrd for BigInt {
    fn sign_ord(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

/// Sign of `a + b*sqrt(d)` for `d >= 0`.
pub(crate) fn sign_lin(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.sign_ord();
    let sb = if d.is_zero() { Ordering::Equal } else { b.sign_ord() };
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    match (a * a).cmp(&(b * b * d)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// `floor((p + q*sqrt(d)) / r)` for `r > 0` and `d` zero or not a square.
fn floor_parts(p: &BigInt, q: &BigInt, d: &BigInt, r: &BigInt) -> BigInt {
    if q.is_zero() || d.is_zero() {
        return p.div_floor(r);
    }
    let root = (q * q * d).sqrt();
    // q*sqrt(d) lies strictly between consecutive integers
    let lower = if q.is_positive() {
        p + root
    } else {
        p - root - 1
    };
    lower.div_floor(r)
}

/// Splits `d = outside^2 * core`, pulling out square factors found by trial
/// division and a final perfect-square check.
fn split_square(d: &BigInt) -> (BigInt, BigInt) {
    if let Some(small) = d.to_u128() {
        let (outside, core) = split_square_u128(small);
        return (BigInt::from(outside), BigInt::from(core));
    }
    let mut core = d.clone();
    let mut outside = BigInt::one();
    let mut f = 2u64;
    while f <= SQUARE_FACTOR_LIMIT {
        let ff = BigInt::from(f) * f;
        if ff > core {
            break;
        }
        while (&core % &ff).is_zero() {
            core /= &ff;
            outside *= f;
        }
        f += if f == 2 { 1 } else { 2 };
    }
    let root = core.sqrt();
    if &root * &root == core {
        outside *= root;
        core = BigInt::one();
    }
    (outside, core)
}

fn split_square_u128(d: u128) -> (u128, u128) {
    let mut core = d;
    let mut outside = 1u128;
    let mut f = 2u128;
    while f <= SQUARE_FACTOR_LIMIT as u128 && f * f <= core {
        while core % (f * f) == 0 {
            core /= f * f;
            outside *= f;
        }
        f += if f == 2 { 1 } else { 2 };
    }
    let root = core.sqrt();
    if root * root == core {
        outside *= root;
        core = 1;
    }
    (outside, core)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> QuadSurd {
        text.parse().unwrap()
    }

    #[test]
    fn sqrt_two_below_three_halves() {
        let a = QuadSurd::new(0, 1, 2, 1).unwrap();
        let b = QuadSurd::new(3, 0, 0, 2).unwrap();
        assert_eq!(surd_cmp(&a, &b), Ordering::Less);
        assert_eq!(surd_cmp(&b, &a), Ordering::Greater);
    }

    #[test]
    fn canonical_forms_compare_equal() {
        let one = QuadSurd::new(1, 0, 0, 1).unwrap();
        assert_eq!(surd_cmp(&one, &one), Ordering::Equal);
        let a = QuadSurd::new(0, 2, 2, 2).unwrap();
        let b = QuadSurd::new(0, 1, 2, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(surd_cmp(&a, &b), Ordering::Equal);
    }

    #[test]
    fn canonicalization_strips_squares() {
        assert_eq!(QuadSurd::sqrt(8).unwrap(), QuadSurd::new(0, 2, 2, 1).unwrap());
        assert_eq!(QuadSurd::sqrt(9).unwrap(), QuadSurd::from_int(3));
        assert_eq!(QuadSurd::new(2, 4, 3, -6).unwrap(), QuadSurd::new(-1, -2, 3, 3).unwrap());
        assert!(QuadSurd::sqrt(0).unwrap().is_zero());
        assert!(matches!(QuadSurd::new(1, 1, 2, 0), Err(Error::DivisionByZero)));
        assert!(matches!(QuadSurd::sqrt(-2), Err(Error::NegativeRadicand(_))));
    }

    #[test]
    fn frac_examples() {
        let root2 = QuadSurd::sqrt(2).unwrap();
        assert_eq!(frac(&root2, 3).value(), &QuadSurd::new(-4, 3, 2, 1).unwrap());
        assert!(frac(&root2, 0).value().is_zero());
        assert_eq!(frac(&root2, -1).value(), &QuadSurd::new(2, -1, 2, 1).unwrap());
    }

    #[test]
    fn floor_mul_examples() {
        let root2 = QuadSurd::sqrt(2).unwrap();
        assert_eq!(floor_mul(&root2, 5), BigInt::from(7));
        assert_eq!(floor_mul(&root2, 0), BigInt::from(0));
        assert_eq!(floor_mul(&root2, -5), BigInt::from(-8));
    }

    #[test]
    fn mixed_radical_comparisons() {
        // sqrt(2) + sqrt(3) ~ 3.146 vs pi-ish rational 22/7 ~ 3.1429
        let a = s("sqrt(2)");
        let b = s("22/7 - sqrt(3)");
        assert_eq!(surd_cmp(&a, &b), Ordering::Greater);
        // 1 + sqrt(2) ~ 2.4142 vs sqrt(6) ~ 2.4495
        assert_eq!(surd_cmp(&s("1+sqrt(2)"), &s("sqrt(6)")), Ordering::Less);
        // sqrt(3) - 1 ~ 0.7321 vs sqrt(2)/2 ~ 0.7071
        assert_eq!(surd_cmp(&s("sqrt(3)-1"), &s("sqrt(2)/2")), Ordering::Greater);
        // 1393/985 ~ 1.41421320 vs sqrt(2) ~ 1.41421356 (convergent just below)
        assert_eq!(surd_cmp(&s("1393/985"), &s("sqrt(2)")), Ordering::Less);
        // close call across radicals: 5*sqrt(2) ~ 7.0711 vs 4*sqrt(3) ~ 6.9282
        assert_eq!(surd_cmp(&s("5*sqrt(2)"), &s("4*sqrt(3)")), Ordering::Greater);
    }

    #[test]
    fn arithmetic_round_trip() {
        let phi = s("(1+sqrt(5))/2");
        let sq = phi.checked_mul(&phi).unwrap();
        assert_eq!(sq, phi.add_int(1));
        let inv = QuadSurd::one().checked_div(&phi).unwrap();
        assert_eq!(inv, phi.add_int(-1));
        assert!(matches!(
            s("sqrt(2)").checked_add(&s("sqrt(3)")),
            Err(Error::MixedRadicals(_, _))
        ));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(s("sqrt(2)").to_decimal(12), "1.414213562373");
        assert_eq!(s("-sqrt(2)").to_decimal(3), "-1.414");
        assert_eq!(s("1/8").to_decimal(4), "0.1250");
        assert_eq!(s("7").to_decimal(0), "7");
    }

    #[test]
    fn display_parses_back() {
        for text in ["sqrt(2)", "(1+sqrt(5))/2", "3/4", "-7", "2-(1+sqrt(5))/2", "(3*sqrt(2))/2"] {
            let value = s(text);
            assert_eq!(value.to_string().parse::<QuadSurd>().unwrap(), value, "{text}");
        }
        assert_eq!(s("2-(1+sqrt(5))/2").to_string(), "(3-1*sqrt(5))/2");
    }

    #[test]
    fn frac_part_bounds() {
        assert!(FracPart::new(s("1")).is_err());
        assert!(FracPart::new(s("-1/3")).is_err());
        assert!(FracPart::new(s("sqrt(2)-1")).is_ok());
        assert_eq!(FracPart::reduce(&s("-sqrt(2)")).value(), &s("2-sqrt(2)"));
    }
}
