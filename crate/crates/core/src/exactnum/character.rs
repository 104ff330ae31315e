use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::ToPrimitive;

use super::{floor_mul, sign_lin, surd_cmp, FracPart, QuadSurd};

/// The character `l -> alpha*l + Z` for a fixed `alpha`.
///
/// Keeps a copy of the surd coefficients as `i128` when they are small so the
/// hot comparisons run on machine integers. Every `i128` step is checked; on
/// overflow the computation is redone over `BigInt`. Both paths are exact.
#[derive(Clone, Debug)]
pub struct Character {
    alpha: QuadSurd,
    small: Option<Small>,
}

#[derive(Clone, Copy, Debug)]
struct Small {
    p: i128,
    q: i128,
    r: i128,
    d: i128,
}

impl Character {
    pub fn new(alpha: QuadSurd) -> Self {
        let small = (|| {
            Some(Small {
                p: alpha.p.to_i64()? as i128,
                q: alpha.q.to_i64()? as i128,
                r: alpha.r.to_i64()? as i128,
                d: alpha.d.to_i64()? as i128,
            })
        })();
        Self { alpha, small }
    }

    pub fn alpha(&self) -> &QuadSurd {
        &self.alpha
    }

    /// `floor(alpha * l)`.
    pub fn floor_mul(&self, l: i64) -> BigInt {
        match self.small.and_then(|s| s.floor_mul(l as i128)) {
            Some(f) => BigInt::from(f),
            None => floor_mul(&self.alpha, l),
        }
    }

    /// Representative of `alpha * l + Z` in `[0, 1)`.
    pub fn frac(&self, l: i64) -> FracPart {
        let f = self.floor_mul(l);
        FracPart(self.alpha.mul_int(l).add_int(-f))
    }

    /// Compares `frac(alpha*a)` with `frac(alpha*b)`.
    pub fn cmp_frac(&self, a: i64, b: i64) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        if let Some(ord) = self.small.and_then(|s| s.cmp_frac(a as i128, b as i128)) {
            return ord;
        }
        let (fa, fb) = (floor_mul(&self.alpha, a), floor_mul(&self.alpha, b));
        let diff = BigInt::from(a) - BigInt::from(b);
        let rational = &self.alpha.p * &diff - &self.alpha.r * (fa - fb);
        let radical = &self.alpha.q * &diff;
        sign_lin(&rational, &radical, &self.alpha.d)
    }

    /// Sign of `c + alpha*l`.
    pub fn sign_affine(&self, c: i64, l: i64) -> Ordering {
        if let Some(ord) = self.small.and_then(|s| s.sign_affine(c as i128, l as i128)) {
            return ord;
        }
        let (c, l) = (BigInt::from(c), BigInt::from(l));
        let rational = &c * &self.alpha.r + &self.alpha.p * &l;
        sign_lin(&rational, &(&self.alpha.q * l), &self.alpha.d)
    }

    /// Compares `frac(alpha*l)` with an arbitrary surd `x`.
    pub fn cmp_frac_to(&self, l: i64, x: &QuadSurd) -> Ordering {
        surd_cmp(self.frac(l).value(), x)
    }
}

impl Small {
    fn floor_mul(&self, l: i128) -> Option<i128> {
        let n = self.p.checked_mul(l)?;
        let m = self.q.checked_mul(l)?;
        if m == 0 || self.d == 0 {
            return Some(n.div_euclid(self.r));
        }
        let square = m.checked_mul(m)?.checked_mul(self.d)?;
        let root = (square as u128).sqrt() as i128;
        let lower = if m > 0 {
            n.checked_add(root)?
        } else {
            n.checked_sub(root)?.checked_sub(1)?
        };
        Some(lower.div_euclid(self.r))
    }

    fn cmp_frac(&self, a: i128, b: i128) -> Option<Ordering> {
        let fa = self.floor_mul(a)?;
        let fb = self.floor_mul(b)?;
        let diff = a - b;
        let rational = self
            .p
            .checked_mul(diff)?
            .checked_sub(self.r.checked_mul(fa.checked_sub(fb)?)?)?;
        let radical = self.q.checked_mul(diff)?;
        sign_lin_small(rational, radical, self.d)
    }

    fn sign_affine(&self, c: i128, l: i128) -> Option<Ordering> {
        let rational = c
            .checked_mul(self.r)?
            .checked_add(self.p.checked_mul(l)?)?;
        sign_lin_small(rational, self.q.checked_mul(l)?, self.d)
    }
}

fn sign_lin_small(a: i128, b: i128, d: i128) -> Option<Ordering> {
    let sa = a.cmp(&0);
    let sb = if d == 0 { Ordering::Equal } else { b.cmp(&0) };
    if sb == Ordering::Equal {
        return Some(sa);
    }
    if sa == Ordering::Equal || sa == sb {
        return Some(sb);
    }
    let lhs = a.checked_mul(a)?;
    let rhs = b.checked_mul(b)?.checked_mul(d)?;
    Some(match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(text: &str) -> Character {
        Character::new(text.parse().unwrap())
    }

    #[test]
    fn small_and_big_paths_agree() {
        let c = chi("(1+sqrt(5))/2");
        for l in [-1_000_000_007i64, -3, 0, 1, 17, 99_991, i64::MAX / 3] {
            assert_eq!(c.floor_mul(l), floor_mul(c.alpha(), l), "l = {l}");
        }
        // huge arguments overflow the i128 path and fall back
        let big = i64::MAX - 5;
        assert_eq!(c.floor_mul(big), floor_mul(c.alpha(), big));
        assert_eq!(
            c.cmp_frac(big, 1),
            surd_cmp(c.frac(big).value(), c.frac(1).value())
        );
    }

    #[test]
    fn frac_comparison_examples() {
        let c = chi("sqrt(2)");
        // 0.414 < 0.828, 0.243 < 0.414
        assert_eq!(c.cmp_frac(1, 2), Ordering::Less);
        assert_eq!(c.cmp_frac(3, 1), Ordering::Less);
        assert_eq!(c.cmp_frac(0, 5), Ordering::Less);
        assert_eq!(c.cmp_frac(7, 7), Ordering::Equal);
    }

    #[test]
    fn affine_sign() {
        let c = chi("sqrt(2)");
        assert_eq!(c.sign_affine(3, -2), Ordering::Greater);
        assert_eq!(c.sign_affine(-2, 1), Ordering::Less);
        assert_eq!(c.sign_affine(0, 0), Ordering::Equal);
    }
}
