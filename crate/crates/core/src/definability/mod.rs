//! Predicates definable from `C_alpha` alone.
//!
//! Everything outside [`direct`] talks to the rotation order only through
//! [`TernaryOracle::holds`]. The [`direct`] module computes the same
//! predicates with surd arithmetic so the two can be compared.

pub mod direct;
mod formulas;

pub use formulas::{scaled_formula, shifted_formula};

use std::cmp::Ordering;

use num_integer::Integer;

use crate::cyclic::{CyclicOrder, CyclicOrderSpec, TernaryOracle};
use crate::exactnum::{frac, surd_cmp, QuadSurd};
use crate::{Error, Result};


/// Default window for [`x_sets_disjoint_probe`].
pub const DEFAULT_PROBE_WINDOW: i64 = 1_000;

fn rotation(alpha: &QuadSurd) -> Result<CyclicOrder> {
    CyclicOrderSpec::Rot(alpha.clone()).validate()
}

fn check_modulus(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidModulus);
    }
    i64::try_from(n).map_err(|_| Error::Overflow("modulus"))
}

fn check_residue(r: u64, n: u64, inclusive: bool) -> Result<()> {
    if r > n || (r == n && !inclusive) {
        return Err(Error::InvalidResidue {
            residue: r,
            modulus: n,
        });
    }
    Ok(())
}

fn require_unit_interval(alpha: &QuadSurd) -> Result<()> {
    if alpha.signum() != Ordering::Greater || alpha.floor() != 0.into() {
        return Err(Error::AlphaOutOfRange(alpha.to_string()));
    }
    Ok(())
}

/// Rejects arguments whose products with `factor` leave `i64`.
fn check_magnitude(args: &[i64], factor: i128) -> Result<()> {
    let limit = i128::from(i64::MAX / 4);
    for &a in args {
        if i128::from(a).abs() * factor.max(1) > limit {
            return Err(Error::Overflow("argument too large for derived order"));
        }
    }
    Ok(())
}

/// Number of `i` in `1..n` with `C(0, (i+1)l, il)`: how often the orbit
/// `alpha*i*l` wraps past `0` for `i = 1..n`, which is `floor(n*frac(alpha*l))`.
fn winding<O: TernaryOracle + ?Sized>(oracle: &O, l: i64, n: i64) -> i64 {
    (1..n)
        .filter(|&i| oracle.holds(0, (i + 1) * l, i * l))
        .count() as i64
}

/// Winding number of `alpha*l` over `n` steps, from `C_alpha` queries.
pub fn winding_count(alpha: &QuadSurd, l: i64, n: u64) -> Result<u64> {
    let n = check_modulus(n)?;
    let order = rotation(alpha)?;
    check_magnitude(&[l], i128::from(n))?;
    Ok(winding(&order, l, n) as u64)
}

/// Whether `frac(alpha*l)` lies in `[r/n, (r+1)/n)`, from `C_alpha` queries.
pub fn in_interval_rn(alpha: &QuadSurd, l: i64, r: u64, n: u64) -> Result<bool> {
    check_residue(r, n, false)?;
    Ok(winding_count(alpha, l, n)? == r)
}

/// `floor(n*frac(alpha*l)) < floor(r*alpha)`, or equal with the fractional
/// parts ordered the same way. For `alpha` in `(0,1)` this is
/// `frac(alpha*l) < r*alpha/n`.
fn zero_interval<O: TernaryOracle + ?Sized>(oracle: &O, l: i64, r: i64, n: i64) -> bool {
    if l == 0 {
        return r >= 1;
    }
    if r == 0 {
        return false;
    }
    let w = winding(oracle, l, n);
    let big_w = winding(oracle, 1, r);
    w < big_w || (w == big_w && oracle.holds(0, n * l, r))
}

/// Whether `frac(alpha*l)` lies in `[0, r*alpha/n)`, from `C_alpha` queries.
///
/// `alpha` must lie in `(0,1)`; `r` ranges over `0..=n`.
pub fn in_zero_interval(alpha: &QuadSurd, l: i64, r: u64, n: u64) -> Result<bool> {
    let n_i = check_modulus(n)?;
    check_residue(r, n, true)?;
    let order = rotation(alpha)?;
    require_unit_interval(alpha)?;
    check_magnitude(&[l], i128::from(n_i))?;
    Ok(zero_interval(&order, l, r as i64, n_i))
}

/// `C_{beta + m/n}` built from an oracle for `C_beta`.
///
/// After translating the first argument to `0`, `frac((beta + m/n) K)` sits in
/// bin `(winding(K, n) + m K) mod n` of width `1/n`, and within a shared bin
/// the order is that of `n*beta*K`, i.e. `C_beta(0, nK, nL)`.
#[derive(Clone, Debug)]
pub struct ShiftedOrder<O> {
    base: O,
    m: i64,
    n: i64,
}

impl<O: TernaryOracle> ShiftedOrder<O> {
    /// `m/n` is reduced to lowest terms.
    pub fn new(base: O, m: i64, n: u64) -> Result<Self> {
        let n = check_modulus(n)?;
        let g = m.gcd(&n);
        Ok(Self {
            base,
            m: m / g,
            n: n / g,
        })
    }

    fn bin(&self, x: i64) -> i64 {
        let shift = (self.m as i128 * x as i128).rem_euclid(self.n as i128) as i64;
        (winding(&self.base, x, self.n) + shift).rem_euclid(self.n)
    }
}

impl<O: TernaryOracle> TernaryOracle for ShiftedOrder<O> {
    fn holds(&self, j: i64, k: i64, l: i64) -> bool {
        let (k, l) = (k - j, l - j);
        if k == 0 || l == 0 || k == l {
            return false;
        }
        match self.bin(k).cmp(&self.bin(l)) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => self.base.holds(0, self.n * k, self.n * l),
        }
    }
}

/// `C_{m*beta/n}` built from an oracle for `C_beta`, `beta` in `(0,1)`.
///
/// `C_{m beta/n}(i,j,l) = C_{beta/n}(mi, mj, ml)`. For `gamma = beta/n` and
/// `K = nk + r`, the point `frac(gamma K)` lies in bin
/// `(floor(n frac(beta k)) + floor(r beta) + c) mod n` with carry `c` set when
/// `frac(n beta k) + frac(r beta)` passes `1`; inside a bin the order is that
/// of `frac(beta K)`. Comparing these endpoints is the same as comparing the
/// sets `X_{k,r} = {l : frac(beta l) < frac(gamma K)}` by inclusion.
#[derive(Clone, Debug)]
pub struct ScaledOrder<O> {
    base: O,
    m: i64,
    n: i64,
}

impl<O: TernaryOracle> ScaledOrder<O> {
    pub fn new(base: O, m: i64, n: u64) -> Result<Self> {
        let n = check_modulus(n)?;
        if m == 0 {
            return Err(Error::RationalAlpha("0".into()));
        }
        Ok(Self { base, m, n })
    }

    /// Bin of width `1/n` holding `frac(gamma K)`.
    fn bin(&self, big_k: i64) -> i64 {
        let (k, r) = (big_k.div_euclid(self.n), big_k.rem_euclid(self.n));
        let carry = r != 0 && k != 0 && self.base.holds(0, big_k, self.n * k);
        let floor_r = if r == 0 { 0 } else { winding(&self.base, 1, r) };
        (winding(&self.base, k, self.n) + floor_r + i64::from(carry)).rem_euclid(self.n)
    }

    /// Strict order of `frac(beta a)` and `frac(beta b)`.
    fn frac_lt(&self, a: i64, b: i64) -> bool {
        a != b && (a == 0 || (b != 0 && self.base.holds(0, a, b)))
    }

    fn gamma_holds(&self, k: i64, l: i64) -> bool {
        if k == 0 || l == 0 || k == l {
            return false;
        }
        let (bk, bl) = (self.bin(k), self.bin(l));
        bk < bl || (bk == bl && self.frac_lt(k, l))
    }
}

impl<O: TernaryOracle> TernaryOracle for ScaledOrder<O> {
    fn holds(&self, i: i64, j: i64, l: i64) -> bool {
        let (k, l) = (self.m * (j - i), self.m * (l - i));
        self.gamma_holds(k, l)
    }
}

fn shifted_order(alpha: &QuadSurd, m: i64, n: u64) -> Result<ShiftedOrder<CyclicOrder>> {
    let beta = alpha.add_ratio(m, n)?;
    if beta.is_rational() {
        return Err(Error::RationalAlpha(beta.to_string()));
    }
    ShiftedOrder::new(rotation(alpha)?, m, n)
}

/// `C_{alpha + m/n}(j,k,l)` from `C_alpha` queries.
pub fn eval_shifted(alpha: &QuadSurd, m: i64, n: u64, j: i64, k: i64, l: i64) -> Result<bool> {
    let order = shifted_order(alpha, m, n)?;
    check_magnitude(&[k.saturating_sub(j), l.saturating_sub(j)], i128::from(order.n))?;
    Ok(order.holds(j, k, l))
}

/// `C_{m*alpha/n}` as an oracle over `C_alpha`, for any irrational `alpha`.
///
/// With `alpha = a + f`, `f` in `(0,1)`, we have `C_f = C_alpha` and
/// `m*alpha/n = m*f/n + m*a/n`, so the scaled order of `f` is shifted by
/// `m*a/n` when `a != 0`.
pub enum ScaledAny {
    Unit(ScaledOrder<CyclicOrder>),
    Shifted(ShiftedOrder<ScaledOrder<CyclicOrder>>),
}

impl TernaryOracle for ScaledAny {
    fn holds(&self, j: i64, k: i64, l: i64) -> bool {
        match self {
            Self::Unit(o) => o.holds(j, k, l),
            Self::Shifted(o) => o.holds(j, k, l),
        }
    }
}

pub fn scaled_order(alpha: &QuadSurd, m: i64, n: u64) -> Result<ScaledAny> {
    let base = rotation(alpha)?;
    let scaled = ScaledOrder::new(base, m, n)?;
    let a = alpha.floor();
    if a == 0.into() {
        return Ok(ScaledAny::Unit(scaled));
    }
    let shift = i64::try_from(a)
        .ok()
        .and_then(|a| a.checked_mul(m))
        .ok_or(Error::Overflow("integer part of alpha"))?;
    Ok(ScaledAny::Shifted(ShiftedOrder::new(scaled, shift, n)?))
}

/// `C_{m*alpha/n}(j,k,l)` from `C_alpha` queries.
pub fn eval_scaled(alpha: &QuadSurd, m: i64, n: u64, j: i64, k: i64, l: i64) -> Result<bool> {
    let order = scaled_order(alpha, m, n)?;
    let n = i128::from(check_modulus(n)?);
    check_magnitude(
        &[k.saturating_sub(j), l.saturating_sub(j)],
        i128::from(m).abs() * n * n,
    )?;
    Ok(order.holds(j, k, l))
}

/// Whether `frac(alpha*k) + r*alpha/n` reaches `1`, decided with surds.
pub fn x_set_wraps(alpha: &QuadSurd, k: i64, r: u64, n: u64) -> Result<bool> {
    check_modulus(n)?;
    let end = frac(alpha, k).into_inner().checked_add(&alpha.scale(r, n)?)?;
    Ok(surd_cmp(&end, &QuadSurd::one()) != Ordering::Less)
}

fn x_set_zero<O: TernaryOracle + ?Sized>(oracle: &O, k: i64, l: i64) -> bool {
    k != 0 && (l == 0 || oracle.holds(0, l, k))
}

/// Membership of `l` in `X_{k,r} = {l : frac(alpha l) in [0, k alpha + r alpha/n) + Z}`.
///
/// Built from `X_{k,0}` and `k + X_{0,r}`: their union when the two arcs are
/// disjoint and their intersection when the second wraps past `0`. The wrap
/// is decided by [`x_set_wraps`]; membership itself uses `C_alpha` queries.
pub fn x_set_member(alpha: &QuadSurd, k: i64, r: u64, n: u64, l: i64) -> Result<bool> {
    let n_i = check_modulus(n)?;
    check_residue(r, n, true)?;
    let order = rotation(alpha)?;
    require_unit_interval(alpha)?;
    let shifted = l.checked_sub(k).ok_or(Error::Overflow("l - k"))?;
    check_magnitude(&[l, k, shifted], i128::from(n_i))?;
    if r == 0 {
        return Ok(x_set_zero(&order, k, l));
    }
    let tail = zero_interval(&order, shifted, r as i64, n_i);
    if k == 0 {
        return Ok(tail);
    }
    let head = x_set_zero(&order, k, l);
    Ok(if x_set_wraps(alpha, k, r, n)? {
        head && tail
    } else {
        head || tail
    })
}

/// Searches `[-window, window]` for a common point of `X_{k,0}` and
/// `k + X_{0,r}`; `true` when none turns up.
pub fn x_sets_disjoint_probe(alpha: &QuadSurd, k: i64, r: u64, n: u64, window: i64) -> Result<bool> {
    let n_i = check_modulus(n)?;
    check_residue(r, n, true)?;
    let order = rotation(alpha)?;
    require_unit_interval(alpha)?;
    check_magnitude(&[k.saturating_add(window), k.saturating_sub(window)], i128::from(n_i))?;
    Ok(!(-window..=window)
        .any(|l| x_set_zero(&order, k, l) && zero_interval(&order, l - k, r as i64, n_i)))
}

#[cfg(test)]
mod tests;
