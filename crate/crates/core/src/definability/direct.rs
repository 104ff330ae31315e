//! The same predicates evaluated directly with surd arithmetic.

use std::cmp::Ordering;

use crate::cyclic::{eval_cyclic, CyclicOrderSpec};
use crate::exactnum::{frac, surd_cmp, QuadSurd};
use crate::{Error, Result};

fn irrational(alpha: &QuadSurd) -> Result<()> {
    if alpha.is_rational() {
        return Err(Error::RationalAlpha(alpha.to_string()));
    }
    Ok(())
}

fn frac_value(alpha: &QuadSurd, l: i64) -> QuadSurd {
    frac(alpha, l).into_inner()
}

/// `floor(n * frac(alpha*l))`.
pub fn winding_count(alpha: &QuadSurd, l: i64, n: u64) -> Result<u64> {
    irrational(alpha)?;
    let scaled = frac_value(alpha, l).mul_int(n);
    Ok(u64::try_from(scaled.floor()).expect("floor of n*frac lies in 0..n"))
}

/// `frac(alpha*l)` in `[r/n, (r+1)/n)`.
pub fn in_interval_rn(alpha: &QuadSurd, l: i64, r: u64, n: u64) -> Result<bool> {
    irrational(alpha)?;
    let f = frac_value(alpha, l);
    let lo = QuadSurd::ratio(r, n)?;
    let hi = QuadSurd::ratio(r + 1, n)?;
    Ok(surd_cmp(&lo, &f) != Ordering::Greater && surd_cmp(&f, &hi) == Ordering::Less)
}

/// `frac(alpha*l)` in `[0, r*alpha/n)`.
pub fn in_zero_interval(alpha: &QuadSurd, l: i64, r: u64, n: u64) -> Result<bool> {
    irrational(alpha)?;
    let end = alpha.scale(r, n)?;
    Ok(surd_cmp(&frac_value(alpha, l), &end) == Ordering::Less)
}

/// `frac(alpha*l) < frac(k*alpha + r*alpha/n)`.
pub fn x_set_member(alpha: &QuadSurd, k: i64, r: u64, n: u64, l: i64) -> Result<bool> {
    irrational(alpha)?;
    let end = alpha.mul_int(k).checked_add(&alpha.scale(r, n)?)?.frac();
    Ok(surd_cmp(&frac_value(alpha, l), &end) == Ordering::Less)
}

/// `C_{alpha + m/n}(j,k,l)`.
pub fn eval_shifted(alpha: &QuadSurd, m: i64, n: u64, j: i64, k: i64, l: i64) -> Result<bool> {
    let beta = alpha.add_ratio(m, n)?;
    eval_cyclic(&CyclicOrderSpec::Rot(beta), j, k, l)
}

/// `C_{m*alpha/n}(j,k,l)`.
pub fn eval_scaled(alpha: &QuadSurd, m: i64, n: u64, j: i64, k: i64, l: i64) -> Result<bool> {
    let beta = alpha.scale(m, n)?;
    eval_cyclic(&CyclicOrderSpec::Rot(beta), j, k, l)
}
