//! The derived orders written as formulas of `(Z; +, C)` in free variables
//! `j, k, l`, so they can be cross-checked through the formula evaluator.

use num_integer::Integer;

use crate::lang::{Formula, Term};
use crate::{Error, Result};

/// Exactly `w` of `atoms` hold.
fn exactly(atoms: &[Formula], w: usize) -> Formula {
    let n = atoms.len();
    Formula::any((0u32..1 << n).filter(|s| s.count_ones() as usize == w).map(|s| {
        Formula::all(atoms.iter().enumerate().map(|(i, a)| {
            if s >> i & 1 == 1 {
                a.clone()
            } else {
                a.clone().not()
            }
        }))
    }))
}

/// `floor(n frac(alpha x)) = w`, counted as in `winding_count`.
fn winding_is(x: &Term, n: i64, w: i64) -> Formula {
    let atoms: Vec<Formula> = (1..n)
        .map(|i| Formula::cyc(0, (i + 1) * x.clone(), i * x.clone()))
        .collect();
    if w < 0 || w >= n {
        return Formula::Bool(false);
    }
    exactly(&atoms, w as usize)
}

fn distinct(a: &Term, b: &Term, c: &Term) -> Formula {
    Formula::all([
        Formula::eq(a.clone(), b.clone()).not(),
        Formula::eq(b.clone(), c.clone()).not(),
        Formula::eq(a.clone(), c.clone()).not(),
    ])
}

/// `bin(K) < bin(L)`, or equal bins and `tie`.
fn by_bins(n: i64, bin: impl Fn(i64) -> Formula + Copy, bin_l: impl Fn(i64) -> Formula, tie: Formula) -> Formula {
    let below = Formula::any(
        (0..n).flat_map(|b| (b + 1..n).map(move |c| (b, c))).map(|(b, c)| bin(b).and(bin_l(c))),
    );
    let same = Formula::any((0..n).map(|b| bin(b).and(bin_l(b)))).and(tie);
    below.or(same)
}

fn check_n(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidModulus);
    }
    i64::try_from(n).map_err(|_| Error::Overflow("modulus"))
}

/// A formula in `j, k, l` that, read in `(Z; +, C_alpha)`, defines
/// `C_{alpha + m/n}(j, k, l)`.
pub fn shifted_formula(m: i64, n: u64) -> Result<Formula> {
    let n = check_n(n)?;
    let g = m.gcd(&n);
    let (m, n) = (m / g, n / g);
    let (j, k, l) = (Term::var("j"), Term::var("k"), Term::var("l"));
    let big_k = k.clone() - j.clone();
    let big_l = l.clone() - j.clone();
    let bin = |x: &Term, b: i64| {
        Formula::any((0..n).map(|c| {
            let w = (b - m * c).rem_euclid(n);
            Formula::cong(x.clone(), c, n as u64).and(winding_is(x, n, w))
        }))
    };
    let tie = Formula::cyc(0, n * big_k.clone(), n * big_l.clone());
    Ok(distinct(&j, &k, &l).and(by_bins(n, |b| bin(&big_k, b), |b| bin(&big_l, b), tie)))
}

/// A formula in `j, k, l` that, read in `(Z; +, C_alpha)` with `alpha` in
/// `(0, 1)`, defines `C_{m alpha / n}(j, k, l)`. The quotient of `m (k - j)`
/// and `m (l - j)` by `n` is found by a quantifier over `[-bound, bound]`, so
/// the formula is exact while both differences are at most `n * bound` in
/// absolute value.
pub fn scaled_formula(m: i64, n: u64, bound: i64) -> Result<Formula> {
    let n = check_n(n)?;
    if m == 0 {
        return Err(Error::RationalAlpha("0".into()));
    }
    let (j, k, l) = (Term::var("j"), Term::var("k"), Term::var("l"));
    let big_k = m * (k - j.clone());
    let big_l = m * (l - j);
    let q = Term::var("q");
    let bin = |x: &Term, b: i64| {
        Formula::any((0..n).map(|r| {
            let floor_r = |f: i64| {
                let atoms: Vec<Formula> = (1..r).map(|i| Formula::cyc(0, i + 1, i)).collect();
                if r == 0 {
                    Formula::Bool(f == 0)
                } else {
                    exactly(&atoms, f as usize)
                }
            };
            let carry = |c: bool| {
                let wraps = Formula::all([
                    Formula::Bool(r != 0),
                    Formula::eq(q.clone(), 0).not(),
                    Formula::cyc(0, x.clone(), n * q.clone()),
                ]);
                if c {
                    wraps
                } else {
                    wraps.not()
                }
            };
            let cases = (0..n).flat_map(|w| (0..r.max(1)).flat_map(move |f| [(w, f, false), (w, f, true)]));
            let inner = Formula::any(
                cases
                    .filter(|&(w, f, c)| (w + f + i64::from(c)).rem_euclid(n) == b)
                    .map(|(w, f, c)| Formula::all([winding_is(&q, n, w), floor_r(f), carry(c)])),
            );
            Formula::exists(
                "q",
                -bound,
                bound,
                Formula::eq(n * q.clone() + Term::constant(r), x.clone()).and(inner),
            )
        }))
    };
    let nonzero = Formula::all([
        Formula::eq(big_k.clone(), 0).not(),
        Formula::eq(big_l.clone(), 0).not(),
        Formula::eq(big_k.clone(), big_l.clone()).not(),
    ]);
    let tie = Formula::all([
        Formula::eq(big_k.clone(), big_l.clone()).not(),
        Formula::eq(big_k.clone(), 0).or(Formula::eq(big_l.clone(), 0).not().and(Formula::cyc(
            0,
            big_k.clone(),
            big_l.clone(),
        ))),
    ]);
    Ok(nonzero.and(by_bins(n, |b| bin(&big_k, b), |b| bin(&big_l, b), tie)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::{eval_cyclic, CyclicOrderSpec};
    use crate::lang::{equal_on_window, eval, Env, EvalOptions, Window};

    fn rot(text: &str) -> CyclicOrderSpec {
        CyclicOrderSpec::Rot(text.parse().unwrap())
    }

    #[test]
    fn shifted_examples() {
        let f = shifted_formula(1, 2).unwrap();
        let env: Env = [("j", 1), ("k", 2), ("l", 3)].map(|(a, b)| (a.to_string(), b)).into();
        assert!(!eval(&f, &env, &rot("sqrt(2)")).unwrap());
        assert_eq!(
            eval(&shifted_formula(1, 1).unwrap(), &env, &rot("sqrt(2)")).unwrap(),
            eval_cyclic(&rot("sqrt(2)"), 1, 2, 3).unwrap()
        );
    }

    #[test]
    fn shifted_matches_direct_on_small_window() {
        let w = Window::new(-8, 8).unwrap();
        let direct = crate::lang::parse("C(j, k, l)").unwrap();
        for (m, n) in [(1, 2), (1, 3), (2, 3), (-1, 2), (3, 4)] {
            let f = shifted_formula(m, n).unwrap();
            let beta = rot(&format!("sqrt(2)+{m}/{n}"));
            let cmp = equal_on_window(&f, &direct, w, &rot("sqrt(2)"), &beta, EvalOptions::guided()).unwrap();
            assert!(cmp.equal, "(m,n) = ({m},{n}): {:?}", cmp.counterexample);
        }
    }

    #[test]
    fn scaled_matches_direct_on_small_window() {
        let w = Window::new(-8, 8).unwrap();
        let direct = crate::lang::parse("C(j, k, l)").unwrap();
        for (m, n) in [(1, 2), (1, 3), (3, 2), (-2, 3), (1, 1)] {
            let f = scaled_formula(m, n, 60).unwrap();
            let beta = rot(&format!("{m}*(sqrt(2)-1)/{n}"));
            let cmp = equal_on_window(&f, &direct, w, &rot("sqrt(2)-1"), &beta, EvalOptions::guided()).unwrap();
            assert!(cmp.equal, "(m,n) = ({m},{n}): {:?}", cmp.counterexample);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(shifted_formula(1, 0), Err(Error::InvalidModulus)));
        assert!(matches!(scaled_formula(0, 2, 5), Err(Error::RationalAlpha(_))));
    }
}
