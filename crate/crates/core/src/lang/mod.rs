//! A first-order language over `(Z; +, C, ≡_n, <)` with bounded quantifiers.
//!
//! Concrete syntax:
//!
//! ```text
//! C(t, t, t)   t = t   t == t mod n   t ≡ t (mod n)   t < t
//! !f   f & f   f | f   f -> f   true   false
//! exists x in [a, b]. f      forall x in [a, b]. f
//! ```
//!
//! Terms are integer-linear: literals, variables, `+`, `-`, `k*t`.
//! `->` associates to the right; `&` binds tighter than `|`, which binds
//! tighter than `->`. A quantifier body extends as far right as possible.

mod eval;
mod parse;
#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::Serialize;

use crate::{Error, Result};

pub use eval::{
    equal_on_window, eval, evaluate, extract_set, Comparison, Env, EvalOptions, Evaluation, ExtractedSet,
};
pub use parse::{parse, parse_closed};

pub(crate) const KEYWORDS: [&str; 7] = ["exists", "forall", "in", "mod", "true", "false", "C"];

/// `constant + sum coeff * var`, with zero coefficients dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Term {
    constant: i64,
    coeffs: BTreeMap<String, i64>,
}

impl Term {
    pub fn constant(c: i64) -> Self {
        Self {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn var(name: &str) -> Self {
        Self {
            constant: 0,
            coeffs: BTreeMap::from([(name.to_string(), 1)]),
        }
    }

    pub fn constant_part(&self) -> i64 {
        self.constant
    }

    pub fn coefficients(&self) -> &BTreeMap<String, i64> {
        &self.coeffs
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let mut out = self.clone();
        out.constant = out.constant.checked_add(other.constant)?;
        for (v, c) in &other.coeffs {
            let e = out.coeffs.entry(v.clone()).or_insert(0);
            *e = e.checked_add(*c)?;
            if *e == 0 {
                out.coeffs.remove(v);
            }
        }
        Some(out)
    }

    pub fn checked_scale(&self, k: i64) -> Option<Self> {
        if k == 0 {
            return Some(Self::default());
        }
        let mut coeffs = BTreeMap::new();
        for (v, c) in &self.coeffs {
            coeffs.insert(v.clone(), c.checked_mul(k)?);
        }
        Some(Self {
            constant: self.constant.checked_mul(k)?,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.checked_add(&other.checked_scale(-1)?)
    }

    fn vars_into(&self, out: &mut BTreeSet<String>) {
        out.extend(self.coeffs.keys().cloned());
    }
}

impl Add for Term {
    type Output = Term;
    fn add(self, rhs: Term) -> Term {
        self.checked_add(&rhs).expect("term coefficient overflow")
    }
}

impl Sub for Term {
    type Output = Term;
    fn sub(self, rhs: Term) -> Term {
        self.checked_sub(&rhs).expect("term coefficient overflow")
    }
}

impl Neg for Term {
    type Output = Term;
    fn neg(self) -> Term {
        self.checked_scale(-1).expect("term coefficient overflow")
    }
}

impl Mul<Term> for i64 {
    type Output = Term;
    fn mul(self, rhs: Term) -> Term {
        rhs.checked_scale(self).expect("term coefficient overflow")
    }
}

impl From<i64> for Term {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl From<&str> for Term {
    fn from(v: &str) -> Self {
        Self::var(v)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut piece = |f: &mut fmt::Formatter<'_>, c: i64, body: Option<&str>| -> fmt::Result {
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            first = false;
            match body {
                Some(v) if mag == 1 => write!(f, "{v}"),
                Some(v) => write!(f, "{mag}*{v}"),
                None => write!(f, "{mag}"),
            }
        };
        for (v, &c) in &self.coeffs {
            piece(f, c, Some(v))?;
        }
        if self.constant != 0 || self.coeffs.is_empty() {
            piece(f, self.constant, None)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Exists,
    Forall,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Bool(bool),
    Cyc(Term, Term, Term),
    Eq(Term, Term),
    /// `lhs ≡ rhs (mod modulus)`
    Cong {
        lhs: Term,
        rhs: Term,
        modulus: u64,
    },
    /// The linear order associated with the cyclic order.
    Lt(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Quant {
        kind: Quantifier,
        var: String,
        lo: i64,
        hi: i64,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn cyc(a: impl Into<Term>, b: impl Into<Term>, c: impl Into<Term>) -> Self {
        Self::Cyc(a.into(), b.into(), c.into())
    }

    pub fn eq(a: impl Into<Term>, b: impl Into<Term>) -> Self {
        Self::Eq(a.into(), b.into())
    }

    pub fn cong(a: impl Into<Term>, b: impl Into<Term>, modulus: u64) -> Self {
        Self::Cong {
            lhs: a.into(),
            rhs: b.into(),
            modulus,
        }
    }

    pub fn lt(a: impl Into<Term>, b: impl Into<Term>) -> Self {
        Self::Lt(a.into(), b.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Self::Not(Box::new(self))
    }

    pub fn and(self, other: Self) -> Self {
        Self::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Self) -> Self {
        Self::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Self) -> Self {
        Self::Implies(Box::new(self), Box::new(other))
    }

    pub fn exists(var: &str, lo: i64, hi: i64, body: Self) -> Self {
        Self::Quant {
            kind: Quantifier::Exists,
            var: var.into(),
            lo,
            hi,
            body: Box::new(body),
        }
    }

    pub fn forall(var: &str, lo: i64, hi: i64, body: Self) -> Self {
        Self::Quant {
            kind: Quantifier::Forall,
            var: var.into(),
            lo,
            hi,
            body: Box::new(body),
        }
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn all(items: impl IntoIterator<Item = Self>) -> Self {
        items
            .into_iter()
            .reduce(Self::and)
            .unwrap_or(Self::Bool(true))
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn any(items: impl IntoIterator<Item = Self>) -> Self {
        items
            .into_iter()
            .reduce(Self::or)
            .unwrap_or(Self::Bool(false))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_into(&mut out, &mut Vec::new());
        out
    }

    fn free_into(&self, out: &mut BTreeSet<String>, bound: &mut Vec<String>) {
        let terms = |ts: &[&Term], out: &mut BTreeSet<String>| {
            let mut vs = BTreeSet::new();
            for t in ts {
                t.vars_into(&mut vs);
            }
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Self::Bool(_) => {}
            Self::Cyc(a, b, c) => terms(&[a, b, c], out),
            Self::Eq(a, b) | Self::Lt(a, b) | Self::Cong { lhs: a, rhs: b, .. } => terms(&[a, b], out),
            Self::Not(f) => f.free_into(out, bound),
            Self::And(a, b) | Self::Or(a, b) | Self::Implies(a, b) => {
                a.free_into(out, bound);
                b.free_into(out, bound);
            }
            Self::Quant { var, body, .. } => {
                bound.push(var.clone());
                body.free_into(out, bound);
                bound.pop();
            }
        }
    }

    /// Number of quantifier bindings made by a full expansion: a quantifier
    /// over `w` values costs `w * (1 + cost(body))`.
    pub fn expansion_cost(&self) -> u128 {
        match self {
            Self::Not(f) => f.expansion_cost(),
            Self::And(a, b) | Self::Or(a, b) | Self::Implies(a, b) => {
                a.expansion_cost().saturating_add(b.expansion_cost())
            }
            Self::Quant { lo, hi, body, .. } => {
                let width = if hi < lo { 0 } else { (*hi as i128 - *lo as i128 + 1) as u128 };
                width.saturating_mul(1 + body.expansion_cost())
            }
            _ => 0,
        }
    }
}

/// Fully parenthesized; `parse` reads it back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bool(b) => write!(f, "{b}"),
            Self::Cyc(a, b, c) => write!(f, "C({a}, {b}, {c})"),
            Self::Eq(a, b) => write!(f, "{a} = {b}"),
            Self::Cong { lhs, rhs, modulus } => write!(f, "{lhs} == {rhs} mod {modulus}"),
            Self::Lt(a, b) => write!(f, "{a} < {b}"),
            Self::Not(g) => {
                write!(f, "!")?;
                match **g {
                    Self::Eq(..) | Self::Cong { .. } | Self::Lt(..) => write!(f, "({g})"),
                    _ => write!(f, "{g}"),
                }
            }
            Self::And(a, b) => write!(f, "({a} & {b})"),
            Self::Or(a, b) => write!(f, "({a} | {b})"),
            Self::Implies(a, b) => write!(f, "({a} -> {b})"),
            Self::Quant {
                kind,
                var,
                lo,
                hi,
                body,
            } => {
                let q = match kind {
                    Quantifier::Exists => "exists",
                    Quantifier::Forall => "forall",
                };
                write!(f, "({q} {var} in [{lo}, {hi}]. {body})")
            }
        }
    }
}

impl FromStr for Formula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Inclusive integer range `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval(format!("window [{lo}, {hi}] is empty")));
        }
        Ok(Self { lo, hi })
    }

    pub fn len(&self) -> u64 {
        (self.hi as i128 - self.lo as i128 + 1) as u64
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.lo, self.hi)
    }
}

impl FromStr for Window {
    type Err = Error;

    /// `lo,hi` or `[lo,hi]`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('[').unwrap_or(t);
        let t = t.strip_suffix(']').unwrap_or(t);
        let bad = || Error::InvalidInterval(format!("expected lo,hi: {s}"));
        let (lo, hi) = t.split_once(',').ok_or_else(bad)?;
        Self::new(
            lo.trim().parse().map_err(|_| bad())?,
            hi.trim().parse().map_err(|_| bad())?,
        )
    }
}
