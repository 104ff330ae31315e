//! Additive cyclic orders on `Z`: `C+`, `C-` and the rotation orders `C_alpha`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::exactnum::{Character, QuadSurd};
use crate::{Error, Result};

/// Names a concrete additive cyclic order on `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CyclicOrderSpec {
    /// `C+(j,k,l)` iff `j<k<l` or `l<j<k` or `k<l<j`.
    Plus,
    /// `C-(j,k,l)` iff `C+(-j,-k,-l)`.
    Minus,
    /// Pull-back of the circle order along `l -> alpha*l + Z`.
    Rot(QuadSurd),
}

impl CyclicOrderSpec {
    pub fn rot(alpha: QuadSurd) -> Result<Self> {
        let spec = Self::Rot(alpha);
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the spec and prepares it for evaluation.
    pub fn validate(&self) -> Result<CyclicOrder> {
        CyclicOrder::new(self)
    }
}

impl fmt::Display for CyclicOrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Plus => f.write_str("plus"),
            Self::Minus => f.write_str("minus"),
            Self::Rot(alpha) => write!(f, "rot:{alpha}"),
        }
    }
}

impl FromStr for CyclicOrderSpec {
    type Err = Error;

    /// `plus | minus | rot:<surd>`. Rational rotations parse but fail validation.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "plus" => Ok(Self::Plus),
            "minus" => Ok(Self::Minus),
            _ => match s.strip_prefix("rot:") {
                Some(alpha) => Ok(Self::Rot(alpha.parse()?)),
                None => Err(Error::InvalidOrder(s.to_string())),
            },
        }
    }
}

impl Serialize for CyclicOrderSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CyclicOrderSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A black-box ternary predicate on `Z`.
pub trait TernaryOracle {
    fn holds(&self, j: i64, k: i64, l: i64) -> bool;
}

impl<F: Fn(i64, i64, i64) -> bool> TernaryOracle for F {
    fn holds(&self, j: i64, k: i64, l: i64) -> bool {
        self(j, k, l)
    }
}

/// Associated linear order of a cyclic order: cut the circle at 0.
pub fn oracle_lt<O: TernaryOracle + ?Sized>(oracle: &O, a: i64, b: i64) -> bool {
    oracle.holds(0, a, b) || (a == 0 && b != 0)
}

/// A validated cyclic order, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CyclicOrder {
    kind: Kind,
}

#[derive(Clone, Debug)]
enum Kind {
    Plus,
    Minus,
    Rot(Character),
}

impl CyclicOrder {
    pub fn new(spec: &CyclicOrderSpec) -> Result<Self> {
        let kind = match spec {
            CyclicOrderSpec::Plus => Kind::Plus,
            CyclicOrderSpec::Minus => Kind::Minus,
            CyclicOrderSpec::Rot(alpha) => {
                if alpha.is_rational() {
                    return Err(Error::RationalAlpha(alpha.to_string()));
                }
                Kind::Rot(Character::new(alpha.clone()))
            }
        };
        Ok(Self { kind })
    }

    pub fn spec(&self) -> CyclicOrderSpec {
        match &self.kind {
            Kind::Plus => CyclicOrderSpec::Plus,
            Kind::Minus => CyclicOrderSpec::Minus,
            Kind::Rot(chi) => CyclicOrderSpec::Rot(chi.alpha().clone()),
        }
    }

    /// The character for rotation orders.
    pub fn character(&self) -> Option<&Character> {
        match &self.kind {
            Kind::Rot(chi) => Some(chi),
            _ => None,
        }
    }

    pub fn holds(&self, j: i64, k: i64, l: i64) -> bool {
        if j == k || k == l || j == l {
            return false;
        }
        match &self.kind {
            Kind::Plus => plus(j, k, l),
            Kind::Minus => plus(l, k, j),
            Kind::Rot(chi) => {
                let lt = |a, b| chi.cmp_frac(a, b) == Ordering::Less;
                (lt(j, k) && lt(k, l)) || (lt(k, l) && lt(l, j)) || (lt(l, j) && lt(j, k))
            }
        }
    }

    pub fn lt(&self, a: i64, b: i64) -> bool {
        oracle_lt(self, a, b)
    }
}

impl TernaryOracle for CyclicOrder {
    fn holds(&self, j: i64, k: i64, l: i64) -> bool {
        CyclicOrder::holds(self, j, k, l)
    }
}

fn plus(j: i64, k: i64, l: i64) -> bool {
    (j < k && k < l) || (l < j && j < k) || (k < l && l < j)
}

/// Evaluates `C(j, k, l)` under `spec`. Repeated arguments give `false`.
pub fn eval_cyclic(spec: &CyclicOrderSpec, j: i64, k: i64, l: i64) -> Result<bool> {
    Ok(spec.validate()?.holds(j, k, l))
}

/// The associated linear order: `a < b` iff `C(0,a,b)` or `a = 0 != b`.
pub fn assoc_lt(spec: &CyclicOrderSpec, a: i64, b: i64) -> Result<bool> {
    Ok(spec.validate()?.lt(a, b))
}

/// Axioms probed by [`check_axioms`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// (1) `C(a,b,c) -> C(b,c,a)`.
    Cyclicity,
    /// (2) `C(a,b,c) -> not C(c,b,a)`.
    Antisymmetry,
    /// (3) `C(a,b,c) and C(a,c,d) -> C(a,b,d)`.
    Transitivity,
    /// (4) distinct `a,b,c` give `C(a,b,c)` or `C(c,b,a)`.
    Totality,
    /// `C(a,b,c) <-> C(a+t,b+t,c+t)`.
    Translation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    /// `[a,b,c]`, `[a,b,c,d]` for transitivity, `[a,b,c,t]` for translation.
    pub witness: Vec<i64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
    pub calls: u64,
    /// The call budget ran out before every instance was checked.
    pub truncated: bool,
}

impl AxiomReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty() && !self.truncated
    }

    pub fn violated(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

pub const DEFAULT_AXIOM_BUDGET: u64 = 1_000_000;

/// Exhaustively checks the cyclic-order axioms and translation invariance on
/// every triple (and quadruple, and translation) drawn from `probe`.
///
/// The oracle is queried once per probe triple (memoized) and once per
/// translated triple; `budget` caps the total number of oracle calls.
pub fn check_axioms<O: TernaryOracle + ?Sized>(
    oracle: &O,
    probe: &[i64],
    budget: u64,
) -> AxiomReport {
    let mut points = probe.to_vec();
    points.sort_unstable();
    points.dedup();
    let n = points.len();
    let mut report = AxiomReport::default();
    if n == 0 {
        return report;
    }
    if (n as u64).pow(3) > budget {
        report.truncated = true;
        return report;
    }

    let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let mut table = vec![false; n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                table[idx(a, b, c)] = oracle.holds(points[a], points[b], points[c]);
            }
        }
    }
    report.calls = (n as u64).pow(3);

    let mut flag = |axiom: Axiom, witness: &[usize], extra: Option<i64>| {
        let mut w: Vec<i64> = witness.iter().map(|&i| points[i]).collect();
        w.extend(extra);
        report.violations.push(Violation { axiom, witness: w });
    };

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let holds = table[idx(a, b, c)];
                if holds && !table[idx(b, c, a)] {
                    flag(Axiom::Cyclicity, &[a, b, c], None);
                }
                if holds && table[idx(c, b, a)] {
                    flag(Axiom::Antisymmetry, &[a, b, c], None);
                }
                let distinct = a != b && b != c && a != c;
                if distinct && !holds && !table[idx(c, b, a)] {
                    flag(Axiom::Totality, &[a, b, c], None);
                }
                if holds {
                    for d in 0..n {
                        if table[idx(a, c, d)] && !table[idx(a, b, d)] {
                            flag(Axiom::Transitivity, &[a, b, c, d], None);
                        }
                    }
                }
            }
        }
    }

    'outer: for &t in &points {
        if t == 0 {
            continue;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if report.calls >= budget {
                        report.truncated = true;
                        break 'outer;
                    }
                    let shifted = match (
                        points[a].checked_add(t),
                        points[b].checked_add(t),
                        points[c].checked_add(t),
                    ) {
                        (Some(x), Some(y), Some(z)) => oracle.holds(x, y, z),
                        _ => continue,
                    };
                    report.calls += 1;
                    if shifted != table[idx(a, b, c)] {
                        flag(Axiom::Translation, &[a, b, c], Some(t));
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rot(text: &str) -> CyclicOrderSpec {
        CyclicOrderSpec::Rot(text.parse().unwrap())
    }

    #[test]
    fn eval_examples() {
        assert!(eval_cyclic(&CyclicOrderSpec::Plus, 1, 2, 3).unwrap());
        assert!(eval_cyclic(&rot("sqrt(2)"), 1, 2, 3).unwrap());
        assert!(!eval_cyclic(&CyclicOrderSpec::Minus, 0, 1, 2).unwrap());
    }

    #[test]
    fn degenerate_triples_are_false() {
        for spec in [CyclicOrderSpec::Plus, CyclicOrderSpec::Minus, rot("sqrt(3)")] {
            assert!(!eval_cyclic(&spec, 4, 4, 9).unwrap());
            assert!(!eval_cyclic(&spec, 4, 9, 4).unwrap());
            assert!(!eval_cyclic(&spec, 0, 0, 0).unwrap());
        }
    }

    #[test]
    fn rational_alpha_rejected() {
        assert!(matches!(
            eval_cyclic(&rot("1/2"), 0, 1, 2),
            Err(Error::RationalAlpha(_))
        ));
        assert!(CyclicOrderSpec::rot("3".parse().unwrap()).is_err());
    }

    #[test]
    fn assoc_lt_examples() {
        assert!(assoc_lt(&CyclicOrderSpec::Plus, 3, -1).unwrap());
        assert!(!assoc_lt(&CyclicOrderSpec::Plus, 5, 5).unwrap());
        assert!(!assoc_lt(&rot("sqrt(2)"), 2, 1).unwrap());
        assert!(assoc_lt(&rot("sqrt(2)"), 0, 1).unwrap());
    }

    #[test]
    fn assoc_lt_is_a_strict_total_order() {
        let probe: Vec<i64> = (-12..=12).collect();
        for spec in [CyclicOrderSpec::Plus, CyclicOrderSpec::Minus, rot("(1+sqrt(5))/2")] {
            let ord = spec.validate().unwrap();
            for &a in &probe {
                assert!(!ord.lt(a, a));
                for &b in &probe {
                    if a != b {
                        assert!(ord.lt(a, b) ^ ord.lt(b, a));
                    }
                    for &c in &probe {
                        if ord.lt(a, b) && ord.lt(b, c) {
                            assert!(ord.lt(a, c), "{spec} {a} {b} {c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn check_axioms_examples() {
        let order = rot("sqrt(2)").validate().unwrap();
        let probe: Vec<i64> = (-20..=20).collect();
        let report = check_axioms(&order, &probe, 10_000_000);
        assert!(report.is_consistent(), "{:?}", &report.violations[..3.min(report.violations.len())]);

        let always = |_: i64, _: i64, _: i64| true;
        let report = check_axioms(&always, &[0, 1, 2], DEFAULT_AXIOM_BUDGET);
        assert!(report.violated(Axiom::Antisymmetry));

        let plus = CyclicOrderSpec::Plus.validate().unwrap();
        let patched = |j: i64, k: i64, l: i64| (j, k, l) != (0, 1, 2) && plus.holds(j, k, l);
        let report = check_axioms(&patched, &[0, 1, 2], DEFAULT_AXIOM_BUDGET);
        assert!(report.violated(Axiom::Totality));
    }

    #[test]
    fn budget_truncates() {
        let plus = CyclicOrderSpec::Plus.validate().unwrap();
        let probe: Vec<i64> = (0..10).collect();
        let report = check_axioms(&plus, &probe, 1500);
        assert!(report.truncated);
        assert!(report.calls <= 1500);
        assert!(!report.is_consistent());
    }

    #[test]
    fn spec_text_round_trip() {
        for text in ["plus", "minus", "rot:(1+1*sqrt(5))/2"] {
            let spec: CyclicOrderSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert_eq!(
            "rot:sqrt(2)-1".parse::<CyclicOrderSpec>().unwrap(),
            rot("(-1+1*sqrt(2))/1")
        );
        assert!("sideways".parse::<CyclicOrderSpec>().is_err());
    }
}
