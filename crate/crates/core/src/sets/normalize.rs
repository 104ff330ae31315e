//! Quantifier-free atoms over `(Z^2; +, <, nZ^2)` and their normal form as a
//! finite union of cnc-sets.

use std::cmp::Ordering;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{
    cnc_to_tmc, project_convex, ArcKind, Bound, CncSet, Convex, Elem, LinearConvex, Member,
    TmcSet, UnionOfCnc,
};
use crate::cover::{CoverOrder, CoverPoint};
use crate::exactnum::QuadSurd;
use crate::{Error, Result};

/// Largest number of residue classes enumerated when removing cosets.
const MAX_RESIDUES: i128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomKind {
    /// `k1 t + a < k2 t + b`
    Less,
    /// `k1 t + a >= k2 t + b`
    AtLeast,
    /// `k1 t + a ∈ n Z^2`
    InCoset,
    /// `k1 t + a ∉ n Z^2`
    NotInCoset,
    /// `k1 t + a = k2 t + b`
    Equal,
    /// `k1 t + a != k2 t + b`
    NotEqual,
}

impl AtomKind {
    pub fn from_code(code: u8) -> Result<Self> {
        Ok(match code {
            1 => Self::Less,
            2 => Self::AtLeast,
            3 => Self::InCoset,
            4 => Self::NotInCoset,
            5 => Self::Equal,
            6 => Self::NotEqual,
            _ => return Err(Error::NonlinearAtom(format!("unknown atom kind {code}"))),
        })
    }

    pub fn code(self) -> u8 {
        self as u8 + 1
    }
}

/// One atom in the unknown `t ∈ Z^2`. In the JSON form `kind` is `1..=6`
/// and points are `[k, l]` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(try_from = "RawAtom", into = "RawAtom")]
pub struct Atom {
    pub kind: AtomKind,
    pub k1: i64,
    pub k2: i64,
    pub a: CoverPoint,
    pub b: CoverPoint,
    /// Modulus for the coset kinds.
    pub n: u64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
struct RawAtom {
    kind: u8,
    #[serde(default)]
    k1: i64,
    #[serde(default)]
    k2: i64,
    #[serde(default = "origin")]
    a: CoverPoint,
    #[serde(default = "origin")]
    b: CoverPoint,
    #[serde(default)]
    n: Option<u64>,
}

fn origin() -> CoverPoint {
    CoverPoint::ZERO
}

impl TryFrom<RawAtom> for Atom {
    type Error = Error;

    fn try_from(raw: RawAtom) -> Result<Self> {
        let kind = AtomKind::from_code(raw.kind)?;
        let n = match kind {
            AtomKind::InCoset | AtomKind::NotInCoset => match raw.n {
                Some(n) if n >= 1 => n,
                _ => return Err(Error::InvalidModulus),
            },
            _ => 1,
        };
        Ok(Self {
            kind,
            k1: raw.k1,
            k2: raw.k2,
            a: raw.a,
            b: raw.b,
            n,
        })
    }
}

impl From<Atom> for RawAtom {
    fn from(atom: Atom) -> Self {
        let coset = matches!(atom.kind, AtomKind::InCoset | AtomKind::NotInCoset);
        Self {
            kind: atom.kind.code(),
            k1: atom.k1,
            k2: atom.k2,
            a: atom.a,
            b: atom.b,
            n: coset.then_some(atom.n),
        }
    }
}

impl Atom {
    pub fn new(kind: AtomKind, k1: i64, a: CoverPoint, k2: i64, b: CoverPoint) -> Self {
        Self {
            kind,
            k1,
            k2,
            a,
            b,
            n: 1,
        }
    }

    pub fn coset(negated: bool, k: i64, a: CoverPoint, n: u64) -> Self {
        Self {
            kind: if negated {
                AtomKind::NotInCoset
            } else {
                AtomKind::InCoset
            },
            k1: k,
            k2: 0,
            a,
            b: CoverPoint::ZERO,
            n,
        }
    }

    /// Evaluates the atom at `t` by its definition.
    pub fn holds(&self, order: &CoverOrder, t: CoverPoint) -> Result<bool> {
        let lhs = t.checked_scale(self.k1)?.checked_add(self.a)?;
        let rhs = || -> Result<CoverPoint> { t.checked_scale(self.k2)?.checked_add(self.b) };
        let n = self.n as i64;
        Ok(match self.kind {
            AtomKind::Less => order.cmp(lhs, rhs()?) == Ordering::Less,
            AtomKind::AtLeast => order.cmp(lhs, rhs()?) != Ordering::Less,
            AtomKind::InCoset => lhs.k % n == 0 && lhs.l % n == 0,
            AtomKind::NotInCoset => !(lhs.k % n == 0 && lhs.l % n == 0),
            AtomKind::Equal => lhs == rhs()?,
            AtomKind::NotEqual => lhs != rhs()?,
        })
    }

    /// `c t` against `d` with `c = k1 - k2`, `d = b - a`.
    fn linear(&self) -> Result<(i64, CoverPoint)> {
        let c = self.k1.checked_sub(self.k2).ok_or(Error::Overflow("coefficient"))?;
        Ok((c, self.b.checked_sub(self.a)?))
    }
}

/// `x ≡ r (mod m)` per coordinate, `m >= 1`, `0 <= r < m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Coset {
    m: i128,
    r: [i128; 2],
}

impl Coset {
    const ALL: Self = Self { m: 1, r: [0, 0] };

    fn contains(&self, r: [i128; 2]) -> bool {
        r[0].rem_euclid(self.m) == self.r[0] && r[1].rem_euclid(self.m) == self.r[1]
    }
}

/// Solutions of `k x + a ≡ 0 (mod n)` in one coordinate, as `x ≡ r (mod N)`.
fn solve_linear(k: i128, a: i128, n: i128) -> Option<(i128, i128)> {
    let k = k.rem_euclid(n);
    let target = (-a).rem_euclid(n);
    let g = k.gcd(&n);
    if target % g != 0 {
        return None;
    }
    let big_n = n / g;
    if big_n == 1 {
        return Some((0, 1));
    }
    let inv = (k / g).extended_gcd(&big_n).x.rem_euclid(big_n);
    Some(((target / g) * inv % big_n, big_n))
}

/// `{t : k t + a ∈ n Z^2}` as a coset, or `None` when empty.
fn coset_of(k: i64, a: CoverPoint, n: u64) -> Option<Coset> {
    let n = i128::from(n);
    let (r0, m) = solve_linear(k.into(), a.k.into(), n)?;
    let (r1, _) = solve_linear(k.into(), a.l.into(), n)?;
    Some(Coset { m, r: [r0, r1] })
}

fn crt(x: (i128, i128), y: (i128, i128)) -> Option<(i128, i128)> {
    let (r1, m1) = x;
    let (r2, m2) = y;
    let eg = m1.extended_gcd(&m2);
    let g = eg.gcd;
    if (r2 - r1) % g != 0 {
        return None;
    }
    let l = m1 / g * m2;
    let step = ((r2 - r1) / g * eg.x).rem_euclid(m2 / g);
    Some(((r1 + m1 * step).rem_euclid(l), l))
}

fn meet(x: Coset, y: Coset) -> Option<Coset> {
    let (r0, m) = crt((x.r[0], x.m), (y.r[0], y.m))?;
    let (r1, _) = crt((x.r[1], x.m), (y.r[1], y.m))?;
    Some(Coset { m, r: [r0, r1] })
}

/// Result of [`normalize_qf`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct Normalized {
    pub sets: UnionOfCnc,
    /// Conjunctions found empty from their atoms alone.
    pub unsatisfiable: Vec<usize>,
}

struct Conjunction {
    convex: LinearConvex,
    coset: Coset,
    avoid: Vec<Coset>,
    point: Option<CoverPoint>,
    excluded: Vec<CoverPoint>,
}

fn bound(num: CoverPoint, den: i64, inclusive: bool) -> Bound {
    Bound {
        num,
        den: den as u64,
        inclusive,
    }
}

/// Folds one conjunction of atoms; `Ok(None)` when some atom or the coset
/// combination is unsatisfiable.
fn fold(order: &CoverOrder, atoms: &[Atom]) -> Result<Option<Conjunction>> {
    let mut c = Conjunction {
        convex: LinearConvex::all(order.clone()),
        coset: Coset::ALL,
        avoid: Vec::new(),
        point: None,
        excluded: Vec::new(),
    };
    for atom in atoms {
        match atom.kind {
            AtomKind::Less | AtomKind::AtLeast => {
                let (coef, d) = atom.linear()?;
                let strict = atom.kind == AtomKind::Less;
                if coef == 0 {
                    let sign = order.signum(d);
                    let ok = if strict {
                        sign == Ordering::Greater
                    } else {
                        sign != Ordering::Greater
                    };
                    if !ok {
                        return Ok(None);
                    }
                    continue;
                }
                let neg = |p: CoverPoint| p.checked_neg();
                // coef t < d  or  coef t >= d
                match (coef > 0, strict) {
                    (true, true) => c.convex.meet_upper(bound(d, coef, false))?,
                    (true, false) => c.convex.meet_lower(bound(d, coef, true))?,
                    (false, true) => c.convex.meet_lower(bound(neg(d)?, -coef, false))?,
                    (false, false) => c.convex.meet_upper(bound(neg(d)?, -coef, true))?,
                }
            }
            AtomKind::InCoset => match coset_of(atom.k1, atom.a, atom.n) {
                None => return Ok(None),
                Some(s) => match meet(c.coset, s) {
                    None => return Ok(None),
                    Some(m) => c.coset = m,
                },
            },
            AtomKind::NotInCoset => {
                if let Some(s) = coset_of(atom.k1, atom.a, atom.n) {
                    if s.m == 1 {
                        return Ok(None);
                    }
                    c.avoid.push(s);
                }
            }
            AtomKind::Equal | AtomKind::NotEqual => {
                let (coef, d) = atom.linear()?;
                let solution = if coef == 0 {
                    None
                } else if d.k % coef == 0 && d.l % coef == 0 {
                    Some(CoverPoint::new(d.k / coef, d.l / coef))
                } else {
                    None
                };
                let always = coef == 0 && d == CoverPoint::ZERO;
                match (atom.kind, always, solution) {
                    (AtomKind::Equal, true, _) | (AtomKind::NotEqual, false, None) => {}
                    (AtomKind::Equal, false, None) | (AtomKind::NotEqual, true, _) => {
                        return Ok(None)
                    }
                    (AtomKind::Equal, false, Some(p)) => {
                        if c.point.is_some_and(|q| q != p) {
                            return Ok(None);
                        }
                        c.point = Some(p);
                    }
                    (_, _, Some(p)) => c.excluded.push(p),
                    _ => unreachable!("only equality kinds reach here"),
                }
            }
        }
    }
    Ok(Some(c))
}

fn residue_sets(c: &Conjunction) -> Result<Vec<Coset>> {
    if c.avoid.is_empty() {
        return Ok(vec![c.coset]);
    }
    let l = c
        .avoid
        .iter()
        .fold(c.coset.m, |acc, s| acc.lcm(&s.m));
    if l * l > MAX_RESIDUES {
        return Err(Error::Overflow("too many residue classes"));
    }
    let mut out = Vec::new();
    for r0 in 0..l {
        for r1 in 0..l {
            let r = [r0, r1];
            if c.coset.contains(r) && !c.avoid.iter().any(|s| s.contains(r)) {
                out.push(Coset { m: l, r });
            }
        }
    }
    Ok(out)
}

fn to_cnc(convex: LinearConvex, coset: Coset) -> Result<CncSet> {
    let narrow = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow("coset"));
    Ok(CncSet {
        j: Convex::Linear(convex),
        a: Elem::Point(CoverPoint::new(narrow(coset.r[0])?, narrow(coset.r[1])?)),
        n: u64::try_from(coset.m).map_err(|_| Error::Overflow("coset"))?,
    })
}

/// Removes `p` from every set by splitting its convex part at `p`.
fn exclude(sets: Vec<CncSet>, p: CoverPoint) -> Result<Vec<CncSet>> {
    let mut out = Vec::new();
    for set in sets {
        if !set.member(Elem::Point(p))? {
            out.push(set);
            continue;
        }
        let Convex::Linear(convex) = &set.j else {
            unreachable!("normalizer only builds linear sets")
        };
        let mut below = convex.clone();
        below.meet_upper(Bound::at(p, false))?;
        let mut above = convex.clone();
        above.meet_lower(Bound::at(p, false))?;
        for half in [below, above] {
            if !half.is_trivially_empty()? {
                out.push(CncSet {
                    j: Convex::Linear(half),
                    ..set.clone()
                });
            }
        }
    }
    Ok(out)
}

/// Rewrites a disjunction of conjunctions of atoms as a union of cnc-sets
/// with the same members.
///
/// Order atoms intersect to one convex set, coset atoms combine by CRT into
/// one coset, excluded cosets are removed by splitting into residues modulo
/// the common modulus, and equalities pin the set to a point or remove one.
pub fn normalize_qf(order: &CoverOrder, conjunctions: &[Vec<Atom>]) -> Result<Normalized> {
    let mut result = Normalized::default();
    for (index, atoms) in conjunctions.iter().enumerate() {
        let Some(c) = fold(order, atoms)? else {
            result.unsatisfiable.push(index);
            continue;
        };
        if let Some(p) = c.point {
            let mut ok = true;
            for atom in atoms {
                ok &= atom.holds(order, p)?;
            }
            if ok {
                result.sets.0.push(CncSet {
                    j: Convex::Linear(LinearConvex::closed(order.clone(), p, p)),
                    a: Elem::Point(p),
                    n: 1,
                });
            } else {
                result.unsatisfiable.push(index);
            }
            continue;
        }
        if c.convex.is_trivially_empty()? {
            result.unsatisfiable.push(index);
            continue;
        }
        let mut sets = Vec::new();
        for coset in residue_sets(&c)? {
            sets.push(to_cnc(c.convex.clone(), coset)?);
        }
        for p in &c.excluded {
            sets = exclude(sets, *p)?;
        }
        result.sets.0.extend(sets);
    }
    Ok(result)
}

/// Decomposes the unary set `X = {l : (k,l) satisfies the atoms for the
/// unique k with 0 <= k + alpha l < 1}` into tmc-sets of `(Z; C_alpha)`.
///
/// The atoms are restricted to `[0, u)`, normalized into cnc-sets of `Z^2`,
/// each rewritten as `a + nJ`, and projected to `pi(a) + n pi(J)`.
pub fn unary_decompose(alpha: &QuadSurd, conjunctions: &[Vec<Atom>]) -> Result<Vec<TmcSet>> {
    let order = CoverOrder::pullback(alpha.clone())?;
    let window = [
        Atom::new(AtomKind::AtLeast, 1, CoverPoint::ZERO, 0, CoverPoint::ZERO),
        Atom::new(AtomKind::Less, 1, CoverPoint::ZERO, 0, CoverPoint::UNIT),
    ];
    let restricted: Vec<Vec<Atom>> = conjunctions
        .iter()
        .map(|atoms| atoms.iter().chain(&window).cloned().collect())
        .collect();
    let normalized = normalize_qf(&order, &restricted)?;
    let mut out = Vec::new();
    for cnc in &normalized.sets.0 {
        let tmc = cnc_to_tmc(cnc)?;
        let (Convex::Linear(j), Elem::Point(a)) = (&tmc.j, tmc.a) else {
            unreachable!("normalizer only builds linear sets")
        };
        let image = project_convex(j)?;
        if image.kind == ArcKind::Empty {
            continue;
        }
        out.push(TmcSet {
            a: Elem::Int(a.l),
            m: tmc.m,
            j: Convex::Cyclic(image),
        });
    }
    Ok(out)
}
