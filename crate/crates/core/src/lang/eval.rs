use std::collections::BTreeMap;

use serde::Serialize;

use super::{Formula, Quantifier, Term, Window};
use crate::cyclic::{CyclicOrder, CyclicOrderSpec};
use crate::{Error, Result};

/// Variable assignment.
pub type Env = BTreeMap<String, i64>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalOptions {
    /// Short-circuit connectives and quantifiers, and solve a leading
    /// equation `a*x + t = s` in an existential body instead of scanning `x`.
    /// The truth value is unchanged; only the work counters differ.
    pub guided: bool,
    /// Maximum number of atom evaluations.
    pub budget: Option<u64>,
}

impl EvalOptions {
    pub fn guided() -> Self {
        Self {
            guided: true,
            budget: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub value: bool,
    pub atoms: u64,
    pub bindings: u64,
}

/// `c + sum coeff * slot`
#[derive(Clone, Debug)]
struct Lin {
    c: i128,
    terms: Vec<(usize, i128)>,
}

impl Lin {
    fn eval(&self, slots: &[i64]) -> Result<i128> {
        let mut acc = self.c;
        for &(s, k) in &self.terms {
            acc = k
                .checked_mul(i128::from(slots[s]))
                .and_then(|v| v.checked_add(acc))
                .ok_or(Error::Overflow("term evaluation"))?;
        }
        Ok(acc)
    }

    fn eval_i64(&self, slots: &[i64]) -> Result<i64> {
        i64::try_from(self.eval(slots)?).map_err(|_| Error::Overflow("term evaluation"))
    }

    fn coeff(&self, slot: usize) -> i128 {
        self.terms.iter().filter(|t| t.0 == slot).map(|t| t.1).sum()
    }
}

#[derive(Clone, Debug)]
enum Node {
    Bool(bool),
    Cyc(Lin, Lin, Lin),
    /// `lin = 0`
    Zero(Lin),
    /// `lin ≡ 0 (mod n)`
    Divisible(Lin, i128),
    Lt(Lin, Lin),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Quant {
        exists: bool,
        slot: usize,
        lo: i64,
        hi: i64,
        body: Box<Node>,
    },
}

struct Compiler {
    scope: Vec<(String, usize)>,
    slots: usize,
}

impl Compiler {
    fn lin(&self, t: &Term) -> Result<Lin> {
        let mut terms = Vec::new();
        for (v, &k) in t.coefficients() {
            let slot = self
                .scope
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|s| s.1)
                .ok_or_else(|| Error::UnboundVariable(v.clone()))?;
            terms.push((slot, i128::from(k)));
        }
        Ok(Lin {
            c: i128::from(t.constant_part()),
            terms,
        })
    }

    fn diff(&self, a: &Term, b: &Term) -> Result<Lin> {
        let (a, b) = (self.lin(a)?, self.lin(b)?);
        let mut terms = a.terms;
        terms.extend(b.terms.into_iter().map(|(s, k)| (s, -k)));
        Ok(Lin { c: a.c - b.c, terms })
    }

    fn node(&mut self, f: &Formula) -> Result<Node> {
        Ok(match f {
            Formula::Bool(b) => Node::Bool(*b),
            Formula::Cyc(a, b, c) => Node::Cyc(self.lin(a)?, self.lin(b)?, self.lin(c)?),
            Formula::Eq(a, b) => Node::Zero(self.diff(a, b)?),
            Formula::Cong { lhs, rhs, modulus } => {
                if *modulus == 0 {
                    return Err(Error::InvalidModulus);
                }
                Node::Divisible(self.diff(lhs, rhs)?, i128::from(*modulus))
            }
            Formula::Lt(a, b) => Node::Lt(self.lin(a)?, self.lin(b)?),
            Formula::Not(g) => Node::Not(Box::new(self.node(g)?)),
            Formula::And(a, b) => Node::And(Box::new(self.node(a)?), Box::new(self.node(b)?)),
            Formula::Or(a, b) => Node::Or(Box::new(self.node(a)?), Box::new(self.node(b)?)),
            Formula::Implies(a, b) => Node::Implies(Box::new(self.node(a)?), Box::new(self.node(b)?)),
            Formula::Quant {
                kind,
                var,
                lo,
                hi,
                body,
            } => {
                let slot = self.slots;
                self.slots += 1;
                self.scope.push((var.clone(), slot));
                let body = self.node(body)?;
                self.scope.pop();
                Node::Quant {
                    exists: *kind == Quantifier::Exists,
                    slot,
                    lo: *lo,
                    hi: *hi,
                    body: Box::new(body),
                }
            }
        })
    }
}

/// A formula with variables resolved to slots; `vars` occupy slots `0..vars.len()`.
struct Compiled {
    root: Node,
    slots: usize,
}

fn compile(f: &Formula, vars: &[String]) -> Result<Compiled> {
    let mut c = Compiler {
        scope: vars.iter().cloned().zip(0..).collect(),
        slots: vars.len(),
    };
    let root = c.node(f)?;
    Ok(Compiled { root, slots: c.slots })
}

struct Machine<'a> {
    order: &'a CyclicOrder,
    options: EvalOptions,
    atoms: u64,
    bindings: u64,
}

impl Machine<'_> {
    fn atom(&mut self) -> Result<()> {
        self.atoms += 1;
        match self.options.budget {
            Some(b) if self.atoms > b => Err(Error::BudgetExhausted(b)),
            _ => Ok(()),
        }
    }

    fn run(&mut self, n: &Node, slots: &mut [i64]) -> Result<bool> {
        let full = !self.options.guided;
        Ok(match n {
            Node::Bool(b) => *b,
            Node::Cyc(a, b, c) => {
                self.atom()?;
                self.order
                    .holds(a.eval_i64(slots)?, b.eval_i64(slots)?, c.eval_i64(slots)?)
            }
            Node::Zero(d) => {
                self.atom()?;
                d.eval(slots)? == 0
            }
            Node::Divisible(d, m) => {
                self.atom()?;
                d.eval(slots)?.rem_euclid(*m) == 0
            }
            Node::Lt(a, b) => {
                self.atom()?;
                self.order.lt(a.eval_i64(slots)?, b.eval_i64(slots)?)
            }
            Node::Not(g) => !self.run(g, slots)?,
            Node::And(a, b) => {
                let x = self.run(a, slots)?;
                if x || full {
                    let y = self.run(b, slots)?;
                    x && y
                } else {
                    false
                }
            }
            Node::Or(a, b) => {
                let x = self.run(a, slots)?;
                if !x || full {
                    let y = self.run(b, slots)?;
                    x || y
                } else {
                    true
                }
            }
            Node::Implies(a, b) => {
                let x = self.run(a, slots)?;
                if x || full {
                    let y = self.run(b, slots)?;
                    !x || y
                } else {
                    true
                }
            }
            Node::Quant {
                exists,
                slot,
                lo,
                hi,
                body,
            } => {
                if *exists && !full {
                    return self.guided_exists(*slot, *lo, *hi, body, slots);
                }
                let mut acc = !*exists;
                for x in *lo..=*hi {
                    slots[*slot] = x;
                    self.bindings += 1;
                    let v = self.run(body, slots)?;
                    if *exists {
                        acc |= v;
                    } else {
                        acc &= v;
                    }
                    if !full && acc == *exists {
                        break;
                    }
                }
                acc
            }
        })
    }

    /// `exists x in [lo,hi]. d1 | d2 | ...`, one disjunct at a time; a
    /// disjunct `x`-equation `& rest` is tried at the equation's only root.
    fn guided_exists(&mut self, slot: usize, lo: i64, hi: i64, body: &Node, slots: &mut [i64]) -> Result<bool> {
        let mut disjuncts = Vec::new();
        collect_or(body, &mut disjuncts);
        for d in disjuncts {
            let eq = match leading_conjunct(d) {
                Node::Zero(lin) if lin.coeff(slot) != 0 => Some(lin),
                _ => None,
            };
            let found = match eq {
                Some(lin) => {
                    slots[slot] = 0;
                    let rest = lin.eval(slots)?;
                    let k = lin.coeff(slot);
                    if rest % k != 0 {
                        false
                    } else {
                        match i64::try_from(-rest / k) {
                            Ok(x) if (lo..=hi).contains(&x) => {
                                slots[slot] = x;
                                self.bindings += 1;
                                self.run(d, slots)?
                            }
                            _ => false,
                        }
                    }
                }
                None => {
                    let mut hit = false;
                    for x in lo..=hi {
                        slots[slot] = x;
                        self.bindings += 1;
                        if self.run(d, slots)? {
                            hit = true;
                            break;
                        }
                    }
                    hit
                }
            };
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn collect_or<'a>(n: &'a Node, out: &mut Vec<&'a Node>) {
    match n {
        Node::Or(a, b) => {
            collect_or(a, out);
            collect_or(b, out);
        }
        _ => out.push(n),
    }
}

fn leading_conjunct(mut n: &Node) -> &Node {
    while let Node::And(a, _) = n {
        n = a;
    }
    n
}

/// Evaluates `f` under `env`; every free variable must be assigned.
pub fn evaluate(f: &Formula, env: &Env, order: &CyclicOrder, options: EvalOptions) -> Result<Evaluation> {
    let vars: Vec<String> = env.keys().cloned().collect();
    let compiled = compile(f, &vars)?;
    let mut slots = vec![0; compiled.slots];
    for (i, v) in vars.iter().enumerate() {
        slots[i] = env[v];
    }
    let mut m = Machine {
        order,
        options,
        atoms: 0,
        bindings: 0,
    };
    let value = m.run(&compiled.root, &mut slots)?;
    Ok(Evaluation {
        value,
        atoms: m.atoms,
        bindings: m.bindings,
    })
}

/// Truth value of `f` under `env` in `(Z; +, C)` with `C` given by `spec`.
pub fn eval(f: &Formula, env: &Env, spec: &CyclicOrderSpec) -> Result<bool> {
    Ok(evaluate(f, env, &spec.validate()?, EvalOptions::default())?.value)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtractedSet {
    pub variable: String,
    pub window: Window,
    pub set: Vec<i64>,
    pub atoms: u64,
}

/// `{x in window : f(x)}` for a formula with exactly one free variable.
pub fn extract_set(f: &Formula, window: Window, spec: &CyclicOrderSpec, options: EvalOptions) -> Result<ExtractedSet> {
    let order = spec.validate()?;
    let vars: Vec<String> = f.free_vars().into_iter().collect();
    if vars.len() != 1 {
        return Err(Error::Arity(format!(
            "set extraction needs one free variable, found {}",
            vars.len()
        )));
    }
    let compiled = compile(f, &vars)?;
    let mut slots = vec![0; compiled.slots];
    let mut m = Machine {
        order: &order,
        options,
        atoms: 0,
        bindings: 0,
    };
    let mut set = Vec::new();
    for x in window.iter() {
        slots[0] = x;
        if m.run(&compiled.root, &mut slots)? {
            set.push(x);
        }
    }
    Ok(ExtractedSet {
        variable: vars[0].clone(),
        window,
        set,
        atoms: m.atoms,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub equal: bool,
    /// Free variables of each side, sorted; paired by position.
    pub variables: (Vec<String>, Vec<String>),
    /// First assignment, in lexicographic order, where the sides differ.
    pub counterexample: Option<Vec<i64>>,
    pub checked: u64,
}

/// Compares `f` under `spec_f` with `g` under `spec_g` at every point of
/// `window^arity`. Free variables are matched by sorted position, so the two
/// sides may use different names.
pub fn equal_on_window(
    f: &Formula,
    g: &Formula,
    window: Window,
    spec_f: &CyclicOrderSpec,
    spec_g: &CyclicOrderSpec,
    options: EvalOptions,
) -> Result<Comparison> {
    let (of, og) = (spec_f.validate()?, spec_g.validate()?);
    let vf: Vec<String> = f.free_vars().into_iter().collect();
    let vg: Vec<String> = g.free_vars().into_iter().collect();
    if vf.len() != vg.len() || vf.len() > 3 {
        return Err(Error::Arity(format!(
            "cannot compare formulas with {} and {} free variables (at most 3, equal counts)",
            vf.len(),
            vg.len()
        )));
    }
    let arity = vf.len();
    let (cf, cg) = (compile(f, &vf)?, compile(g, &vg)?);
    let (mut sf, mut sg) = (vec![0; cf.slots], vec![0; cg.slots]);
    let mut mf = Machine {
        order: &of,
        options,
        atoms: 0,
        bindings: 0,
    };
    let mut mg = Machine {
        order: &og,
        options,
        atoms: 0,
        bindings: 0,
    };
    let mut point = vec![window.lo; arity];
    let mut checked = 0u64;
    loop {
        sf[..arity].copy_from_slice(&point);
        sg[..arity].copy_from_slice(&point);
        checked += 1;
        if mf.run(&cf.root, &mut sf)? != mg.run(&cg.root, &mut sg)? {
            return Ok(Comparison {
                equal: false,
                variables: (vf, vg),
                counterexample: Some(point),
                checked,
            });
        }
        // odometer, last coordinate fastest
        let mut i = arity;
        loop {
            if i == 0 {
                return Ok(Comparison {
                    equal: true,
                    variables: (vf, vg),
                    counterexample: None,
                    checked,
                });
            }
            i -= 1;
            if point[i] < window.hi {
                point[i] += 1;
                break;
            }
            point[i] = window.lo;
        }
    }
}
