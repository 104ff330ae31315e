//! `cycord`: command-line front end for `cycord-core`.
//!
//! Every subcommand prints one JSON run report on stdout (or a CSV table with
//! `--csv` where the output is tabular). Exit status is 0 on success, 2 on
//! bad input and 3 when a bounded search runs out of budget.

mod report;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use cycord_core::classify::{detect_type, recover_alpha, OrderType, RecoverOptions};
use cycord_core::cover::{
    cofinality_witness, cover_add, cover_lt, cover_neg, quotient_classes, section, to_ordered, CoverOrder, CoverPoint,
};
use cycord_core::cyclic::{assoc_lt, check_axioms, eval_cyclic, CyclicOrderSpec};
use cycord_core::definability;
use cycord_core::exactnum::{frac, QuadSurd};
use cycord_core::kronecker::{ap_meets_set, dense_intersect, density_witness, CircleInterval};
use cycord_core::lang::{self, EvalOptions, Window};
use cycord_core::sets::{normalize_qf, unary_decompose, Atom};
use cycord_core::{Error, Result};

use report::{write_csv, Outcome, Table};

#[derive(Parser)]
#[command(name = "cycord", version, about = "Experiments with cyclic orders on the integers")]
struct Cli {
    /// Print a CSV table instead of JSON (tabular commands only).
    #[arg(long, global = true)]
    csv: bool,
    /// Default budget for bounded searches.
    #[arg(long, global = true, env = "CYCORD_BUDGET", default_value_t = 100_000)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate C(j,k,l), the associated order, or the axioms on a range.
    Eval(EvalArgs),
    /// Arithmetic in the universal cover Z x Z.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// Table of the section g -> (k, g) over a range.
    Section(SectionArgs),
    /// Detect the order type of an oracle and recover its rotation angle.
    Classify(ClassifyArgs),
    /// Winding counts and interval membership built from C_alpha queries.
    Winding(WindingArgs),
    /// C_{alpha+m/n} or C_{m alpha/n} evaluated from C_alpha queries.
    #[command(subcommand)]
    Derived(DerivedCmd),
    /// Normalize quantifier-free atom formulas over the cover into cnc-sets.
    Normalize(NormalizeArgs),
    /// Decompose the projection of an atom formula into tmc-sets over Z.
    Decompose(DecomposeArgs),
    /// Kronecker-style density searches.
    #[command(subcommand)]
    Kron(KronCmd),
    /// Parse and evaluate formulas with bounded quantifiers.
    #[command(subcommand)]
    Formula(FormulaCmd),
}

fn triple(s: &str) -> std::result::Result<[i64; 3], String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("{t}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    v.try_into().map_err(|_| format!("expected j,k,l: {s}"))
}

fn pair(s: &str) -> std::result::Result<[i64; 2], String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("{t}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    v.try_into().map_err(|_| format!("expected a,b: {s}"))
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("what").required(true).args(["triple", "lt", "axioms"])))]
struct EvalArgs {
    /// plus, minus or rot:<surd>
    #[arg(long)]
    order: CyclicOrderSpec,
    /// Evaluate C(j,k,l).
    #[arg(long, value_parser = triple)]
    triple: Option<[i64; 3]>,
    /// Evaluate a < b in the associated linear order.
    #[arg(long, value_parser = pair, allow_hyphen_values = true)]
    lt: Option<[i64; 2]>,
    /// Check the cyclic-order axioms and translation invariance on lo,hi.
    #[arg(long, allow_hyphen_values = true)]
    axioms: Option<Window>,
}

#[derive(Subcommand)]
enum CoverCmd {
    /// p + q
    Add {
        #[arg(long)]
        order: CyclicOrderSpec,
        #[arg(long, allow_hyphen_values = true)]
        p: CoverPoint,
        #[arg(long, allow_hyphen_values = true)]
        q: CoverPoint,
    },
    /// p < q
    Lt {
        #[arg(long)]
        order: CyclicOrderSpec,
        #[arg(long, allow_hyphen_values = true)]
        p: CoverPoint,
        #[arg(long, allow_hyphen_values = true)]
        q: CoverPoint,
    },
    /// -p
    Neg {
        #[arg(long)]
        order: CyclicOrderSpec,
        #[arg(long, allow_hyphen_values = true)]
        p: CoverPoint,
    },
    /// Coordinates of p in the ordered presentation.
    Ordered {
        #[arg(long)]
        order: CyclicOrderSpec,
        #[arg(long, allow_hyphen_values = true)]
        p: CoverPoint,
    },
    /// Section point over g.
    Section {
        #[arg(long)]
        order: CyclicOrderSpec,
        #[arg(long, allow_hyphen_values = true)]
        g: i64,
    },
    /// Classes of H/nH met by a window.
    Quotient {
        #[arg(long)]
        order: CyclicOrderSpec,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 20)]
        window: i64,
    },
    /// Least n with p < n*u, under lex, lex-opposite or alpha:<surd>.
    Cofinal {
        #[arg(long)]
        order: CoverOrder,
        #[arg(long, allow_hyphen_values = true)]
        p: CoverPoint,
    },
}

#[derive(Args)]
struct SectionArgs {
    #[arg(long)]
    order: CyclicOrderSpec,
    #[arg(long, allow_hyphen_values = true, default_value_t = -10)]
    from: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 10)]
    to: i64,
}

#[derive(Args)]
struct ClassifyArgs {
    /// The order used as a black-box oracle.
    #[arg(long)]
    oracle: CyclicOrderSpec,
    /// Stern-Brocot steps.
    #[arg(long, default_value_t = 20)]
    depth: u32,
    /// Stop before a mediant with a larger denominator.
    #[arg(long)]
    max_den: Option<u64>,
}

#[derive(Args)]
struct WindingArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: QuadSurd,
    #[arg(long, allow_hyphen_values = true)]
    l: i64,
    #[arg(long)]
    n: u64,
    /// Also decide frac(alpha l) in [r/n, (r+1)/n).
    #[arg(long)]
    r: Option<u64>,
    /// Also decide frac(alpha l) in [0, r alpha/n) for this r (alpha in (0,1)).
    #[arg(long)]
    zero: Option<u64>,
}

#[derive(Args)]
struct DerivedArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: QuadSurd,
    #[arg(long, allow_hyphen_values = true)]
    m: i64,
    #[arg(long)]
    n: u64,
    #[arg(long, value_parser = triple, allow_hyphen_values = true)]
    triple: [i64; 3],
    /// Compare against the rotation order of the target angle.
    #[arg(long)]
    check: bool,
}

#[derive(Subcommand)]
enum DerivedCmd {
    /// C_{alpha + m/n}
    Shifted(DerivedArgs),
    /// C_{m alpha / n}
    Scaled(DerivedArgs),
}

#[derive(Args)]
struct NormalizeArgs {
    /// JSON atoms: one conjunction `[atom, ...]` or a disjunction `[[atom, ...], ...]`.
    #[arg(long)]
    atoms: PathBuf,
    /// lex, lex-opposite or alpha:<surd>
    #[arg(long)]
    order: CoverOrder,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Atom file in the `normalize` format describing a subset of [0, u).
    #[arg(long)]
    formula: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    alpha: QuadSurd,
}

#[derive(Subcommand)]
enum KronCmd {
    /// Least m >= 1 with frac(alpha m) in Ja and frac(beta m) in Jb.
    Witness {
        #[arg(long, allow_hyphen_values = true)]
        alpha: QuadSurd,
        #[arg(long, allow_hyphen_values = true)]
        beta: QuadSurd,
        #[arg(long)]
        ja: CircleInterval,
        #[arg(long)]
        jb: CircleInterval,
    },
    /// A point x = k + n l with frac(beta l) in Jb and frac(alpha x) in Ja.
    Intersect {
        #[arg(long, allow_hyphen_values = true)]
        alpha: QuadSurd,
        #[arg(long, allow_hyphen_values = true)]
        beta: QuadSurd,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        jb: CircleInterval,
        #[arg(long)]
        ja: CircleInterval,
    },
    /// Least m >= 1 with C_alpha(0, k m + l, 1).
    Ap {
        #[arg(long, allow_hyphen_values = true)]
        alpha: QuadSurd,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
    },
}

#[derive(Args)]
struct FormulaCommon {
    #[arg(long)]
    order: CyclicOrderSpec,
    #[arg(long)]
    text: String,
    /// Short-circuit and solve leading equations under existential quantifiers.
    #[arg(long)]
    guided: bool,
}

#[derive(Subcommand)]
enum FormulaCmd {
    /// Truth value under an assignment such as x=1,y=-2.
    Eval {
        #[command(flatten)]
        common: FormulaCommon,
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        assign: String,
    },
    /// The set defined by a one-variable formula on a window.
    Set {
        #[command(flatten)]
        common: FormulaCommon,
        #[arg(long, allow_hyphen_values = true)]
        window: Window,
    },
    /// Compare with a second formula and/or order at every point of window^arity.
    Cmp {
        #[command(flatten)]
        common: FormulaCommon,
        #[arg(long, allow_hyphen_values = true)]
        window: Window,
        /// Defaults to --text.
        #[arg(long)]
        other_text: Option<String>,
        /// Defaults to --order.
        #[arg(long)]
        other_order: Option<CyclicOrderSpec>,
    },
}

fn eval_cmd(a: EvalArgs) -> Result<Outcome> {
    let order = a.order.validate()?;
    let spec = a.order.to_string();
    if let Some([j, k, l]) = a.triple {
        let value = eval_cyclic(&a.order, j, k, l)?;
        return Ok(Outcome::new("eval", json!({"order": spec, "triple": [j, k, l]}), json!({"value": value})));
    }
    if let Some([x, y]) = a.lt {
        let value = assoc_lt(&a.order, x, y)?;
        return Ok(Outcome::new("eval", json!({"order": spec, "lt": [x, y]}), json!({"value": value})));
    }
    let w = a.axioms.expect("argument group");
    let probe: Vec<i64> = w.iter().collect();
    let report = check_axioms(&order, &probe, u64::MAX);
    let consistent = report.is_consistent();
    Ok(Outcome::new(
        "eval",
        json!({"order": spec, "axioms": w.to_string()}),
        json!({"consistent": consistent, "violations": report.violations}),
    )
    .counters(json!({"calls": report.calls})))
}

fn cover_cmd(c: CoverCmd, budget: u64) -> Result<Outcome> {
    Ok(match c {
        CoverCmd::Add { order, p, q } => Outcome::new(
            "cover add",
            json!({"order": order.to_string(), "p": p, "q": q}),
            json!({"sum": cover_add(&order, p, q)?}),
        ),
        CoverCmd::Lt { order, p, q } => Outcome::new(
            "cover lt",
            json!({"order": order.to_string(), "p": p, "q": q}),
            json!({"value": cover_lt(&order, p, q)?}),
        ),
        CoverCmd::Neg { order, p } => Outcome::new(
            "cover neg",
            json!({"order": order.to_string(), "p": p}),
            json!({"neg": cover_neg(&order, p)?}),
        ),
        CoverCmd::Ordered { order, p } => Outcome::new(
            "cover ordered",
            json!({"order": order.to_string(), "p": p}),
            json!({"ordered": to_ordered(&order, p)?}),
        ),
        CoverCmd::Section { order, g } => Outcome::new(
            "cover section",
            json!({"order": order.to_string(), "g": g}),
            json!({"point": section(&order, g)?}),
        ),
        CoverCmd::Quotient { order, n, window } => Outcome::new(
            "cover quotient",
            json!({"order": order.to_string(), "n": n, "window": window}),
            json!({"classes": quotient_classes(&order, n, window)?}),
        ),
        CoverCmd::Cofinal { order, p } => Outcome::new(
            "cover cofinal",
            json!({"order": order.to_string(), "p": p}),
            json!({"n": cofinality_witness(&order, p, budget)?}),
        )
        .counters(json!({"budget": budget})),
    })
}

fn section_cmd(a: SectionArgs) -> Result<Outcome> {
    if a.from > a.to {
        return Err(Error::InvalidInterval(format!("{} > {}", a.from, a.to)));
    }
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for g in a.from..=a.to {
        let p = section(&a.order, g)?;
        rows.push(vec![g.to_string(), p.k.to_string(), p.l.to_string()]);
        points.push(json!({"g": g, "point": p}));
    }
    Ok(Outcome::new(
        "section",
        json!({"order": a.order.to_string(), "from": a.from, "to": a.to}),
        json!({"sections": points}),
    )
    .table(Table {
        header: vec!["g", "k", "l"],
        rows,
    }))
}

fn classify_cmd(a: ClassifyArgs, budget: u64) -> Result<Outcome> {
    let oracle = a.oracle.validate()?;
    let kind = detect_type(&oracle, budget);
    let inputs = json!({"oracle": a.oracle.to_string(), "depth": a.depth, "max_den": a.max_den, "budget": budget});
    if kind.kind != OrderType::Dense {
        return Ok(Outcome::new("classify", inputs, json!({"type": kind.kind, "witness": kind.witness}))
            .counters(json!({"queries": kind.queries, "budget_spent": kind.budget_spent}))
            .exhausted(kind.kind == OrderType::Unknown));
    }
    let rec = recover_alpha(
        oracle,
        RecoverOptions {
            depth: a.depth,
            max_denominator: a.max_den,
        },
    )?;
    let to_surd = |q: &num_rational::BigRational| QuadSurd::ratio(q.numer().clone(), q.denom().clone());
    let (lo, hi) = (to_surd(&rec.lo)?, to_surd(&rec.hi)?);
    let rows = rec
        .steps
        .iter()
        .map(|s| vec![s.m.to_string(), s.n.to_string(), s.below.to_string(), s.lo.to_string(), s.hi.to_string()])
        .collect();
    Ok(Outcome::new(
        "classify",
        inputs,
        json!({
            "type": kind.kind,
            "witness": kind.witness,
            "lo": rec.lo.to_string(),
            "hi": rec.hi.to_string(),
            "sign": rec.sign,
            "steps": rec.steps,
        }),
    )
    .counters(json!({"queries": kind.queries + rec.queries, "budget_spent": kind.budget_spent}))
    .show("lo", &lo)
    .show("hi", &hi)
    .table(Table {
        header: vec!["m", "n", "below", "lo", "hi"],
        rows,
    }))
}

fn winding_cmd(a: WindingArgs) -> Result<Outcome> {
    let count = definability::winding_count(&a.alpha, a.l, a.n)?;
    let mut outputs = json!({"winding": count});
    if let Some(r) = a.r {
        outputs["in_interval"] = json!(definability::in_interval_rn(&a.alpha, a.l, r, a.n)?);
    }
    if let Some(r) = a.zero {
        outputs["in_zero_interval"] = json!(definability::in_zero_interval(&a.alpha, a.l, r, a.n)?);
    }
    let queries = a.n.saturating_sub(1);
    Ok(Outcome::new(
        "winding",
        json!({"alpha": a.alpha.to_string(), "l": a.l, "n": a.n, "r": a.r, "zero": a.zero}),
        outputs,
    )
    .counters(json!({"queries": queries}))
    .show("frac_alpha_l", frac(&a.alpha, a.l).value()))
}

fn derived_cmd(c: DerivedCmd) -> Result<Outcome> {
    let (name, a, scaled) = match c {
        DerivedCmd::Shifted(a) => ("derived shifted", a, false),
        DerivedCmd::Scaled(a) => ("derived scaled", a, true),
    };
    let [j, k, l] = a.triple;
    let (value, beta) = if scaled {
        (definability::eval_scaled(&a.alpha, a.m, a.n, j, k, l)?, a.alpha.scale(a.m, a.n)?)
    } else {
        (definability::eval_shifted(&a.alpha, a.m, a.n, j, k, l)?, a.alpha.add_ratio(a.m, a.n)?)
    };
    let mut outputs = json!({"value": value, "beta": beta.to_string()});
    if a.check {
        let direct = eval_cyclic(&CyclicOrderSpec::Rot(beta.clone()), j, k, l)?;
        outputs["direct"] = json!(direct);
        outputs["agree"] = json!(direct == value);
    }
    Ok(Outcome::new(
        name,
        json!({"alpha": a.alpha.to_string(), "m": a.m, "n": a.n, "triple": a.triple, "check": a.check}),
        outputs,
    )
    .show("beta", &beta))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AtomFile {
    Conjunction(Vec<Atom>),
    Disjunction(Vec<Vec<Atom>>),
}

fn read_atoms(path: &PathBuf) -> Result<Vec<Vec<Atom>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Syntax {
        line: 0,
        column: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    let parsed: AtomFile = serde_json::from_str(&text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: format!("{}: {e}", path.display()),
    })?;
    Ok(match parsed {
        AtomFile::Conjunction(c) => vec![c],
        AtomFile::Disjunction(d) => d,
    })
}

fn normalize_cmd(a: NormalizeArgs) -> Result<Outcome> {
    let atoms = read_atoms(&a.atoms)?;
    let out = normalize_qf(&a.order, &atoms)?;
    Ok(Outcome::new(
        "normalize",
        json!({"atoms": atoms, "order": a.order.to_string()}),
        json!({"sets": out.sets, "unsatisfiable": out.unsatisfiable}),
    ))
}

fn decompose_cmd(a: DecomposeArgs) -> Result<Outcome> {
    let atoms = read_atoms(&a.formula)?;
    let sets = unary_decompose(&a.alpha, &atoms)?;
    Ok(Outcome::new(
        "decompose",
        json!({"formula": atoms, "alpha": a.alpha.to_string()}),
        json!({"sets": sets}),
    ))
}

fn kron_cmd(c: KronCmd, budget: u64) -> Result<Outcome> {
    Ok(match c {
        KronCmd::Witness { alpha, beta, ja, jb } => {
            let found = density_witness(&alpha, &beta, &ja, &jb, budget)?;
            let mut out = Outcome::new(
                "kron witness",
                json!({"alpha": alpha.to_string(), "beta": beta.to_string(), "ja": ja.to_string(), "jb": jb.to_string(), "budget": budget}),
                json!({"m": found.witness}),
            )
            .counters(json!({"queries": found.scanned}))
            .exhausted(found.witness.is_none());
            if let Some(m) = found.witness {
                out = out.show("frac_a", frac(&alpha, m).value()).show("frac_b", frac(&beta, m).value());
            }
            out
        }
        KronCmd::Intersect {
            alpha,
            beta,
            k,
            n,
            jb,
            ja,
        } => {
            let found = dense_intersect(&alpha, &beta, k, n, &jb, &ja, budget)?;
            let mut out = Outcome::new(
                "kron intersect",
                json!({"alpha": alpha.to_string(), "beta": beta.to_string(), "k": k, "n": n, "jb": jb.to_string(), "ja": ja.to_string(), "budget": budget}),
                json!({"x": found.witness}),
            )
            .counters(json!({"queries": found.scanned}))
            .exhausted(found.witness.is_none());
            if let Some(x) = found.witness {
                out = out.show("frac_alpha_x", frac(&alpha, x).value());
            }
            out
        }
        KronCmd::Ap { alpha, k, l } => {
            let found = ap_meets_set(&alpha, k, l, budget)?;
            let t = found.witness.map(|m| k * m + l);
            Outcome::new(
                "kron ap",
                json!({"alpha": alpha.to_string(), "k": k, "l": l, "budget": budget}),
                json!({"m": found.witness, "t": t}),
            )
            .counters(json!({"queries": found.scanned}))
            .exhausted(found.witness.is_none())
        }
    })
}

fn assignment(text: &str) -> Result<lang::Env> {
    let mut env = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || Error::Syntax {
            line: 1,
            column: 1,
            message: format!("expected name=value, found `{part}`"),
        };
        let (name, value) = part.split_once('=').ok_or_else(bad)?;
        env.insert(name.trim().to_string(), value.trim().parse().map_err(|_| bad())?);
    }
    Ok(env)
}

fn options(guided: bool, budget: u64) -> EvalOptions {
    EvalOptions {
        guided,
        budget: Some(budget),
    }
}

fn formula_cmd(c: FormulaCmd, budget: u64) -> Result<Outcome> {
    Ok(match c {
        FormulaCmd::Eval { common, assign } => {
            let f = lang::parse(&common.text)?;
            let env = assignment(&assign)?;
            let order = common.order.validate()?;
            let ev = lang::evaluate(&f, &env, &order, options(common.guided, budget))?;
            Outcome::new(
                "formula eval",
                json!({"order": common.order.to_string(), "text": f.to_string(), "assign": env, "guided": common.guided}),
                json!({"value": ev.value}),
            )
            .counters(json!({"atoms": ev.atoms, "bindings": ev.bindings, "expansion_cost": f.expansion_cost().to_string()}))
        }
        FormulaCmd::Set { common, window } => {
            let f = lang::parse(&common.text)?;
            let got = lang::extract_set(&f, window, &common.order, options(common.guided, budget))?;
            let rows = got.set.iter().map(|x| vec![x.to_string()]).collect();
            Outcome::new(
                "formula set",
                json!({"order": common.order.to_string(), "text": f.to_string(), "window": window.to_string(), "guided": common.guided}),
                json!({"variable": got.variable, "set": got.set}),
            )
            .counters(json!({"atoms": got.atoms}))
            .table(Table {
                header: vec!["x"],
                rows,
            })
        }
        FormulaCmd::Cmp {
            common,
            window,
            other_text,
            other_order,
        } => {
            let f = lang::parse(&common.text)?;
            let g = lang::parse(other_text.as_deref().unwrap_or(&common.text))?;
            let other = other_order.unwrap_or_else(|| common.order.clone());
            let out = lang::equal_on_window(&f, &g, window, &common.order, &other, options(common.guided, budget))?;
            Outcome::new(
                "formula cmp",
                json!({
                    "order": common.order.to_string(),
                    "text": f.to_string(),
                    "other_order": other.to_string(),
                    "other_text": g.to_string(),
                    "window": window.to_string(),
                    "guided": common.guided,
                }),
                json!({"equal": out.equal, "counterexample": out.counterexample, "variables": out.variables}),
            )
            .counters(json!({"checked": out.checked}))
        }
    })
}

fn run(cli: Cli) -> Result<Outcome> {
    let budget = cli.budget;
    match cli.command {
        Command::Eval(a) => eval_cmd(a),
        Command::Cover(c) => cover_cmd(c, budget),
        Command::Section(a) => section_cmd(a),
        Command::Classify(a) => classify_cmd(a, budget),
        Command::Winding(a) => winding_cmd(a),
        Command::Derived(c) => derived_cmd(c),
        Command::Normalize(a) => normalize_cmd(a),
        Command::Decompose(a) => decompose_cmd(a),
        Command::Kron(c) => kron_cmd(c, budget),
        Command::Formula(c) => formula_cmd(c, budget),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let csv = cli.csv;
    let start = Instant::now();
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("cycord: {e}");
            return ExitCode::from(match e {
                Error::BudgetExhausted(_) => 3,
                _ => 2,
            });
        }
    };
    let code = if outcome.exhausted { 3 } else { 0 };
    if csv {
        let Some(table) = &outcome.table else {
            eprintln!("cycord: `{}` has no tabular output; drop --csv", outcome.command);
            return ExitCode::from(2);
        };
        if let Err(e) = write_csv(table, std::io::stdout().lock()) {
            eprintln!("cycord: {e}");
            return ExitCode::from(2);
        }
        return ExitCode::from(code);
    }
    let report = outcome.into_report(start.elapsed().as_millis() as u64);
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    ExitCode::from(code)
}
