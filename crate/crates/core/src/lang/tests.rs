use proptest::prelude::*;

use super::*;
use crate::cyclic::{eval_cyclic, CyclicOrderSpec};
use crate::exactnum::{Character, QuadSurd};

fn rot(text: &str) -> CyclicOrderSpec {
    CyclicOrderSpec::Rot(text.parse().unwrap())
}

fn env(pairs: &[(&str, i64)]) -> Env {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

const CORPUS: [&str; 50] = [
    "C(0, x, 1)",
    "C(0,1,2)",
    "C(x, y, z)",
    "C(-x, 2*y + 1, z - 3)",
    "C(x + y + z, x - y, 0)",
    "x = y",
    "x = 0",
    "2*x = y + 3",
    "x == 0 mod 2",
    "x ≡ 0 (mod 2)",
    "x + 1 == y mod 7",
    "x < y",
    "-x < 3*y - 4",
    "true",
    "false",
    "!true",
    "!C(0, x, 1)",
    "!(x = y)",
    "!!x < y",
    "C(0,x,1) & C(0,y,1)",
    "C(0,x,1) | C(0,y,1)",
    "C(0,x,1) -> C(0,y,1)",
    "a = a -> b = c -> d < e",
    "x = 1 & y = 2 | z = 3",
    "x = 1 | y = 2 & z = 3",
    "(x = 1 | y = 2) & z = 3",
    "x = 1 & y = 2 & z = 3",
    "x = 1 | (y = 2 | z = 3)",
    "!(x = 1 & y = 2)",
    "exists y in [-10,10]. C(x, y, x+1)",
    "forall y in [0, 5]. y < x",
    "exists y in [1,100]. C(1,y,2)",
    "exists x in [0,3]. exists y in [0,3]. x + y = 5",
    "forall x in [0,3]. exists y in [0,3]. x = y",
    "exists x in [-2,2]. x = 0 & C(0, x, 1)",
    "(exists x in [0,1]. x = 1) & (forall y in [0,1]. y < 2)",
    "exists x in [0,1]. x = 1 -> x = 2",
    "!exists x in [0,9]. x == 3 mod 5",
    "C((x), (y + 1), 2*(z - 1))",
    "(x + 1) = y",
    "(x) < (y)",
    "3*(x - y) == 0 mod 3",
    "x*3 = -y",
    "- - x = x",
    "x' = x_1",
    "exists x in [5, 1]. true",
    "forall x in [5, 1]. false",
    "C(0, x, 1)\n & x < 7",
    "x = 0 -> y = 0 -> z = 0",
    "((((x = 0))))",
];

#[test]
fn corpus_round_trips() {
    for text in CORPUS {
        let f = parse(text).unwrap_or_else(|e| panic!("{text}: {e}"));
        let printed = f.to_string();
        assert_eq!(parse(&printed).unwrap(), f, "{text} printed as {printed}");
    }
}

#[test]
fn grammar_shapes() {
    assert_eq!(
        parse("C(0, x, 1)").unwrap(),
        Formula::cyc(0, "x", 1)
    );
    let f = parse("exists y in [-10,10]. C(x, y, x+1)").unwrap();
    assert_eq!(f, Formula::exists("y", -10, 10, Formula::cyc("x", "y", Term::var("x") + 1.into())));
    assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), ["x"]);
    assert_eq!(
        parse("a = 0 -> b = 0 -> c = 0").unwrap(),
        Formula::eq("a", 0).implies(Formula::eq("b", 0).implies(Formula::eq("c", 0)))
    );
    assert_eq!(
        parse("a = 0 | b = 0 & c = 0").unwrap(),
        Formula::eq("a", 0).or(Formula::eq("b", 0).and(Formula::eq("c", 0)))
    );
    assert_eq!(parse("x ≡ 1 (mod 4)").unwrap(), parse("x == 1 mod 4").unwrap());
    assert_eq!(parse("2*x - x = 3*y - y*2").unwrap(), Formula::eq("x", "y"));
    assert_eq!(
        parse("exists x in [0,1]. x = 0 & y = 0").unwrap(),
        Formula::exists("x", 0, 1, Formula::eq("x", 0).and(Formula::eq("y", 0)))
    );
}

fn syntax_at(text: &str) -> (usize, usize) {
    match parse(text) {
        Err(Error::Syntax { line, column, .. }) => (line, column),
        other => panic!("{text}: expected a syntax error, got {other:?}"),
    }
}

#[test]
fn syntax_errors_carry_positions() {
    assert_eq!(syntax_at("C(0, x"), (1, 7));
    assert_eq!(syntax_at("x = "), (1, 5));
    assert_eq!(syntax_at("x = 1 &\n  y ="), (2, 6));
    assert_eq!(syntax_at("exists x. x = 0"), (1, 9));
    assert_eq!(syntax_at("x * y = 0"), (1, 3));
    assert_eq!(syntax_at("C = 0"), (1, 3));
    assert_eq!(syntax_at("x == 1 mod 0"), (1, 12));
    assert_eq!(syntax_at("x = 1 $"), (1, 7));
    assert_eq!(syntax_at("(x = 1"), (1, 7));
    assert_eq!(syntax_at("x = 1)"), (1, 6));
    assert!(matches!(parse_closed("C(0, x, 1)"), Err(Error::UnboundVariable(v)) if v == "x"));
    assert!(parse_closed("exists x in [0,2]. C(0, x, 1)").is_ok());
}

#[test]
fn evaluation_examples() {
    let t = |text: &str, spec: &CyclicOrderSpec| eval(&parse(text).unwrap(), &Env::new(), spec).unwrap();
    assert!(t("C(0,1,2)", &CyclicOrderSpec::Plus));
    assert!(!t("C(0,1,2)", &CyclicOrderSpec::Minus));
    assert!(t("exists y in [1,100]. C(1,y,2)", &rot("sqrt(2)")));
    assert!(!t("exists y in [1,100]. C(1,y,2)", &CyclicOrderSpec::Plus));
    assert!(t("forall x in [1,20]. !C(x,x,x)", &rot("sqrt(3)")));
    assert!(t("0 < 1 & 1 < -1 & !(-1 < 0)", &CyclicOrderSpec::Plus));
    assert!(t("7 == -3 mod 5 & !(7 == 3 mod 5)", &CyclicOrderSpec::Plus));
    assert!(matches!(
        eval(&parse("true").unwrap(), &Env::new(), &rot("1/2")),
        Err(Error::RationalAlpha(_))
    ));
    assert!(matches!(
        eval(&parse("x = 0").unwrap(), &Env::new(), &CyclicOrderSpec::Plus),
        Err(Error::UnboundVariable(_))
    ));
    let f = parse("C(x, y, z)").unwrap();
    assert!(eval(&f, &env(&[("x", 1), ("y", 2), ("z", 3)]), &CyclicOrderSpec::Plus).unwrap());
}

#[test]
fn exhaustive_cost_is_the_static_count() {
    let f = parse("exists x in [0,9]. forall y in [-2,2]. x + y = 3 | C(0, x, y)").unwrap();
    let order = rot("sqrt(2)").validate().unwrap();
    let full = evaluate(&f, &Env::new(), &order, EvalOptions::default()).unwrap();
    assert_eq!(u128::from(full.bindings), f.expansion_cost());
    assert_eq!(full.bindings, 10 * (1 + 5));
    let quick = evaluate(&f, &Env::new(), &order, EvalOptions::guided()).unwrap();
    assert_eq!(quick.value, full.value);
    assert!(quick.bindings <= full.bindings);
    let tight = EvalOptions {
        guided: false,
        budget: Some(5),
    };
    assert!(matches!(evaluate(&f, &Env::new(), &order, tight), Err(Error::BudgetExhausted(5))));
}

#[test]
fn guided_equation_solving() {
    let f = parse("exists q in [-100,100]. 3*q + 2 = x & C(0, q, 1)").unwrap();
    let order = rot("sqrt(2)").validate().unwrap();
    for x in -320..320 {
        let e = env(&[("x", x)]);
        let a = evaluate(&f, &e, &order, EvalOptions::default()).unwrap();
        let b = evaluate(&f, &e, &order, EvalOptions::guided()).unwrap();
        assert_eq!(a.value, b.value, "x = {x}");
        assert!(b.bindings <= 1);
    }
}

#[test]
fn extraction_fixture() {
    let spec = rot("sqrt(2)");
    let f = parse("C(0, x, 1)").unwrap();
    let got = extract_set(&f, Window::new(1, 10).unwrap(), &spec, EvalOptions::default()).unwrap();
    assert_eq!(got.set, [3, 5, 8, 10]);
    // oracle: frac(sqrt(2) x) < frac(sqrt(2))
    let chi = Character::new(QuadSurd::sqrt(2).unwrap());
    let direct: Vec<i64> = (1..=10).filter(|&x| chi.frac(x) < chi.frac(1)).collect();
    assert_eq!(direct, got.set);
    let even = extract_set(&parse("x ≡ 0 (mod 2)").unwrap(), Window::new(0, 6).unwrap(), &spec, EvalOptions::default()).unwrap();
    assert_eq!(even.set, [0, 2, 4, 6]);
    let none = extract_set(&parse("C(x,x,x)").unwrap(), Window::new(-5, 5).unwrap(), &spec, EvalOptions::default()).unwrap();
    assert!(none.set.is_empty());
    assert!(matches!(
        extract_set(&parse("x = y").unwrap(), Window::new(0, 1).unwrap(), &spec, EvalOptions::default()),
        Err(Error::Arity(_))
    ));
}

#[test]
fn window_comparisons() {
    let w = Window::new(-50, 50).unwrap();
    let f = parse("C(0, x, 1)").unwrap();
    let same = equal_on_window(&f, &f, w, &rot("sqrt(2)"), &rot("sqrt(2)+1"), EvalOptions::default()).unwrap();
    assert!(same.equal);
    assert_eq!(same.checked, 101);
    let diff = equal_on_window(&f, &f, w, &rot("sqrt(2)"), &rot("sqrt(3)"), EvalOptions::default()).unwrap();
    assert!(!diff.equal);
    let x = diff.counterexample.unwrap()[0];
    assert_ne!(
        eval_cyclic(&rot("sqrt(2)"), 0, x, 1).unwrap(),
        eval_cyclic(&rot("sqrt(3)"), 0, x, 1).unwrap()
    );
    assert!((-50..x).all(|y| eval_cyclic(&rot("sqrt(2)"), 0, y, 1).unwrap()
        == eval_cyclic(&rot("sqrt(3)"), 0, y, 1).unwrap()));
    let renamed = parse("C(0, t, 1)").unwrap();
    assert!(equal_on_window(&f, &renamed, w, &rot("sqrt(2)"), &rot("sqrt(2)"), EvalOptions::default()).unwrap().equal);
    let four = parse("C(a, b, c) & d = d").unwrap();
    assert!(matches!(
        equal_on_window(&four, &four, w, &rot("sqrt(2)"), &rot("sqrt(2)"), EvalOptions::default()),
        Err(Error::Arity(_))
    ));
}

#[test]
fn window_parsing() {
    assert_eq!("-50,50".parse::<Window>().unwrap(), Window { lo: -50, hi: 50 });
    assert_eq!("[1, 10]".parse::<Window>().unwrap(), Window { lo: 1, hi: 10 });
    assert!("3,1".parse::<Window>().is_err());
}

fn arb_term() -> impl Strategy<Value = Term> {
    (-20i64..20, proptest::collection::btree_map(prop_oneof!["x", "y", "z", "w'"], -5i64..5, 0..3)).prop_map(
        |(c, m)| {
            m.into_iter()
                .fold(Term::constant(c), |t, (v, k)| t + k * Term::var(&v))
        },
    )
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        any::<bool>().prop_map(Formula::Bool),
        (arb_term(), arb_term(), arb_term()).prop_map(|(a, b, c)| Formula::Cyc(a, b, c)),
        (arb_term(), arb_term()).prop_map(|(a, b)| Formula::Eq(a, b)),
        (arb_term(), arb_term(), 1u64..10).prop_map(|(a, b, n)| Formula::cong(a, b, n)),
        (arb_term(), arb_term()).prop_map(|(a, b)| Formula::Lt(a, b)),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
            (any::<bool>(), prop_oneof!["x", "y", "q"], -5i64..5, 0i64..4, inner).prop_map(
                |(e, v, lo, w, body)| if e {
                    Formula::exists(&v, lo, lo + w, body)
                } else {
                    Formula::forall(&v, lo, lo + w, body)
                }
            ),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_then_parse_is_identity(f in arb_formula()) {
        let printed = f.to_string();
        prop_assert_eq!(parse(&printed).unwrap(), f);
    }

    #[test]
    fn guided_agrees_with_full(f in arb_formula(), x in -6i64..6, y in -6i64..6, z in -6i64..6, w in -6i64..6) {
        let order = rot("sqrt(2)").validate().unwrap();
        let e = env(&[("x", x), ("y", y), ("z", z), ("w'", w)]);
        let a = evaluate(&f, &e, &order, EvalOptions::default()).unwrap();
        let b = evaluate(&f, &e, &order, EvalOptions::guided()).unwrap();
        prop_assert_eq!(a.value, b.value);
        prop_assert_eq!(u128::from(a.bindings), f.expansion_cost());
    }

    #[test]
    fn extraction_restricts(lo in -30i64..0, hi in 0i64..30, cut in -30i64..30) {
        let f = parse("exists y in [-3,3]. C(0, x + y, 2*x) & x == y mod 2").unwrap();
        let spec = rot("(1+sqrt(5))/2");
        let big = extract_set(&f, Window::new(lo, hi).unwrap(), &spec, EvalOptions::default()).unwrap();
        let cut = cut.clamp(lo, hi);
        let small = extract_set(&f, Window::new(lo, cut).unwrap(), &spec, EvalOptions::guided()).unwrap();
        let restricted: Vec<i64> = big.set.iter().copied().filter(|&v| v <= cut).collect();
        prop_assert_eq!(small.set, restricted);
    }
}
