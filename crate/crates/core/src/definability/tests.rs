use super::*;
use crate::cyclic::eval_cyclic;
use proptest::prelude::*;

fn surd(text: &str) -> QuadSurd {
    text.parse().unwrap()
}

#[test]
fn winding_examples() {
    let s2 = surd("sqrt(2)");
    assert_eq!(winding_count(&s2, 1, 3).unwrap(), 1);
    assert_eq!(winding_count(&s2, 0, 5).unwrap(), 0);
    assert_eq!(winding_count(&s2, 1, 2).unwrap(), 0);
    assert!(matches!(winding_count(&surd("1/3"), 1, 3), Err(Error::RationalAlpha(_))));
    assert!(matches!(winding_count(&s2, 1, 0), Err(Error::InvalidModulus)));
}

#[test]
fn interval_rn_examples() {
    let s2 = surd("sqrt(2)");
    assert!(in_interval_rn(&s2, 1, 1, 3).unwrap());
    for n in 1..8 {
        assert!(in_interval_rn(&s2, 0, 0, n).unwrap());
    }
    assert!(!in_interval_rn(&s2, 3, 2, 3).unwrap());
    assert!(matches!(
        in_interval_rn(&s2, 3, 3, 3),
        Err(Error::InvalidResidue { residue: 3, modulus: 3 })
    ));
}

#[test]
fn zero_interval_examples() {
    let a = surd("sqrt(2)-1");
    assert!(in_zero_interval(&a, 5, 1, 2).unwrap());
    assert!(!in_zero_interval(&a, 1, 1, 2).unwrap());
    for r in 1..=4 {
        assert!(in_zero_interval(&a, 0, r, 4).unwrap());
    }
    assert!(matches!(
        in_zero_interval(&surd("sqrt(2)"), 1, 1, 2),
        Err(Error::AlphaOutOfRange(_))
    ));
}

#[test]
fn shifted_examples() {
    let s2 = surd("sqrt(2)");
    assert!(!eval_shifted(&s2, 1, 2, 1, 2, 3).unwrap());
    assert!(eval_shifted(&s2, 1, 1, 1, 2, 3).unwrap());
    for (j, k, l) in [(0, 1, 2), (3, -4, 7), (5, 2, -9)] {
        assert_eq!(
            eval_shifted(&s2, 0, 1, j, k, l).unwrap(),
            eval_cyclic(&CyclicOrderSpec::Rot(s2.clone()), j, k, l).unwrap()
        );
    }
}

#[test]
fn scaled_examples() {
    let a = surd("sqrt(2)-1");
    assert!(eval_scaled(&a, 1, 2, 1, 2, 3).unwrap());
    assert_eq!(
        eval_scaled(&a, 3, 2, 0, 1, 2).unwrap(),
        direct::eval_scaled(&a, 3, 2, 0, 1, 2).unwrap()
    );
    assert!(matches!(eval_scaled(&a, 0, 2, 0, 1, 2), Err(Error::RationalAlpha(_))));
}

#[test]
fn x_set_examples() {
    let a = surd("sqrt(2)-1");
    assert!(x_set_member(&a, 0, 1, 2, 5).unwrap());
    for l in -5..=5 {
        assert!(!x_set_member(&a, 0, 0, 3, l).unwrap());
    }
    assert!(!x_set_member(&a, 1, 0, 2, 2).unwrap());
    assert!(matches!(
        x_set_member(&a, 1, 3, 2, 2),
        Err(Error::InvalidResidue { .. })
    ));
}

#[test]
fn shifted_and_scaled_agree_on_a_small_window() {
    let alphas = ["sqrt(2)", "(1+sqrt(5))/2", "sqrt(3)-1", "-sqrt(7)/3"];
    for alpha in alphas.map(surd) {
        for (m, n) in [(1, 2), (1, 3), (2, 3), (-1, 2), (5, 4)] {
            for j in -4..=4 {
                for k in -4..=4 {
                    for l in -4..=4 {
                        let got = eval_shifted(&alpha, m, n, j, k, l).unwrap();
                        let want = direct::eval_shifted(&alpha, m, n, j, k, l).unwrap();
                        assert_eq!(got, want, "shift {alpha} {m}/{n} ({j},{k},{l})");
                        let got = eval_scaled(&alpha, m, n, j, k, l).unwrap();
                        let want = direct::eval_scaled(&alpha, m, n, j, k, l).unwrap();
                        assert_eq!(got, want, "scale {alpha} {m}/{n} ({j},{k},{l})");
                    }
                }
            }
        }
    }
}

#[test]
fn wrap_criterion_agrees_with_probe() {
    for alpha in ["sqrt(2)-1", "(sqrt(5)-1)/2", "sqrt(3)-1"].map(surd) {
        for k in -6..=6 {
            for n in 1..=4u64 {
                for r in 0..=n {
                    if k != 0 && k * n as i64 + r as i64 == 0 {
                        // the arc [0, frac(k alpha) + alpha) closes up exactly: the
                        // pieces are disjoint yet the set is empty, not the union
                        assert!(x_set_wraps(&alpha, k, r, n).unwrap());
                        assert!((-50..=50).all(|l| !x_set_member(&alpha, k, r, n, l).unwrap()));
                        continue;
                    }
                    let arithmetic = !x_set_wraps(&alpha, k, r, n).unwrap() || k == 0 || r == 0;
                    let probe = x_sets_disjoint_probe(&alpha, k, r, n, DEFAULT_PROBE_WINDOW).unwrap();
                    assert_eq!(arithmetic, probe, "{alpha} k={k} r={r} n={n}");
                }
            }
        }
    }
}

fn alpha_strategy() -> impl Strategy<Value = QuadSurd> {
    (prop::sample::select(vec![2u32, 3, 5, 6, 7, 10, 11]), -20i64..20, 1i64..20, 1i64..6)
        .prop_map(|(d, p, q, r)| QuadSurd::new(p, q, d, r).unwrap())
}

fn unit_alpha_strategy() -> impl Strategy<Value = QuadSurd> {
    alpha_strategy().prop_map(|a| a.frac())
}

proptest! {
    #[test]
    fn winding_matches_direct(alpha in alpha_strategy(), l in -500i64..=500, n in 1u64..=12) {
        let w = winding_count(&alpha, l, n).unwrap();
        prop_assert_eq!(w, direct::winding_count(&alpha, l, n).unwrap());
        for r in 0..n {
            prop_assert_eq!(in_interval_rn(&alpha, l, r, n).unwrap(), r == w);
            prop_assert_eq!(
                in_interval_rn(&alpha, l, r, n).unwrap(),
                direct::in_interval_rn(&alpha, l, r, n).unwrap()
            );
        }
    }

    #[test]
    fn zero_interval_matches_direct(alpha in unit_alpha_strategy(), l in -300i64..=300, n in 1u64..=9) {
        for r in 0..=n {
            prop_assert_eq!(
                in_zero_interval(&alpha, l, r, n).unwrap(),
                direct::in_zero_interval(&alpha, l, r, n).unwrap()
            );
        }
    }

    #[test]
    fn x_set_matches_direct(alpha in unit_alpha_strategy(), k in -40i64..=40, l in -200i64..=200, n in 1u64..=6) {
        for r in 0..=n {
            prop_assert_eq!(
                x_set_member(&alpha, k, r, n, l).unwrap(),
                direct::x_set_member(&alpha, k, r, n, l).unwrap()
            );
        }
    }

    #[test]
    fn derived_orders_match_direct(
        alpha in alpha_strategy(), m in -6i64..=6, n in 1u64..=6,
        j in -60i64..=60, k in -60i64..=60, l in -60i64..=60,
    ) {
        prop_assert_eq!(
            eval_shifted(&alpha, m, n, j, k, l).unwrap(),
            direct::eval_shifted(&alpha, m, n, j, k, l).unwrap()
        );
        if m != 0 {
            prop_assert_eq!(
                eval_scaled(&alpha, m, n, j, k, l).unwrap(),
                direct::eval_scaled(&alpha, m, n, j, k, l).unwrap()
            );
        }
    }
}
