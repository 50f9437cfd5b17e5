mod common;

use common::*;
use liouville_core::catalog;
use liouville_core::expr::*;
use liouville_core::geometry::Metric2D;
use liouville_core::invariants::formula::{bundled, bundled_names, bundled_text};
use liouville_core::invariants::*;

fn beta_metric(beta: i64) -> Metric2D {
    let ctx = ParseContext::new("x", "y", &["beta"]);
    Metric2D::parse("exp((beta+2)*x)", "0", "exp(beta*x)", &ctx)
        .unwrap()
        .with_params(vec![("beta".into(), q(beta, 1))])
}

fn pinned() -> Box2 {
    catalog::find("beta-3").unwrap().bx
}

fn exact_values(m: &Metric2D, bx: &Box2, es: &[Expr], k: usize) -> Vec<GaussRational> {
    tester(m, bx)
        .values_at(k, es)
        .into_iter()
        .map(|r| r.unwrap().as_exact().unwrap().clone())
        .collect()
}

#[test]
fn beta_family_closed_forms_at_origin() {
    for beta in [3i64, 5, -1, 1, 6] {
        let m = beta_metric(beta);
        let fr = InvariantFrame::new(&m, 7).unwrap();
        let d = DerivedInvariants::new(&fr).unwrap();
        let b = q(beta, 1);
        let b2 = &b + &q(2, 1);
        let i3 = &(&b.pow(2).unwrap() * &b2.pow(2).unwrap()) * &q(1, 4);
        let j5 = &(&(&(&b.pow(6).unwrap() * &(&b - &q(1, 1))) * &(&b - &q(6, 1)))
            * &b2.pow(6).unwrap())
            * &q(1, 64);
        let j4 = &(&(&(&b.pow(10).unwrap() * &(&b - &q(1, 1))) * &b2.pow(9).unwrap())
            * &(&(&q(3, 1) * &b) + &q(22, 1)))
            * &q(1, 1024);
        for y in [q(1, 1), q(3, 2)] {
            let at = |e: &Expr| value(&m, e, q(0, 1), y.clone());
            assert_eq!(at(fr.get("I3").unwrap()), i3, "I3 beta={beta}");
            assert_eq!(at(&d.j5), j5, "J5 beta={beta}");
            assert_eq!(at(&d.j4), j4, "J4 beta={beta}");
        }
        let mut t = tester(&m, &pinned());
        assert_eq!(
            t.test(fr.get("I4b").unwrap()).state,
            TriState::Zero,
            "I4b beta={beta}"
        );
        assert_eq!(
            t.test(fr.get("I5d").unwrap()).state,
            TriState::Zero,
            "I5d beta={beta}"
        );
        assert_eq!(
            t.test(&fr.invariant_derivative(2, &fr.k)).state,
            TriState::Zero,
            "∇2 I2 beta={beta}"
        );
    }
}

#[test]
fn beta_three_reference_values() {
    let m = beta_metric(3);
    let fr = InvariantFrame::new(&m, 7).unwrap();
    let d = DerivedInvariants::new(&fr).unwrap();
    let at = |e: &Expr| value(&m, e, q(0, 1), q(1, 1));
    assert_eq!(at(fr.get("I3").unwrap()), q(225, 4));
    assert_eq!(at(&d.j5), q(-34171875, 32));
    assert_eq!(
        at(&d.j4),
        GaussRational::parse_compact("3575232421875/512").unwrap()
    );
}

#[test]
fn beta_one_values() {
    let m = beta_metric(1);
    let fr = InvariantFrame::new(&m, 7).unwrap();
    let d = DerivedInvariants::new(&fr).unwrap();
    let at = |e: &Expr| value(&m, e, q(0, 1), q(3, 2));
    assert_eq!(at(fr.get("I2").unwrap()), q(1, 2));
    assert_eq!(at(fr.get("I3").unwrap()), q(9, 4));
    assert_eq!(at(&d.j4), q(0, 1));
    assert_eq!(at(&d.j5), q(0, 1));
}

#[test]
fn surface_of_revolution_has_vanishing_odd_invariants() {
    let m = conformal("1 + x^2");
    let fr = InvariantFrame::new(&m, 5).unwrap();
    assert_zero(&m, fr.get("I4b").unwrap(), "I4b");
    assert_zero(&m, fr.get("I5d").unwrap(), "I5d");
    assert_nonzero(&m, fr.get("I3").unwrap(), "I3");
}

#[test]
fn flat_metric_has_vanishing_tower() {
    let m = conformal("1");
    let fr = InvariantFrame::new(&m, 6).unwrap();
    for n in fr.names() {
        assert_zero(&m, fr.get(&n).unwrap(), &n);
    }
    let fr = InvariantFrame::new(&m, 7).unwrap();
    let d = DerivedInvariants::new(&fr).unwrap();
    assert!(matches!(d.vs(), Err(InvariantError::Degenerate(_))));
    assert!(d.a_b().is_err());
    assert!(d.seventh_order_residuals(JFRAK_PAIRING_SIGN).is_err());
    let rep = identity_suite(&fr, &mut tester(&m, &Box2::default()));
    assert!(rep.degenerate);
    assert!(!rep.all_zero());
}

#[test]
fn frame_order_bounds_and_names() {
    let m = conformal("1 + x^2");
    assert_eq!(
        InvariantFrame::new(&m, 1).unwrap_err(),
        InvariantError::Order(1)
    );
    assert_eq!(
        InvariantFrame::new(&m, 8).unwrap_err(),
        InvariantError::Order(8)
    );
    let fr = InvariantFrame::new(&m, 4).unwrap();
    assert!(DerivedInvariants::new(&fr).is_err());
    assert_eq!(fr.names(), ["I2", "I3", "I4a", "I4b", "I4c"]);
    assert!(fr.get("I5a").is_none());
    assert!(matches!(fr.expect("I5a"), Err(InvariantError::Missing(_))));
    assert_eq!(invariant_names(7).len(), 2 + 3 + 4 + 5 + 6);
    assert_eq!(invariant_name(7, 5), "I7f");
    assert_eq!(order_of("I6c"), Some(6));
    assert_eq!(order_of("J4"), None);
}

#[test]
fn first_invariants_agree_with_definitions() {
    let m = conformal("1 + x^2 + x*y^2");
    let fr = InvariantFrame::new(&m, 4).unwrap();
    let k = m.gauss_curvature();
    assert_zero(&m, &(fr.get("I2").unwrap() - &k), "I2 = K");
    let g = m.grad(&k);
    assert_zero(&m, &(fr.get("I3").unwrap() - m.inner(&g, &g)), "I3 = |∇K|²");
    assert_zero(
        &m,
        &(fr.invariant_derivative(1, &fr.k) - fr.get("I3").unwrap()),
        "∇1 I2 = I3",
    );
    assert_zero(
        &m,
        &(fr.invariant_derivative(2, fr.get("I3").unwrap())
            - Expr::int(2) * fr.get("I4b").unwrap()),
        "∇2 I3",
    );
    assert!(fr.invariant_derivative(2, &Expr::int(5)).is_zero());
}

#[test]
fn bundled_formulas_match_their_checksums() {
    let names: Vec<&str> = bundled_names().collect();
    assert_eq!(names.len(), 10);
    for n in names {
        let f = bundled(n);
        assert_eq!(f.name, n);
        f.verify().unwrap();
        assert!(!f.terms.is_empty());
    }
}

#[test]
fn corrupted_formula_is_rejected() {
    let text = bundled_text("J5").unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let k = lines
        .iter()
        .position(|l| !l.starts_with('#') && !l.trim().is_empty())
        .unwrap();
    lines[k] = lines[k].replacen(' ', "1 ", 1);
    let bad = Formula::parse(&lines.join("\n")).unwrap();
    assert!(matches!(
        bad.verify(),
        Err(FormulaError::Checksum { what: "sha256", .. })
    ));
    lines.remove(k);
    let short = Formula::parse(&lines.join("\n")).unwrap();
    assert!(matches!(
        short.verify(),
        Err(FormulaError::Checksum {
            what: "term count",
            ..
        })
    ));
    assert!(matches!(
        Formula::parse("3 I2^0"),
        Err(FormulaError::Syntax { line: 1, .. })
    ));
    assert!(matches!(
        Formula::parse("x I2"),
        Err(FormulaError::Syntax { .. })
    ));
    assert!(matches!(
        Formula::parse("3 I2").unwrap().verify(),
        Err(FormulaError::Header { .. })
    ));
}

#[test]
fn formulas_are_homogeneous_under_rescaling() {
    let w = |n: &str| order_of(n).map(rescale_exponent).unwrap_or(0);
    let expect = [
        ("J4", -15),
        ("J5", -10),
        ("I6a_rel", -20),
        ("I6b_rel", -20),
        ("I6c_rel", -20),
        ("I6d_rel", -20),
        ("Jfrak1", -30),
        ("Jfrak2", -30),
        ("Jfrak3", -30),
        ("Jfrak4", -30),
    ];
    for (n, wt) in expect {
        assert_eq!(bundled(n).weight(w), Some(wt), "{n}");
    }
    // seventh-order formulas stop at I7e
    for n in ["Jfrak1", "Jfrak2", "Jfrak3", "Jfrak4"] {
        let s = bundled(n).symbols();
        assert!(!s.contains_key("I7f"));
        assert!(s.keys().all(|k| order_of(k).is_some_and(|o| o <= 7)));
    }
}

#[test]
fn identity_suite_on_random_conformal_metrics() {
    for f in random_conformal_factors(7, 3) {
        let m = conformal(&f);
        let fr = InvariantFrame::new(&m, 5).unwrap();
        let rep = identity_suite(&fr, &mut tester(&m, &Box2::default()));
        assert!(!rep.degenerate, "{f}");
        assert_eq!(rep.results.len(), 11);
        for r in &rep.results {
            assert_eq!(r.state, TriState::Zero, "{f}: {} {:?}", r.name, r.witness);
        }
    }
}

#[test]
fn identity_suite_on_diagonal_metric() {
    // squared entries keep sqrt(det g) exact at rational points
    let m = Metric2D::new(parse("(1 + x^2)^2"), Expr::zero(), parse("(2 + x + y^2)^2"));
    let fr = InvariantFrame::new(&m, 5).unwrap();
    let rep = identity_suite(&fr, &mut tester(&m, &Box2::default()));
    for r in &rep.results {
        assert_eq!(r.state, TriState::Zero, "{} {:?}", r.name, r.notes);
    }
    assert!(rep.all_zero());
}

#[test]
fn orientation_flip_changes_sign_of_odd_slots() {
    let m = conformal("1 + x^2 + x*y^2");
    let fr = InvariantFrame::new(&m, 6).unwrap();
    let fl = InvariantFrame::new(&m.flipped(), 6).unwrap();
    let names = fr.names();
    let a: Vec<Expr> = names.iter().map(|n| fr.get(n).unwrap().clone()).collect();
    let b: Vec<Expr> = names.iter().map(|n| fl.get(n).unwrap().clone()).collect();
    for k in 0..5 {
        let (va, vb) = (
            exact_values(&m, &Box2::default(), &a, k),
            exact_values(&m, &Box2::default(), &b, k),
        );
        for (j, n) in names.iter().enumerate() {
            let slot = n.chars().nth(2).map(|c| c as u8 - b'a').unwrap_or(0);
            let s = if slot % 2 == 0 { q(1, 1) } else { q(-1, 1) };
            assert_eq!(vb[j], &s * &va[j], "{n}");
        }
    }
}

#[test]
fn rescaling_multiplies_by_fixed_powers() {
    let m = conformal("2 + x^2 + y^3");
    let c = q(3, 1);
    let fr = InvariantFrame::new(&m, 6).unwrap();
    let sc = InvariantFrame::new(&m.scaled(&c), 6).unwrap();
    let names = fr.names();
    let a: Vec<Expr> = names.iter().map(|n| fr.get(n).unwrap().clone()).collect();
    let b: Vec<Expr> = names.iter().map(|n| sc.get(n).unwrap().clone()).collect();
    for k in 0..3 {
        let (va, vb) = (
            exact_values(&m, &Box2::default(), &a, k),
            exact_values(&m, &Box2::default(), &b, k),
        );
        for (j, n) in names.iter().enumerate() {
            assert_eq!(vb[j], &rescale_factor(n, &c).unwrap() * &va[j], "{n}");
        }
    }
    assert_eq!(rescale_exponent(2), -1);
    assert_eq!(rescale_exponent(7), -11);
}

#[test]
fn relations_vanish_for_three_integrals() {
    let m = conformal("x^2 + 4*y^2");
    let fr = InvariantFrame::new(&m, 7).unwrap();
    let d = DerivedInvariants::new(&fr).unwrap();
    assert_nonzero(&m, fr.get("I4b").unwrap(), "I4b");
    for (k, v) in d.vs().unwrap().iter().enumerate() {
        assert_zero(&m, v, &format!("V{}", k + 1));
    }
    let (a, b) = d.a_b().unwrap();
    assert_zero(&m, &a, "A");
    assert_zero(&m, &b, "B");
}

#[test]
fn main_relations_on_generic_liouville_metric() {
    let m = conformal("x^2 + y^3 + 1");
    let fr = InvariantFrame::new(&m, 7).unwrap();
    let d = DerivedInvariants::new(&fr).unwrap();
    assert_nonzero(&m, fr.get("I4b").unwrap(), "I4b");
    let (a, b) = d.a_b().unwrap();
    assert_nonzero(&m, &a, "A");
    assert_zero(&m, &d.modulus_difference().unwrap(), "|A|² − |B|²");
    let (r1, r2) = d.seventh_order_residuals(JFRAK_PAIRING_SIGN).unwrap();
    assert_zero(&m, &r1, "first");
    assert_zero(&m, &r2, "second");
    assert_nonzero(&m, &b, "B");
}

#[test]
fn a_and_b_vanish_together_with_the_vs() {
    // the map V -> (A, B) is invertible over the reals
    let m = conformal("x^2 + 2*y^2 + 3*x");
    let fr = InvariantFrame::new(&m, 7).unwrap();
    let d = DerivedInvariants::new(&fr).unwrap();
    let (a, b) = d.a_b().unwrap();
    let v = d.vs().unwrap();
    let vs_zero = v.iter().all(|e| zero_state(&m, e) == TriState::Zero);
    let ab_zero = zero_state(&m, &a) == TriState::Zero && zero_state(&m, &b) == TriState::Zero;
    assert_eq!(vs_zero, ab_zero);
    assert!(!vs_zero);
}
