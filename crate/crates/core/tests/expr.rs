use liouville_core::expr::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn ctx() -> ParseContext {
    ParseContext::default()
}

fn p(s: &str) -> Expr {
    Expr::parse(s, &ctx()).unwrap()
}

fn pb(s: &str) -> Expr {
    Expr::parse(s, &ParseContext::new("x", "y", &["b", "beta"])).unwrap()
}

fn q(n: i64, d: i64) -> GaussRational {
    GaussRational::from_ratio(n, d)
}

fn exact(e: &Expr, at: &[(&str, GaussRational)]) -> Result<GaussRational, EvalError> {
    evaluate(e, ["x", "y"], at, Mode::Exact).map(|s| s.as_exact().unwrap().clone())
}

fn float(e: &Expr, at: &[(&str, GaussRational)]) -> (f64, f64) {
    evaluate(e, ["x", "y"], at, Mode::Float { prec: 256 })
        .unwrap()
        .to_f64_pair()
}

fn same_rational_function(a: &Expr, b: &Expr) -> bool {
    to_ratfunc(&(a - b), &["x", "y"]).unwrap().is_zero()
}

#[test]
fn parses_product_of_power_and_symbol() {
    let e = p("x^2*y");
    assert_eq!(e.to_string(), "x^2*y");
    assert!(same_rational_function(
        &e,
        &(Expr::sym("x").pow(2) * Expr::sym("y"))
    ));
}

#[test]
fn parses_exponential_with_parameter() {
    let e = pb("exp((b+2)*x)");
    assert!(matches!(e.node(), Node::Apply(Func::Exp, _)));
    let at = [("x", q(0, 1)), ("y", q(1, 1)), ("b", q(3, 1))];
    assert_eq!(exact(&e, &at).unwrap(), q(1, 1));
}

#[test]
fn parse_errors() {
    assert!(Expr::parse("1/0", &ctx()).is_err());
    let err = Expr::parse("x + z", &ctx()).unwrap_err();
    assert!(err.message.contains('z'));
    let err = Expr::parse("x + * y", &ctx()).unwrap_err();
    assert_eq!(err.pos, 4);
    assert!(Expr::parse("(x + y", &ctx()).is_err());
    assert!(Expr::parse("x^y", &ctx()).is_err());
}

#[test]
fn literals_and_imaginary_unit() {
    let e = p("3/4 + 2*i");
    assert_eq!(
        e.as_const(),
        Some(&GaussRational::new(
            BigRational::new(3.into(), 4.into()),
            BigRational::from_integer(2.into())
        ))
    );
    assert_eq!(exact(&p("i^2"), &[]).unwrap(), q(-1, 1));
}

#[test]
fn printer_output_reparses() {
    for s in [
        "x^2*y - 3/2*y^3",
        "exp(-x)/(1 + y^2)",
        "sqrt(x^2 + 1)*cos(y) - sin(x*y)",
        "log(x)^3",
        "(1 + 2*i)*x",
        "-x^-2",
    ] {
        let e = p(s);
        let back = p(&e.to_string());
        let at = [("x", q(3, 2)), ("y", q(5, 7))];
        assert_eq!(float(&e, &at), float(&back, &at), "{s}");
    }
}

#[test]
fn differentiate_examples() {
    let d = p("x^2*y").differentiate("x", 1);
    assert!(same_rational_function(&d, &p("2*x*y")));
    let d = pb("exp(beta*x)").differentiate("x", 3);
    let at = [("x", q(0, 1)), ("y", q(1, 1)), ("beta", q(5, 1))];
    assert_eq!(exact(&d, &at).unwrap(), q(125, 1));
    let d = p("log(x)").differentiate("x", 2);
    assert!(same_rational_function(&d, &p("-1/x^2")));
    assert_eq!(p("x*y").differentiate("y", 0), p("x*y"));
}

#[test]
fn evaluate_examples() {
    let at = [("x", q(0, 1)), ("y", q(1, 1)), ("beta", q(3, 1))];
    assert_eq!(exact(&pb("exp(beta*x)*x^2"), &at).unwrap(), q(0, 1));
    let j5 = pb("1/64*beta^6*(beta - 1)*(beta - 6)*(2 + beta)^6");
    assert_eq!(exact(&j5, &[("beta", q(1, 1))]).unwrap(), q(0, 1));
    assert!(matches!(
        exact(&p("exp(x)"), &[("x", q(1, 1))]),
        Err(EvalError::Inexact(_))
    ));
    assert_eq!(exact(&p("sqrt(x)"), &[("x", q(9, 4))]).unwrap(), q(3, 2));
    assert_eq!(
        exact(
            &p("log(x) + cos(y) + sin(y)"),
            &[("x", q(1, 1)), ("y", q(0, 1))]
        )
        .unwrap(),
        q(1, 1)
    );
    assert_eq!(
        exact(&p("1/(x - 1)"), &[("x", q(1, 1))]),
        Err(EvalError::DivisionByZero)
    );
    assert!(matches!(
        exact(&p("x + y"), &[("x", q(1, 1))]),
        Err(EvalError::Unassigned(_))
    ));
}

#[test]
fn float_mode_agrees_with_exact() {
    let e = p("(x^3 - 2*x*y)/(1 + y^2) + i*x");
    let at = [("x", q(7, 3)), ("y", q(-2, 5))];
    let ex = exact(&e, &at).unwrap().to_f64_pair();
    let fl = float(&e, &at);
    assert!((ex.0 - fl.0).abs() < 1e-12 && (ex.1 - fl.1).abs() < 1e-12);
    let (e1, _) = float(&p("exp(x)"), &[("x", q(1, 1))]);
    assert!((e1 - std::f64::consts::E).abs() < 1e-14);
}

#[test]
fn zero_tests() {
    let policy = ZeroPolicy::default();
    let bx = Box2::default();
    let z = |s: &str| is_identically_zero(&p(s), ["x", "y"], vec![], &bx, &policy).state;
    assert_eq!(z("(x+y)^2 - x^2 - 2*x*y - y^2"), TriState::Zero);
    assert_eq!(z("x^2 - y"), TriState::Nonzero);
    assert_eq!(z("sin(x)^2 + cos(x)^2 - 1"), TriState::Undecided);
    let fl = ZeroPolicy::float(256);
    let out = is_identically_zero(&p("sin(x)^2 + cos(x)^2 - 1"), ["x", "y"], vec![], &bx, &fl);
    assert_eq!(out.state, TriState::Zero);
    let out = is_identically_zero(
        &p("exp(x)*exp(y) - exp(x + y)"),
        ["x", "y"],
        vec![],
        &bx,
        &fl,
    );
    assert_eq!(out.state, TriState::Zero);
    let out = is_identically_zero(&p("exp(x) - 1 - x"), ["x", "y"], vec![], &bx, &fl);
    assert_eq!(out.state, TriState::Nonzero);
    assert!(out.witness.is_some());
}

#[test]
fn zero_test_rejects_singular_points() {
    // 1/(x - y) is singular on the diagonal only; the sampler still finds 7 points
    let policy = ZeroPolicy::default();
    let e = p("(x^2 - y^2)/(x - y) - x - y");
    let out = is_identically_zero(&e, ["x", "y"], vec![], &Box2::default(), &policy);
    assert_eq!(out.state, TriState::Zero);
    assert_eq!(out.admissible, policy.samples);
    // singular everywhere: undecided after bounded redraws
    let out = is_identically_zero(
        &p("1/(x - x)"),
        ["x", "y"],
        vec![],
        &Box2::default(),
        &policy,
    );
    assert_eq!(out.state, TriState::Undecided);
}

#[test]
fn zero_test_is_deterministic_in_seed() {
    let e = p("x^3 - y^2");
    let pol = ZeroPolicy::default();
    let a = is_identically_zero(&e, ["x", "y"], vec![], &Box2::default(), &pol);
    let b = is_identically_zero(&e, ["x", "y"], vec![], &Box2::default(), &pol);
    assert_eq!(
        a.witness.map(|w| w.0.to_string()),
        b.witness.map(|w| w.0.to_string())
    );
}

#[test]
fn pinned_box_samples_on_a_line() {
    let bx = Box2::new(
        (
            BigRational::from_integer(BigInt::from(0)),
            BigRational::from_integer(BigInt::from(0)),
        ),
        (
            BigRational::from_integer(BigInt::from(1)),
            BigRational::from_integer(BigInt::from(2)),
        ),
    );
    assert!(bx.is_valid());
    let t = ZeroTester::new(ZeroPolicy::default(), ["x", "y"], vec![], &bx);
    assert!(t
        .points()
        .iter()
        .all(|pt| pt.x == BigRational::from_integer(BigInt::from(0))));
    let both = Box2::new(bx.x.clone(), bx.x.clone());
    assert!(!both.is_valid());
}

#[test]
fn simplify_examples() {
    let a = simplify(&p("(x^2 - y^2)/(x - y)")).unwrap();
    assert_eq!(a, simplify(&p("y + x")).unwrap());
    assert_eq!(simplify(&p("x/x - 1")).unwrap(), Expr::zero());
    let t = simplify(&p("exp(x)*(1 + y) - exp(x)*y")).unwrap();
    assert_eq!(t, simplify(&p("exp(x)")).unwrap());
    let inner = simplify(&p("sin((x^2 - 1)/(x - 1))")).unwrap();
    assert_eq!(inner, simplify(&p("sin(x + 1)")).unwrap());
}

#[test]
fn lazy_and_eager_derivatives_agree() {
    let e = p("exp(x*y)/(1 + x^2) + sqrt(1 + y^2)*log(x)");
    let at = [("x", q(3, 2)), ("y", q(2, 3))];
    for (nx, ny) in [(1, 0), (0, 2), (2, 1), (3, 2)] {
        let eager = e.differentiate("x", nx).differentiate("y", ny);
        let lazy = e.deriv_node("x", nx).deriv_node("y", ny);
        let (a, b) = (float(&eager, &at), float(&lazy, &at));
        assert!(
            (a.0 - b.0).abs() <= 1e-12 * a.0.abs().max(1.0),
            "{nx},{ny}: {a:?} {b:?}"
        );
    }
    let r = p("x^3*y^2/(1 + x*y)");
    let jet = evaluate_jet(&r, ["x", "y"], &[("x", q(1, 2)), ("y", q(2, 1))], 4).unwrap();
    let d = exact(
        &r.differentiate("x", 2).differentiate("y", 1),
        &[("x", q(1, 2)), ("y", q(2, 1))],
    )
    .unwrap();
    // jet coefficients are Taylor coefficients: d / (2! 1!)
    assert_eq!(jet.coeff(2, 1), &(&d * &q(1, 2)));
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::sym("x")),
        Just(Expr::sym("y")),
        (-4i64..5, 1i64..4).prop_map(|(n, d)| Expr::rational(n, d)),
    ]
}

fn rational_tree() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / (b.pow(2) + Expr::one())),
            (inner.clone(), 0i64..4).prop_map(|(a, k)| a.pow(k)),
        ]
    })
}

fn transcendental_tree() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / (b.pow(2) + Expr::one())),
            inner.clone().prop_map(|a| (a / Expr::int(4)).sin()),
            inner.clone().prop_map(|a| (a / Expr::int(4)).cos()),
            inner.clone().prop_map(|a| (a.pow(2) + Expr::one()).log()),
            inner.clone().prop_map(|a| (a.pow(2) + Expr::one()).sqrt()),
            inner.prop_map(|a| (&a / (a.pow(2) + Expr::one())).exp()),
        ]
    })
}

fn point() -> impl Strategy<Value = (GaussRational, GaussRational)> {
    ((-9i64..10, 1i64..7), (-9i64..10, 1i64..7)).prop_map(|((a, b), (c, d))| (q(a, b), q(c, d)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn printed_trees_reparse_to_equal_functions(e in rational_tree()) {
        let back = p(&e.to_string());
        prop_assert!(same_rational_function(&e, &back));
    }

    #[test]
    fn simplify_is_canonical(e in rational_tree(), f in leaf()) {
        let a = simplify(&e).unwrap();
        // same function, different tree
        let b = simplify(&((&e * (&f.pow(2) + Expr::one()) + Expr::sym("y") - Expr::sym("y")) / (&f.pow(2) + Expr::one()))).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&simplify(&a).unwrap(), &a);
    }

    #[test]
    fn derivative_is_linear_with_product_rule(e in rational_tree(), f in rational_tree(), (px, py) in point()) {
        let at = [("x", px), ("y", py)];
        let d = |t: &Expr| t.differentiate("x", 1);
        let lin = d(&(Expr::int(3) * &e + &f)) - (Expr::int(3) * d(&e) + d(&f));
        let prod = d(&(&e * &f)) - (d(&e) * &f + &e * d(&f));
        prop_assert_eq!(exact(&lin, &at).unwrap(), q(0, 1));
        prop_assert_eq!(exact(&prod, &at).unwrap(), q(0, 1));
    }

    #[test]
    fn derivative_matches_divided_differences(e in transcendental_tree(), (px, py) in point()) {
        let h = q(1, 100_000_000);
        let d = float(&e.differentiate("x", 1), &[("x", px.clone()), ("y", py.clone())]);
        let up = float(&e, &[("x", &px + &h), ("y", py.clone())]);
        let dn = float(&e, &[("x", &px - &h), ("y", py.clone())]);
        let fd = (up.0 - dn.0) / 2e-8;
        // f64 rounding of the two values limits the difference quotient
        let tol = 1e-6 * d.0.abs().max(1.0) + 4.0 * f64::EPSILON * up.0.abs().max(dn.0.abs()) / 2e-8;
        prop_assert!((fd - d.0).abs() <= tol, "{} vs {}", fd, d.0);
    }

    #[test]
    fn evaluation_of_derivative_is_deterministic(e in transcendental_tree(), (px, py) in point()) {
        let at = [("x", px), ("y", py)];
        let a = float(&e.differentiate("y", 2), &at);
        let b = float(&e.deriv_node("y", 2), &at);
        prop_assert!((a.0 - b.0).abs() <= 1e-12 * a.0.abs().max(1.0));
        prop_assert_eq!(a, float(&e.differentiate("y", 2), &at));
    }
}
