mod common;

use common::*;
use liouville_core::catalog::g0_integrals;
use liouville_core::expr::*;
use liouville_core::geometry::{Metric2D, Signature};
use liouville_core::symplectic::*;

const XY: [&str; 2] = ["x", "y"];

fn pb(f: &MomentaPolynomial, g: &MomentaPolynomial) -> MomentaPolynomial {
    poisson_bracket(f, g, XY)
}

fn mp(cs: &[&str]) -> MomentaPolynomial {
    MomentaPolynomial::new(cs.iter().map(|s| parse(s)).collect())
}

#[test]
fn hamiltonian_examples() {
    assert!(hamiltonian(&conformal("1"))
        .sub(&mp(&["1", "0", "1"]))
        .is_exactly_zero());
    assert!(hamiltonian(&conformal("x"))
        .sub(&mp(&["1/x", "0", "1/x"]))
        .is_exactly_zero());
    let h = hamiltonian(&Metric2D::conformal(parse("exp(x*y)")));
    let fl = ZeroPolicy::float(256);
    for (c, e) in h.coeffs.iter().zip(["exp(-x*y)", "0", "exp(-x*y)"]) {
        let out = is_identically_zero(&(c - parse(e)), XY, vec![], &Box2::default(), &fl);
        assert_eq!(out.state, TriState::Zero);
    }
    let m = Metric2D::new(parse("2"), parse("1"), parse("1"));
    // inverse of [[2, 1], [1, 1]] is [[1, -1], [-1, 2]]
    assert!(hamiltonian(&m)
        .sub(&mp(&["1", "-2", "2"]))
        .is_exactly_zero());
}

#[test]
fn bracket_basics() {
    let h = hamiltonian(&conformal("1 + x^2"));
    assert!(pb(&h, &h).is_exactly_zero());
    // {p_x, x} = 1
    let x = MomentaPolynomial::new(vec![parse("x")]);
    let r = pb(&MomentaPolynomial::px(), &x);
    assert_eq!(r.degree(), 0);
    assert!(r.sub(&mp(&["1"])).is_exactly_zero());
    assert!(pb(&x, &MomentaPolynomial::new(vec![parse("y")])).is_literal_zero());
    assert_eq!(pb(&h, &mp(&["x", "y", "0", "1"])).degree(), 4);
}

#[test]
fn bracket_axioms_on_random_instances() {
    let mut r = rng(11);
    for _ in 0..25 {
        let (f, g, h) = (
            random_momenta(&mut r, 2),
            random_momenta(&mut r, 2),
            random_momenta(&mut r, 2),
        );
        assert!(
            pb(&f, &g).add(&pb(&g, &f)).is_exactly_zero(),
            "antisymmetry"
        );
        let jac = pb(&f, &pb(&g, &h))
            .add(&pb(&g, &pb(&h, &f)))
            .add(&pb(&h, &pb(&f, &g)));
        assert!(jac.is_exactly_zero(), "Jacobi");
        let leib = pb(&f, &g.mul(&h))
            .sub(&pb(&f, &g).mul(&h))
            .sub(&g.mul(&pb(&f, &h)));
        assert!(leib.is_exactly_zero(), "Leibniz");
        let k = Expr::rational(3, 2);
        let lin = pb(&f, &g.scale(&k).add(&g)).sub(&pb(&f, &g).scale(&(&k + Expr::one())));
        assert!(lin.is_exactly_zero(), "linearity");
    }
}

#[test]
fn g0_relations_hold_exactly() {
    let g0 = g0_integrals();
    for (name, r) in g0.relations() {
        assert!(r.is_exactly_zero(), "{name}");
    }
    // sanity: the relations are not vacuous
    assert!(!pb(&g0.k, &g0.f).is_exactly_zero());
    assert_eq!(g0.g.degree(), 2);
}

#[test]
fn first_integral_examples() {
    let g0 = g0_integrals();
    let mut t = tester(&g0.metric, &Box2::default());
    for (name, f) in [("H", &g0.h), ("K", &g0.k), ("F", &g0.f), ("G", &g0.g)] {
        assert_eq!(
            is_first_integral(&g0.metric, f, &mut t),
            TriState::Zero,
            "{name}"
        );
    }
    assert_eq!(
        is_first_integral(&g0.metric, &MomentaPolynomial::px(), &mut t),
        TriState::Nonzero
    );
    let flat = conformal("1");
    let mut t = tester(&flat, &Box2::default());
    assert_eq!(
        is_first_integral(&flat, &MomentaPolynomial::px(), &mut t),
        TriState::Zero
    );
    assert_eq!(
        is_first_integral(&flat, &mp(&["-y", "x"]), &mut t),
        TriState::Zero
    );
    assert_eq!(
        is_first_integral(&flat, &mp(&["y", "x"]), &mut t),
        TriState::Nonzero
    );
}

#[test]
fn pde_system_matches_direct_bracket() {
    let mut r = rng(5);
    for m in [
        conformal("1 + x^2 + y^3"),
        Metric2D::new(parse("2 + y^2"), parse("x"), parse("3 + x^2")),
    ] {
        let h = hamiltonian(&m);
        for n in 1..=4 {
            let sys = flow_pde_system(&m, n);
            assert_eq!(sys.equations.len(), n + 2);
            assert!(sys.equations.iter().all(|e| e.ops.len() == n + 1));
            let f = MomentaPolynomial::new((0..=n).map(|_| random_coefficient(&mut r)).collect());
            let direct = pb(&h, &f);
            let via = sys.apply(&f.coeffs);
            assert_eq!(direct.degree() + 1, via.len());
            for (a, b) in direct.coeffs.iter().zip(&via) {
                assert_zero(&m, &(a - b), &format!("n = {n}"));
            }
        }
    }
}

/// `2 e^λ dx dy` with `e^λ = L`; its Hamiltonian is `(2/L) p_x p_y`.
fn null_metric(l: &str) -> Metric2D {
    Metric2D::new(Expr::zero(), parse(l), Expr::zero()).with_signature(Signature::Lorentzian)
}

/// Checks `L * E_i = c * expected_i` with one constant `c` for all `i`.
fn assert_proportional(
    m: &Metric2D,
    sys: &PdeSystem,
    u: &[Expr],
    expected: &[(usize, Expr)],
    l: &Expr,
) {
    let got = sys.apply(u);
    let (i0, e0) = &expected[0];
    let c = simplify(&(l * &got[*i0] / e0)).unwrap();
    assert!(c.as_const().is_some(), "ratio not constant: {c}");
    for (i, e) in expected {
        assert_zero(m, &(l * &got[*i] - &c * e), &format!("E{}", i + 1));
    }
}

#[test]
fn system_in_null_coordinates_for_linear_integrals() {
    let ls = "1 + x^2 + y^2";
    let (m, l) = (null_metric(ls), parse(ls));
    let (lx, ly) = (l.partial("x") / &l, l.partial("y") / &l);
    let (u, v) = (parse("x^2*y + 3*y"), parse("x*y^2 - x"));
    let sys = flow_pde_system(&m, 1);
    let expected = [
        (0, u.partial("y")),
        (1, u.partial("x") + v.partial("y") + &u * &lx + &v * &ly),
        (2, v.partial("x")),
    ];
    assert_proportional(&m, &sys, &[u, v], &expected, &l);
}

#[test]
fn system_in_null_coordinates_for_quadratic_integrals() {
    let ls = "2 + x*y^2";
    let (m, l) = (null_metric(ls), parse(ls));
    let (lx, ly) = (l.partial("x") / &l, l.partial("y") / &l);
    let (u, v, w) = (parse("x^2*y + 3*y"), parse("x*y^2 - x"), parse("y^3 + x*y"));
    let sys = flow_pde_system(&m, 2);
    // the middle coefficient carries a factor 2
    let coeffs = [u.clone(), Expr::int(2) * &v, w.clone()];
    let two = Expr::int(2);
    let expected = [
        (0, u.partial("y")),
        (
            1,
            u.partial("x") + &two * v.partial("y") + &two * &u * &lx + &two * &v * &ly,
        ),
        (3, w.partial("x")),
    ];
    assert_proportional(&m, &sys, &coeffs, &expected, &l);
}

#[test]
fn system_in_null_coordinates_for_cubic_integrals() {
    let ls = "1 + x^2*y^2";
    let (m, l) = (null_metric(ls), parse(ls));
    let (lx, ly) = (l.partial("x") / &l, l.partial("y") / &l);
    let cs: Vec<Expr> = ["x^2*y + 3*y", "x*y^2 - x", "y^3 + x*y", "x^3 - y"]
        .iter()
        .map(|s| parse(s))
        .collect();
    let sys = flow_pde_system(&m, 3);
    let (u, v) = (&cs[0], &cs[1]);
    let expected = [
        (0, u.partial("y")),
        (
            1,
            u.partial("x") + v.partial("y") + Expr::int(3) * u * &lx + v * &ly,
        ),
        (4, cs[3].partial("x")),
    ];
    assert_proportional(&m, &sys, &cs, &expected, &l);
}

#[test]
fn multi_bracket_annihilates_killing_fields_of_the_plane() {
    let flat = conformal("1");
    let op = multi_bracket(&flow_pde_system(&flat, 1)).unwrap();
    assert_eq!(op.ops.len(), 2);
    for (u, v) in [("-y", "x"), ("1", "0"), ("0", "1")] {
        assert_zero(
            &flat,
            &op.apply(&[parse(u), parse(v)], XY),
            &format!("({u}, {v})"),
        );
    }
}

#[test]
fn multi_bracket_annihilates_killing_fields_of_the_sphere() {
    let s = conformal("4/(1 + x^2 + y^2)^2");
    let op = multi_bracket(&flow_pde_system(&s, 1)).unwrap();
    let fields = [
        ("-y", "x"),
        ("1 + x^2 - y^2", "2*x*y"),
        ("2*x*y", "1 - x^2 + y^2"),
    ];
    let mut t = tester(&s, &Box2::default());
    for (u, v) in fields {
        let f = mp(&[u, v]);
        // independently a Killing field: {H, u p_x + v p_y} = 0
        assert_eq!(
            is_first_integral(&s, &f, &mut t),
            TriState::Zero,
            "({u}, {v})"
        );
        assert_zero(&s, &op.apply(&f.coeffs, XY), &format!("({u}, {v})"));
    }
}

#[test]
fn multi_bracket_is_a_nontrivial_operator() {
    let m = conformal("1 + x^2 + y^3");
    let op = multi_bracket(&flow_pde_system(&m, 1)).unwrap();
    assert!(op.ops.iter().any(|o| !o.terms.is_empty()));
    let out = op.apply(&[parse("x*y"), parse("x^3")], XY);
    assert_nonzero(&m, &out, "generic pair");
}

#[test]
fn multi_bracket_beyond_degree_one_is_unsupported() {
    let m = conformal("1");
    for n in 2..=3 {
        assert_eq!(
            multi_bracket(&flow_pde_system(&m, n)).unwrap_err(),
            SymplecticError::Unsupported(n)
        );
    }
}

#[test]
fn scalar_operator_composition_follows_leibniz() {
    let a = {
        let mut o = ScalarOp::mult(parse("x"));
        o.terms.insert((1, 0), parse("y"));
        o
    };
    let b = {
        let mut o = ScalarOp::zero();
        o.terms.insert((0, 1), parse("x^2"));
        o
    };
    let ab = a.compose(&b, XY);
    let u = parse("x^3*y^2 + y");
    let direct = a.apply(&b.apply(&u, XY), XY);
    let m = conformal("1");
    assert_zero(&m, &(ab.apply(&u, XY) - direct), "composition");
    assert_eq!(ab.order(), 2);
}

#[test]
fn entries_serialization() {
    let f = mp(&["x", "0", "y^2"]);
    assert_eq!(
        f.to_entries(),
        vec![(2, 0, "x".to_string()), (0, 2, "y^2".to_string())]
    );
    assert_eq!(f.coeff(0, 2), parse("y^2"));
    assert!(f.coeff(1, 0).is_zero());
    assert_eq!(MomentaPolynomial::zero(2).to_string(), "0");
}
