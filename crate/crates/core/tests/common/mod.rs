#![allow(dead_code)]

use liouville_core::expr::*;
use liouville_core::geometry::Metric2D;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> GaussRational {
    GaussRational::from_ratio(n, d)
}

pub fn parse(s: &str) -> Expr {
    Expr::parse(s, &ParseContext::default()).unwrap()
}

pub fn conformal(f: &str) -> Metric2D {
    Metric2D::conformal(parse(f))
}

pub fn tester(m: &Metric2D, bx: &Box2) -> ZeroTester {
    ZeroTester::new(ZeroPolicy::default(), m.coord_names(), m.params.clone(), bx)
}

/// Exact zero test of `e` over the default box, with the metric's parameters.
pub fn zero_state(m: &Metric2D, e: &Expr) -> TriState {
    tester(m, &Box2::default()).test(e).state
}

#[track_caller]
pub fn assert_zero(m: &Metric2D, e: &Expr, what: &str) {
    let out = tester(m, &Box2::default()).test(e);
    assert_eq!(
        out.state,
        TriState::Zero,
        "{what}: {:?} {:?}",
        out.witness,
        out.notes
    );
}

#[track_caller]
pub fn assert_nonzero(m: &Metric2D, e: &Expr, what: &str) {
    assert_eq!(zero_state(m, e), TriState::Nonzero, "{what}");
}

pub fn value(m: &Metric2D, e: &Expr, x: GaussRational, y: GaussRational) -> GaussRational {
    let mut at = vec![("x".to_string(), x), ("y".to_string(), y)];
    at.extend(m.params.iter().cloned());
    let at: Vec<(&str, GaussRational)> = at.iter().map(|(n, v)| (n.as_str(), v.clone())).collect();
    evaluate(e, ["x", "y"], &at, Mode::Exact)
        .unwrap()
        .as_exact()
        .unwrap()
        .clone()
}

/// Polynomial conformal factors `1 + (..)^2 + ..`, positive on the plane.
pub fn random_conformal_factors(seed: u64, count: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mono = [
        "x", "y", "x*y", "x^2", "y^2", "x^2*y", "x*y^2", "y^3", "x^3",
    ];
    (0..count)
        .map(|_| {
            let mut s = format!("{}", rng.gen_range(1..5));
            for _ in 0..rng.gen_range(1..4) {
                let a: i64 = rng.gen_range(-3..4);
                let b: i64 = rng.gen_range(1..4);
                let m = mono[rng.gen_range(0..mono.len())];
                s += &format!(" + ({a}/{b} + {m})^2");
            }
            s
        })
        .collect()
}

/// Random polynomial in `x, y` of total degree at most 3, occasionally
/// divided by `1 + x^2`.
pub fn random_coefficient(rng: &mut ChaCha8Rng) -> Expr {
    let mut terms = Vec::new();
    for a in 0..=3i64 {
        for b in 0..=(3 - a) {
            if rng.gen_bool(0.4) {
                let c = Expr::rational(rng.gen_range(-5..6), rng.gen_range(1..4));
                terms.push(c * Expr::sym("x").pow(a) * Expr::sym("y").pow(b));
            }
        }
    }
    let p = Expr::add_all(terms);
    if rng.gen_bool(0.25) {
        p / parse("1 + x^2")
    } else {
        p
    }
}

pub fn random_momenta(
    rng: &mut ChaCha8Rng,
    max_degree: usize,
) -> liouville_core::symplectic::MomentaPolynomial {
    let n = rng.gen_range(0..=max_degree);
    liouville_core::symplectic::MomentaPolynomial::new(
        (0..=n).map(|_| random_coefficient(rng)).collect(),
    )
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
