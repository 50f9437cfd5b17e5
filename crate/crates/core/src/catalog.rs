//! Named example metrics with known answers. The catalog doubles as the
//! regression suite of `liouville examples run --all`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::expr::{Box2, Expr, GaussRational, ParseContext, ZeroPolicy};
use crate::geometry::Metric2D;
use crate::mobility::Domain;
use crate::oracle::AnsatzSpec;
use crate::symplectic::{hamiltonian, poisson_bracket, MomentaPolynomial};

/// Oracle run with the dimension it should reach.
#[derive(Clone, Debug)]
pub struct OracleCheck {
    pub degree: usize,
    pub spec: AnsatzSpec,
    pub expected: usize,
}

#[derive(Clone, Debug)]
pub struct Example {
    pub name: String,
    pub summary: String,
    pub g11: String,
    pub g12: String,
    pub g22: String,
    pub params: Vec<(String, GaussRational)>,
    pub bx: Box2,
    /// `(dim J1, dim J2)`.
    pub expected: (u8, u8),
    pub oracle: Vec<OracleCheck>,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn gq(n: i64, d: i64) -> GaussRational {
    GaussRational::from_ratio(n, d)
}

impl Example {
    fn conformal(name: &str, summary: &str, f: &str, expected: (u8, u8)) -> Self {
        Example {
            name: name.into(),
            summary: summary.into(),
            g11: f.into(),
            g12: "0".into(),
            g22: f.into(),
            params: Vec::new(),
            bx: Box2::default(),
            expected,
            oracle: Vec::new(),
        }
    }

    fn with_params(mut self, ps: &[(&str, GaussRational)]) -> Self {
        self.params = ps.iter().map(|(n, v)| (n.to_string(), v.clone())).collect();
        self
    }

    fn with_oracle(mut self, degree: usize, spec: AnsatzSpec, expected: usize) -> Self {
        self.oracle.push(OracleCheck {
            degree,
            spec,
            expected,
        });
        self
    }

    pub fn metric(&self) -> Metric2D {
        let names: Vec<&str> = self.params.iter().map(|(n, _)| n.as_str()).collect();
        let ctx = ParseContext::new("x", "y", &names);
        Metric2D::parse(&self.g11, &self.g12, &self.g22, &ctx)
            .expect("catalog entries parse")
            .with_params(self.params.clone())
    }

    pub fn domain(&self) -> Domain {
        Domain {
            bx: self.bx.clone(),
            policy: ZeroPolicy::default(),
        }
    }
}

/// Box seen by the pulled-back metric under `(x, y) -> (a x + b, c y + d)`.
pub fn pullback_box(
    bx: &Box2,
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    d: &BigRational,
) -> Box2 {
    let inv = |(lo, hi): &(BigRational, BigRational), s: &BigRational, t: &BigRational| {
        let (u, v) = ((lo - t) / s, (hi - t) / s);
        if u <= v {
            (u, v)
        } else {
            (v, u)
        }
    };
    Box2::new(inv(&bx.x, a, b), inv(&bx.y, c, d))
}

/// Exact evaluation of `exp` is only possible at 0, so exponential forms
/// sample along `x = 0`.
fn pinned_box() -> Box2 {
    Box2::new((q(0, 1), q(0, 1)), (q(1, 1), q(2, 1)))
}

fn beta_exp(beta: i64, expected: (u8, u8)) -> Example {
    let name = if beta < 0 {
        format!("beta-m{}", -beta)
    } else {
        format!("beta-{beta}")
    };
    Example {
        name,
        summary: format!("exp((beta+2)x) dx^2 + exp(beta x) dy^2 with beta = {beta}"),
        g11: "exp((beta+2)*x)".into(),
        g12: "0".into(),
        g22: "exp(beta*x)".into(),
        params: Vec::new(),
        bx: pinned_box(),
        expected,
        oracle: Vec::new(),
    }
    .with_params(&[("beta", gq(beta, 1))])
}

fn q2(name: &str, a: GaussRational, b: i64, c: i64, expected: u8) -> Example {
    let summary = format!("(x^2 + a y^2 + b y + c)(dx^2 + dy^2) with (a, b, c) = ({a}, {b}, {c})");
    Example::conformal(name, &summary, "x^2 + a*y^2 + b*y + c", (0, expected)).with_params(&[
        ("a", a),
        ("b", gq(b, 1)),
        ("c", gq(c, 1)),
    ])
}

/// Every catalog metric.
pub fn catalog() -> Vec<Example> {
    let mut q2_six = q2("q2-a1-b0-c0", gq(1, 1), 0, 0, 6);
    q2_six.expected = (3, 6);
    // a = 1 keeps the rotations
    let mut q2_four = q2("q2-a1-b0-c1", gq(1, 1), 0, 1, 4);
    q2_four.expected = (1, 4);
    let g0_spec = AnsatzSpec::box_range((-2, 2), (0, 4));
    vec![
        Example::conformal("flat", "dx^2 + dy^2", "1", (3, 6))
            .with_oracle(1, AnsatzSpec::polynomial(1), 3)
            .with_oracle(2, AnsatzSpec::polynomial(2), 6)
            .with_oracle(3, AnsatzSpec::polynomial(3), 10)
            .with_oracle(4, AnsatzSpec::polynomial(4), 15),
        Example::conformal(
            "sphere",
            "round sphere in stereographic coordinates",
            "4/(1 + x^2 + y^2)^2",
            (3, 6),
        ),
        beta_exp(-2, (3, 6)),
        beta_exp(1, (1, 4)),
        beta_exp(3, (1, 2)),
        beta_exp(6, (1, 2)),
        Example::conformal(
            "beta-3-rational",
            "x^3 (dx^2 + dy^2), the beta = 3 metric after x -> log x",
            "x^3",
            (1, 2),
        )
        .with_oracle(2, AnsatzSpec::box_range((-3, 2), (0, 2)), 2),
        Example::conformal("beta-6-rational", "x^6 (dx^2 + dy^2)", "x^6", (1, 2)).with_oracle(
            2,
            AnsatzSpec::box_range((-6, 2), (0, 2)),
            2,
        ),
        Example::conformal(
            "g0",
            "x (dx^2 + dy^2), four quadratic integrals",
            "x",
            (1, 4),
        )
        .with_oracle(2, g0_spec.clone(), 4)
        .with_oracle(3, g0_spec.clone(), 4)
        .with_oracle(4, g0_spec.clone(), 9)
        .with_oracle(5, g0_spec, 9),
        q2_six,
        q2_four,
        q2("q2-a4-b0-c0", gq(4, 1), 0, 0, 3),
        q2("q2-a1/4-b1-c1", gq(1, 4), 1, 1, 3),
        q2("q2-a2-b0-c0", gq(2, 1), 0, 0, 2),
        Example::conformal(
            "liouville-cubic",
            "(x^2 + y^3 + 1)(dx^2 + dy^2), generic Liouville",
            "x^2 + y^3 + 1",
            (0, 2),
        ),
        Example::conformal(
            "non-liouville",
            "(1 + x^2 y + x y^3)(dx^2 + dy^2)",
            "1 + x^2*y + x*y^3",
            (0, 1),
        ),
        Example::conformal("beta-2-rational", "x^2 (dx^2 + dy^2)", "x^2", (1, 2)).with_oracle(
            2,
            AnsatzSpec::box_range((-2, 2), (0, 2)),
            2,
        ),
    ]
}

pub fn find(name: &str) -> Option<Example> {
    catalog().into_iter().find(|e| e.name == name)
}

/// `H`, `K`, `F`, `G` for `g0 = x (dx^2 + dy^2)`.
pub struct G0Integrals {
    pub metric: Metric2D,
    pub h: MomentaPolynomial,
    pub k: MomentaPolynomial,
    pub f: MomentaPolynomial,
    pub g: MomentaPolynomial,
}

pub fn g0_integrals() -> G0Integrals {
    let metric = Metric2D::conformal(Expr::sym("x"));
    let (x, y) = (Expr::sym("x"), Expr::sym("y"));
    let h = hamiltonian(&metric);
    let k = MomentaPolynomial::py();
    let px = MomentaPolynomial::px();
    let f = h.scale(&y).sub(&px.mul(&k).scale(&Expr::int(2)));
    let rot = px.scale(&y).sub(&k.scale(&x));
    let g = h.scale(&y.pow(2)).sub(&rot.mul(&k).scale(&Expr::int(4)));
    G0Integrals { metric, h, k, f, g }
}

impl G0Integrals {
    /// Residuals of `{K,F} = H`, `{K,G} = 2F`, `{G,F} = 16K³`, `HG − F² = 4K⁴`.
    pub fn relations(&self) -> Vec<(&'static str, MomentaPolynomial)> {
        let c = self.metric.coord_names();
        let (h, k, f, g) = (&self.h, &self.k, &self.f, &self.g);
        vec![
            ("{K,F} = H", poisson_bracket(k, f, c).sub(h)),
            (
                "{K,G} = 2F",
                poisson_bracket(k, g, c).sub(&f.scale(&Expr::int(2))),
            ),
            (
                "{G,F} = 16K^3",
                poisson_bracket(g, f, c).sub(&k.pow(3).scale(&Expr::int(16))),
            ),
            (
                "HG - F^2 = 4K^4",
                h.mul(g).sub(&f.pow(2)).sub(&k.pow(4).scale(&Expr::int(4))),
            ),
        ]
    }
}
