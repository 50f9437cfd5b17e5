use std::fmt::{self, Write};

use num_traits::{One, Signed, Zero};

use super::{Expr, GaussRational, Node};

const ADD: u8 = 1;
const NEG: u8 = 2;
const MUL: u8 = 3;
const POW: u8 = 4;
const ATOM: u8 = 5;

fn const_prec(q: &GaussRational) -> u8 {
    match (q.re.is_zero(), q.im.is_zero()) {
        (_, true) if q.re.is_negative() => NEG,
        (_, true) if q.re.denom().is_one() => ATOM,
        (_, true) => MUL,
        (true, false) if q.im.is_negative() => NEG,
        (true, false) if q.im.is_one() => ATOM,
        (true, false) => MUL,
        (false, false) => ADD,
    }
}

fn prec(e: &Expr) -> u8 {
    match e.node() {
        Node::Const(q) => const_prec(q),
        Node::Sym(_) | Node::Apply(..) | Node::Deriv(..) => ATOM,
        Node::Pow(..) => POW,
        Node::Mul(v) => match v[0].as_const() {
            Some(q) if q.is_real() && q.re.is_negative() => NEG,
            _ => MUL,
        },
        Node::Div(..) => MUL,
        Node::Add(_) => ADD,
    }
}

/// If `e` prints with a leading minus, returns its negation.
fn negated(e: &Expr) -> Option<Expr> {
    match e.node() {
        Node::Const(q) if q.is_real() && q.re.is_negative() => Some(Expr::constant(-q)),
        Node::Const(q) if q.re.is_zero() && q.im.is_negative() => Some(Expr::constant(-q)),
        Node::Mul(v) => match v[0].as_const() {
            Some(q) if q.is_real() && q.re.is_negative() => {
                let mut rest = v.clone();
                rest[0] = Expr::constant(-q);
                Some(Expr::mul_all(rest))
            }
            _ => None,
        },
        _ => None,
    }
}

fn write_min(e: &Expr, min: u8, out: &mut String) {
    if prec(e) < min {
        out.push('(');
        write_expr(e, out);
        out.push(')');
    } else {
        write_expr(e, out);
    }
}

fn write_expr(e: &Expr, out: &mut String) {
    match e.node() {
        Node::Const(q) => {
            let _ = write!(out, "{q}");
        }
        Node::Sym(s) => out.push_str(s),
        Node::Add(v) => {
            for (k, t) in v.iter().enumerate() {
                if k == 0 {
                    write_min(t, NEG, out);
                } else if let Some(abs) = negated(t) {
                    out.push_str(" - ");
                    write_min(&abs, MUL, out);
                } else {
                    out.push_str(" + ");
                    write_min(t, MUL, out);
                }
            }
        }
        Node::Mul(v) => {
            let mut owned = v.clone();
            if let Some(q) = v[0].as_const() {
                if q.is_real() && q.re.is_negative() {
                    out.push('-');
                    if (-q).is_one() {
                        owned.remove(0);
                    } else {
                        owned[0] = Expr::constant(-q);
                    }
                }
            }
            for (k, f) in owned.iter().enumerate() {
                if k > 0 {
                    out.push('*');
                }
                let min = if k == 0 {
                    MUL
                } else if matches!(f.node(), Node::Div(..)) {
                    POW
                } else {
                    MUL
                };
                write_min(f, min, out);
            }
        }
        Node::Div(a, b) => {
            write_min(a, MUL, out);
            out.push('/');
            write_min(b, POW, out);
        }
        Node::Pow(a, n) => {
            write_min(a, ATOM, out);
            if *n < 0 {
                let _ = write!(out, "^({n})");
            } else {
                let _ = write!(out, "^{n}");
            }
        }
        Node::Apply(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(a, out);
            out.push(')');
        }
        Node::Deriv(a, ords) => {
            out.push_str("diff(");
            write_expr(a, out);
            for (n, k) in ords {
                for _ in 0..*k {
                    out.push_str(", ");
                    out.push_str(n);
                }
            }
            out.push(')');
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(self, &mut s);
        f.write_str(&s)
    }
}
