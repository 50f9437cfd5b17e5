use std::collections::HashMap;

use super::{Expr, Func, Node};

impl Expr {
    /// Exact symbolic partial derivative of the given order.
    pub fn differentiate(&self, var: &str, order: u32) -> Expr {
        let mut e = self.clone();
        for _ in 0..order {
            let mut memo = HashMap::new();
            e = d(&e, var, &mut memo);
        }
        e
    }
}

fn d(e: &Expr, var: &str, memo: &mut HashMap<usize, Expr>) -> Expr {
    if !e.may_depend_on(var) {
        return Expr::zero();
    }
    if let Some(r) = memo.get(&e.addr()) {
        return r.clone();
    }
    let r = match e.node() {
        Node::Const(_) => Expr::zero(),
        Node::Sym(s) => {
            if &**s == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Add(v) => Expr::add_all(v.iter().map(|t| d(t, var, memo)).collect()),
        Node::Mul(v) => {
            let mut terms = Vec::new();
            for (k, f) in v.iter().enumerate() {
                let df = d(f, var, memo);
                if df.is_zero() {
                    continue;
                }
                let mut fs: Vec<Expr> = v
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, g)| g.clone())
                    .collect();
                fs.push(df);
                terms.push(Expr::mul_all(fs));
            }
            Expr::add_all(terms)
        }
        Node::Div(a, b) => {
            let da = d(a, var, memo);
            let db = d(b, var, memo);
            if db.is_zero() {
                &da / b
            } else {
                (&da * b - a * &db) / b.pow(2)
            }
        }
        Node::Pow(a, n) => {
            let da = d(a, var, memo);
            Expr::mul_all(vec![Expr::int(*n), a.pow(n - 1), da])
        }
        Node::Apply(f, a) => {
            let da = d(a, var, memo);
            if da.is_zero() {
                Expr::zero()
            } else {
                match f {
                    Func::Exp => e * &da,
                    Func::Log => &da / a,
                    Func::Sin => a.cos() * &da,
                    Func::Cos => -(a.sin() * &da),
                    Func::Sqrt => &da / (Expr::int(2) * e),
                }
            }
        }
        Node::Deriv(..) => e.deriv_node(var, 1),
    };
    memo.insert(e.addr(), r.clone());
    r
}
