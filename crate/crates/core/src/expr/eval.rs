//! Point evaluation through Taylor jets.
//!
//! A node only needs as many jet orders as the `Deriv` nodes above it
//! consume, so evaluation first pushes required orders down the DAG and then
//! computes each distinct node once, bottom-up.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;
use std::sync::Arc;

use super::jet::Jet;
use super::number::{CFloat, FloatCtx, GaussRational, Num, Scalar};
use super::{EvalError, Expr, Func, Node};

/// Evaluation arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float { prec: usize },
}

type Memo<T> = HashMap<Expr, Result<Rc<Jet<T>>, EvalError>>;

/// Evaluates expressions at one point, caching every node it touches.
pub struct Evaluator<T: Num> {
    ctx: Rc<T::Ctx>,
    coords: [Arc<str>; 2],
    values: HashMap<Arc<str>, T>,
    memo: Memo<T>,
}

fn children(e: &Expr) -> Vec<Expr> {
    match e.node() {
        Node::Const(_) | Node::Sym(_) => Vec::new(),
        Node::Add(v) | Node::Mul(v) => v.clone(),
        Node::Div(a, b) => vec![a.clone(), b.clone()],
        Node::Pow(a, _) | Node::Apply(_, a) | Node::Deriv(a, _) => vec![a.clone()],
    }
}

/// Unique nodes reachable from `roots`, children before parents.
pub(crate) fn post_order(roots: &[Expr]) -> Vec<Expr> {
    let mut out = Vec::new();
    let mut seen: HashSet<Expr> = HashSet::new();
    let mut stack: Vec<(Expr, bool)> = roots.iter().rev().map(|r| (r.clone(), false)).collect();
    while let Some((e, expanded)) = stack.pop() {
        if expanded {
            out.push(e);
            continue;
        }
        if seen.contains(&e) {
            continue;
        }
        seen.insert(e.clone());
        let ch = children(&e);
        stack.push((e, true));
        for c in ch.into_iter().rev() {
            if !seen.contains(&c) {
                stack.push((c, false));
            }
        }
    }
    out
}

impl<T: Num> Evaluator<T> {
    /// `values` must contain both coordinates and every parameter.
    pub fn new(ctx: Rc<T::Ctx>, coords: [&str; 2], values: Vec<(String, T)>) -> Self {
        Evaluator {
            ctx,
            coords: [Arc::from(coords[0]), Arc::from(coords[1])],
            values: values
                .into_iter()
                .map(|(k, v)| (Arc::from(k.as_str()), v))
                .collect(),
            memo: HashMap::new(),
        }
    }

    pub fn ctx(&self) -> &T::Ctx {
        &self.ctx
    }

    fn dir(&self, name: &str) -> Result<usize, EvalError> {
        self.coords
            .iter()
            .position(|c| &**c == name)
            .ok_or_else(|| EvalError::Unassigned(format!("{name} (not a coordinate)")))
    }

    /// Value at the point.
    pub fn value(&mut self, e: &Expr) -> Result<T, EvalError> {
        self.jets(&[(e.clone(), 0)])
            .pop()
            .unwrap()
            .map(|j| j.c0().clone())
    }

    pub fn values(&mut self, es: &[Expr]) -> Vec<Result<T, EvalError>> {
        let roots: Vec<(Expr, u32)> = es.iter().map(|e| (e.clone(), 0)).collect();
        self.jets(&roots)
            .into_iter()
            .map(|r| r.map(|j| j.c0().clone()))
            .collect()
    }

    /// Jets of the given orders for several roots sharing one traversal.
    pub fn jets(&mut self, roots: &[(Expr, u32)]) -> Vec<Result<Rc<Jet<T>>, EvalError>> {
        let exprs: Vec<Expr> = roots.iter().map(|r| r.0.clone()).collect();
        let order = post_order(&exprs);
        let mut req: HashMap<Expr, u32> = HashMap::new();
        for (e, n) in roots {
            let slot = req.entry(e.clone()).or_insert(0);
            *slot = (*slot).max(*n);
        }
        for e in order.iter().rev() {
            let r = match req.get(e) {
                Some(r) => *r,
                None => continue,
            };
            let extra = match e.node() {
                Node::Deriv(_, ords) => ords.iter().map(|o| o.1).sum(),
                _ => 0,
            };
            for c in children(e) {
                let slot = req.entry(c).or_insert(0);
                *slot = (*slot).max(r + extra);
            }
        }
        for e in &order {
            let need = req[e];
            if let Some(hit) = self.memo.get(e) {
                match hit {
                    Err(_) => continue,
                    Ok(j) if j.order >= need => continue,
                    _ => {}
                }
            }
            let r = self.compute(e, need);
            self.memo.insert(e.clone(), r);
        }
        roots
            .iter()
            .map(|(e, n)| match &self.memo[e] {
                Ok(j) if j.order > *n => Ok(Rc::new(j.truncate(*n))),
                other => other.clone(),
            })
            .collect()
    }

    fn child(&self, e: &Expr, n: u32) -> Result<Jet<T>, EvalError> {
        match &self.memo[e] {
            Ok(j) => Ok(j.truncate(n)),
            Err(err) => Err(err.clone()),
        }
    }

    fn compute(&self, e: &Expr, n: u32) -> Result<Rc<Jet<T>>, EvalError> {
        let ctx = &*self.ctx;
        let j = match e.node() {
            Node::Const(q) => Jet::constant(T::from_gauss(q, ctx), n, ctx),
            Node::Sym(s) => {
                let v = self
                    .values
                    .get(s)
                    .ok_or_else(|| EvalError::Unassigned(s.to_string()))?
                    .clone();
                match self.coords.iter().position(|c| c == s) {
                    Some(dir) => Jet::variable(v, dir, n, ctx),
                    None => Jet::constant(v, n, ctx),
                }
            }
            Node::Add(v) => {
                let mut acc = self.child(&v[0], n)?;
                for t in &v[1..] {
                    acc = acc.add(&self.child(t, n)?, ctx);
                }
                acc
            }
            Node::Mul(v) => {
                let mut acc = self.child(&v[0], n)?;
                for t in &v[1..] {
                    acc = acc.mul(&self.child(t, n)?, ctx);
                }
                acc
            }
            Node::Div(a, b) => self.child(a, n)?.mul(&self.child(b, n)?.inv(ctx)?, ctx),
            Node::Pow(a, k) => self.child(a, n)?.powi(*k, ctx)?,
            Node::Apply(f, a) => {
                let x = self.child(a, n)?;
                match f {
                    Func::Exp => x.exp(ctx)?,
                    Func::Log => x.ln(ctx)?,
                    Func::Sin => x.sin(ctx)?,
                    Func::Cos => x.cos(ctx)?,
                    Func::Sqrt => x.sqrt(ctx)?,
                }
            }
            Node::Deriv(a, ords) => {
                let total: u32 = ords.iter().map(|o| o.1).sum();
                let mut x = self.child(a, n + total)?;
                for (name, k) in ords {
                    let dir = self.dir(name)?;
                    for _ in 0..*k {
                        x = x.deriv(dir, ctx);
                    }
                }
                x
            }
        };
        Ok(Rc::new(j))
    }

    /// Largest `log2 |v|` over the values of all nodes under `e`.
    pub fn max_log2_magnitude(&self, e: &Expr) -> Option<i64> {
        post_order(std::slice::from_ref(e))
            .iter()
            .filter_map(|n| {
                self.memo
                    .get(n)
                    .and_then(|r| r.as_ref().ok())
                    .and_then(|j| j.c0().log2_mag())
            })
            .max()
    }
}

/// Value of `e` with every coordinate and parameter assigned.
pub fn evaluate(
    e: &Expr,
    coords: [&str; 2],
    assignment: &[(&str, GaussRational)],
    mode: Mode,
) -> Result<Scalar, EvalError> {
    evaluate_many(std::slice::from_ref(e), coords, assignment, mode)
        .pop()
        .unwrap()
}

/// Values of several expressions sharing one memo.
pub fn evaluate_many(
    es: &[Expr],
    coords: [&str; 2],
    assignment: &[(&str, GaussRational)],
    mode: Mode,
) -> Vec<Result<Scalar, EvalError>> {
    match mode {
        Mode::Exact => {
            let values = assignment
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect();
            let mut ev = Evaluator::<GaussRational>::new(Rc::new(()), coords, values);
            ev.values(es)
                .into_iter()
                .map(|r| r.map(Scalar::Exact))
                .collect()
        }
        Mode::Float { prec } => {
            let ctx = Rc::new(FloatCtx::new(prec));
            let values = assignment
                .iter()
                .map(|(k, v)| (k.to_string(), CFloat::from_gauss(v, &ctx)))
                .collect();
            let mut ev = Evaluator::<CFloat>::new(ctx, coords, values);
            ev.values(es)
                .into_iter()
                .map(|r| r.map(Scalar::Float))
                .collect()
        }
    }
}

/// Exact Taylor jet of `e` at a rational point.
pub fn evaluate_jet(
    e: &Expr,
    coords: [&str; 2],
    assignment: &[(&str, GaussRational)],
    order: u32,
) -> Result<Jet<GaussRational>, EvalError> {
    let values = assignment
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect();
    let mut ev = Evaluator::<GaussRational>::new(Rc::new(()), coords, values);
    ev.jets(&[(e.clone(), order)])
        .pop()
        .unwrap()
        .map(|j| (*j).clone())
}
