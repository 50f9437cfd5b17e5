//! Symbolic scalar expressions in two coordinates.
//!
//! Nodes are immutable and shared through `Arc`, so large invariant
//! expressions are DAGs. Besides the usual field operations and the five
//! elementary functions there is one deferred node, `Deriv`, a partial
//! derivative that is only resolved at evaluation time through Taylor jets.

mod diff;
mod eval;
pub mod jet;
pub mod number;
mod parse;
pub mod poly;
mod print;
pub mod simplify;
pub mod zero;

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub use eval::{evaluate, evaluate_jet, evaluate_many, Evaluator, Mode};
pub use number::{CFloat, FloatCtx, GaussRational, Num, Scalar};
pub use parse::{ParseContext, ParseError};
pub use simplify::{simplify, to_ratfunc};
pub use zero::{
    is_identically_zero, Box2, SamplePoint, TriState, ZeroOutcome, ZeroPolicy, ZeroTester,
};

/// Errors raised while evaluating an expression at a point.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero at the evaluation point")]
    DivisionByZero,
    #[error("value is not exactly representable: {0}")]
    Inexact(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("symbol `{0}` has no assigned value")]
    Unassigned(String),
}

/// Errors from expression construction.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("zero denominator")]
    ZeroDenominator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Const(GaussRational),
    Sym(Arc<str>),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Div(Expr, Expr),
    Pow(Expr, i64),
    Apply(Func, Expr),
    /// Deferred partial derivative; orders are sorted by variable name.
    Deriv(Expr, Vec<(Arc<str>, u32)>),
}

#[derive(Debug)]
struct Inner {
    node: Node,
    hash: u64,
    size: usize,
    deps: u64,
}

/// Shared handle to an expression node.
#[derive(Clone)]
pub struct Expr(Arc<Inner>);

fn name_bit(name: &str) -> u64 {
    let mut h = DefaultHasher::new();
    name.hash(&mut h);
    1u64 << (h.finish() % 64)
}

impl Expr {
    fn make(node: Node) -> Expr {
        let mut h = DefaultHasher::new();
        let (size, deps) = match &node {
            Node::Const(q) => {
                0u8.hash(&mut h);
                q.hash(&mut h);
                (1, 0)
            }
            Node::Sym(s) => {
                1u8.hash(&mut h);
                s.hash(&mut h);
                (1, name_bit(s))
            }
            Node::Add(v) | Node::Mul(v) => {
                (if matches!(node, Node::Add(_)) {
                    2u8
                } else {
                    3u8
                })
                .hash(&mut h);
                let mut size = 1usize;
                let mut deps = 0;
                for e in v {
                    e.0.hash.hash(&mut h);
                    size = size.saturating_add(e.0.size);
                    deps |= e.0.deps;
                }
                (size, deps)
            }
            Node::Div(a, b) => {
                4u8.hash(&mut h);
                a.0.hash.hash(&mut h);
                b.0.hash.hash(&mut h);
                (
                    1usize.saturating_add(a.0.size).saturating_add(b.0.size),
                    a.0.deps | b.0.deps,
                )
            }
            Node::Pow(a, n) => {
                5u8.hash(&mut h);
                a.0.hash.hash(&mut h);
                n.hash(&mut h);
                (a.0.size.saturating_add(1), a.0.deps)
            }
            Node::Apply(f, a) => {
                6u8.hash(&mut h);
                f.hash(&mut h);
                a.0.hash.hash(&mut h);
                (a.0.size.saturating_add(1), a.0.deps)
            }
            Node::Deriv(a, ords) => {
                7u8.hash(&mut h);
                a.0.hash.hash(&mut h);
                ords.hash(&mut h);
                (a.0.size.saturating_add(1), a.0.deps)
            }
        };
        Expr(Arc::new(Inner {
            node,
            hash: h.finish(),
            size,
            deps,
        }))
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    /// Tree size with shared subtrees counted repeatedly (saturating).
    pub fn tree_size(&self) -> usize {
        self.0.size
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    pub fn ptr_eq(&self, o: &Expr) -> bool {
        Arc::ptr_eq(&self.0, &o.0)
    }

    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// `false` only if the expression certainly does not contain `name`.
    pub fn may_depend_on(&self, name: &str) -> bool {
        self.0.deps & name_bit(name) != 0
    }

    pub fn constant(q: GaussRational) -> Expr {
        Expr::make(Node::Const(q))
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(GaussRational::from_int(n))
    }

    pub fn rational(n: i64, d: i64) -> Expr {
        Expr::constant(GaussRational::from_ratio(n, d))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn imag_unit() -> Expr {
        Expr::constant(GaussRational::i())
    }

    pub fn sym(name: &str) -> Expr {
        Expr::make(Node::Sym(Arc::from(name)))
    }

    pub fn as_const(&self) -> Option<&GaussRational> {
        match self.node() {
            Node::Const(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|q| q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(|q| q.is_one())
    }

    pub fn add_all(terms: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(terms.len());
        let mut c = GaussRational::zero();
        for t in terms {
            match t.node() {
                Node::Const(q) => c = &c + q,
                Node::Add(v) => {
                    for s in v {
                        match s.node() {
                            Node::Const(q) => c = &c + q,
                            _ => flat.push(s.clone()),
                        }
                    }
                }
                _ => flat.push(t),
            }
        }
        if !c.is_zero() {
            flat.push(Expr::constant(c));
        }
        match flat.len() {
            0 => Expr::zero(),
            1 => flat.pop().unwrap(),
            _ => Expr::make(Node::Add(flat)),
        }
    }

    pub fn mul_all(factors: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(factors.len());
        let mut c = GaussRational::one();
        for f in factors {
            match f.node() {
                Node::Const(q) => c = &c * q,
                Node::Mul(v) => {
                    for s in v {
                        match s.node() {
                            Node::Const(q) => c = &c * q,
                            _ => flat.push(s.clone()),
                        }
                    }
                }
                _ => flat.push(f),
            }
            if c.is_zero() {
                return Expr::zero();
            }
        }
        if flat.is_empty() {
            return Expr::constant(c);
        }
        if !c.is_one() {
            flat.insert(0, Expr::constant(c));
        }
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        Expr::make(Node::Mul(flat))
    }

    pub fn checked_div(&self, d: &Expr) -> Result<Expr, ExprError> {
        if let Some(q) = d.as_const() {
            if q.is_zero() {
                return Err(ExprError::ZeroDenominator);
            }
            if let Some(p) = self.as_const() {
                return Ok(Expr::constant(p / q));
            }
            if q.is_one() {
                return Ok(self.clone());
            }
            return Ok(Expr::mul_all(vec![
                Expr::constant(q.inv().unwrap()),
                self.clone(),
            ]));
        }
        if self.is_zero() {
            return Ok(Expr::zero());
        }
        Ok(Expr::make(Node::Div(self.clone(), d.clone())))
    }

    pub fn checked_pow(&self, n: i64) -> Result<Expr, ExprError> {
        if n == 0 {
            return Ok(Expr::one());
        }
        if n == 1 {
            return Ok(self.clone());
        }
        if let Some(q) = self.as_const() {
            return q
                .pow(n)
                .map(Expr::constant)
                .ok_or(ExprError::ZeroDenominator);
        }
        if let Node::Pow(b, m) = self.node() {
            return b.checked_pow(m.saturating_mul(n));
        }
        Ok(Expr::make(Node::Pow(self.clone(), n)))
    }

    /// Integer power; panics only for a negative power of literal zero.
    pub fn pow(&self, n: i64) -> Expr {
        self.checked_pow(n).expect("negative power of zero")
    }

    pub fn apply(f: Func, a: Expr) -> Expr {
        if let Some(q) = a.as_const() {
            let folded = match f {
                Func::Exp if q.is_zero() => Some(GaussRational::one()),
                Func::Log if q.is_one() => Some(GaussRational::zero()),
                Func::Sin if q.is_zero() => Some(GaussRational::zero()),
                Func::Cos if q.is_zero() => Some(GaussRational::one()),
                Func::Sqrt => q.sqrt_exact(),
                _ => None,
            };
            if let Some(v) = folded {
                return Expr::constant(v);
            }
        }
        Expr::make(Node::Apply(f, a))
    }

    pub fn exp(&self) -> Expr {
        Expr::apply(Func::Exp, self.clone())
    }

    pub fn log(&self) -> Expr {
        Expr::apply(Func::Log, self.clone())
    }

    pub fn sin(&self) -> Expr {
        Expr::apply(Func::Sin, self.clone())
    }

    pub fn cos(&self) -> Expr {
        Expr::apply(Func::Cos, self.clone())
    }

    pub fn sqrt(&self) -> Expr {
        Expr::apply(Func::Sqrt, self.clone())
    }

    /// Deferred partial derivative node, merged with an inner `Deriv`.
    pub fn deriv_node(&self, var: &str, k: u32) -> Expr {
        if k == 0 {
            return self.clone();
        }
        if !self.may_depend_on(var) || self.as_const().is_some() {
            return Expr::zero();
        }
        let (base, mut ords) = match self.node() {
            Node::Deriv(b, o) => (b.clone(), o.clone()),
            _ => (self.clone(), Vec::new()),
        };
        match ords.iter_mut().find(|(n, _)| &**n == var) {
            Some(slot) => slot.1 += k,
            None => ords.push((Arc::from(var), k)),
        }
        ords.sort();
        Expr::make(Node::Deriv(base, ords))
    }

    /// Partial derivative that expands small expressions eagerly and defers
    /// large ones to evaluation time.
    pub fn partial(&self, var: &str) -> Expr {
        const EAGER_LIMIT: usize = 48;
        if self.tree_size() <= EAGER_LIMIT && !contains_deriv(self) {
            self.differentiate(var, 1)
        } else {
            self.deriv_node(var, 1)
        }
    }

    /// Names of all symbols occurring in the expression.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.addr()) {
                continue;
            }
            match e.node() {
                Node::Const(_) => {}
                Node::Sym(s) => {
                    out.insert(s.to_string());
                }
                Node::Add(v) | Node::Mul(v) => stack.extend(v.iter().cloned()),
                Node::Div(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                Node::Pow(a, _) | Node::Apply(_, a) => stack.push(a.clone()),
                Node::Deriv(a, ords) => {
                    stack.push(a.clone());
                    for (n, _) in ords {
                        out.insert(n.to_string());
                    }
                }
            }
        }
        out
    }

    /// Replaces symbols by expressions everywhere, including inside `Deriv`.
    ///
    /// A `Deriv` node whose variables are substituted is expanded eagerly
    /// first, because the chain rule cannot be deferred.
    pub fn substitute(&self, map: &[(&str, Expr)]) -> Expr {
        let mut memo = std::collections::HashMap::new();
        subst_rec(self, map, &mut memo)
    }

    /// Number of distinct nodes in the DAG.
    pub fn dag_size(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.addr()) {
                continue;
            }
            match e.node() {
                Node::Add(v) | Node::Mul(v) => stack.extend(v.iter().cloned()),
                Node::Div(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                Node::Pow(a, _) | Node::Apply(_, a) | Node::Deriv(a, _) => stack.push(a.clone()),
                _ => {}
            }
        }
        seen.len()
    }

    /// Rebuilds the tree with every `Deriv` node expanded symbolically.
    pub fn expand_derivs(&self) -> Expr {
        subst_rec(self, &[], &mut std::collections::HashMap::new())
    }
}

fn contains_deriv(e: &Expr) -> bool {
    match e.node() {
        Node::Deriv(..) => true,
        Node::Const(_) | Node::Sym(_) => false,
        Node::Add(v) | Node::Mul(v) => v.iter().any(contains_deriv),
        Node::Div(a, b) => contains_deriv(a) || contains_deriv(b),
        Node::Pow(a, _) | Node::Apply(_, a) => contains_deriv(a),
    }
}

fn subst_rec(
    e: &Expr,
    map: &[(&str, Expr)],
    memo: &mut std::collections::HashMap<usize, Expr>,
) -> Expr {
    if let Some(r) = memo.get(&e.addr()) {
        return r.clone();
    }
    let r = match e.node() {
        Node::Const(_) => e.clone(),
        Node::Sym(s) => map
            .iter()
            .find(|(n, _)| *n == &**s)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| e.clone()),
        Node::Add(v) => Expr::add_all(v.iter().map(|t| subst_rec(t, map, memo)).collect()),
        Node::Mul(v) => Expr::mul_all(v.iter().map(|t| subst_rec(t, map, memo)).collect()),
        Node::Div(a, b) => subst_rec(a, map, memo) / subst_rec(b, map, memo),
        Node::Pow(a, n) => subst_rec(a, map, memo).pow(*n),
        Node::Apply(f, a) => Expr::apply(*f, subst_rec(a, map, memo)),
        Node::Deriv(a, ords) => {
            let mut inner = subst_rec(a, &[], memo);
            for (n, k) in ords {
                inner = inner.differentiate(n, *k);
            }
            if map.is_empty() {
                inner
            } else {
                subst_rec(&inner, map, memo)
            }
        }
    };
    memo.insert(e.addr(), r.clone());
    r
}

impl PartialEq for Expr {
    fn eq(&self, o: &Expr) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || (self.0.hash == o.0.hash && self.0.node == o.0.node)
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash.hash(state);
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<GaussRational> for Expr {
    fn from(q: GaussRational) -> Expr {
        Expr::constant(q)
    }
}

macro_rules! expr_binop {
    ($tr:ident, $m:ident, $f:expr) => {
        impl std::ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                $f(&self, &o)
            }
        }
        impl std::ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                $f(self, o)
            }
        }
        impl std::ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                $f(&self, o)
            }
        }
        impl std::ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                $f(self, &o)
            }
        }
    };
}

expr_binop!(Add, add, |a: &Expr, b: &Expr| Expr::add_all(vec![
    a.clone(),
    b.clone()
]));
expr_binop!(Sub, sub, |a: &Expr, b: &Expr| Expr::add_all(vec![
    a.clone(),
    -b
]));
expr_binop!(Mul, mul, |a: &Expr, b: &Expr| Expr::mul_all(vec![
    a.clone(),
    b.clone()
]));
// Panics on a literal zero denominator; parsed input goes through `checked_div`.
expr_binop!(Div, div, |a: &Expr, b: &Expr| a
    .checked_div(b)
    .expect("division by literal zero"));

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::mul_all(vec![Expr::int(-1), self])
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::mul_all(vec![Expr::int(-1), self.clone()])
    }
}
