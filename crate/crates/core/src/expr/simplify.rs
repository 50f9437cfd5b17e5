//! Canonical rational-function normal form.
//!
//! Symbols become polynomial variables in sorted order; applications of the
//! elementary functions become extra variables ordered by their printed form
//! after their arguments are normalized. Two expressions that agree as
//! rational functions of these variables simplify to the same tree.

use std::collections::{BTreeMap, HashMap};

use super::poly::{Poly, RatFunc};
use super::{Expr, GaussRational, Node};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SimplifyError {
    #[error("division by an expression that is identically zero")]
    ZeroDivision,
    #[error("`{0}` is not a rational function of the chosen variables")]
    NotRational(String),
}

struct Conv<'a> {
    index: &'a HashMap<String, usize>,
    atoms: &'a HashMap<Expr, usize>,
    nvars: usize,
    memo: HashMap<usize, RatFunc>,
}

impl Conv<'_> {
    fn go(&mut self, e: &Expr) -> Result<RatFunc, SimplifyError> {
        if let Some(r) = self.memo.get(&e.addr()) {
            return Ok(r.clone());
        }
        let n = self.nvars;
        let r = match e.node() {
            Node::Const(q) => RatFunc::constant(q.clone(), n),
            Node::Sym(s) => match self.index.get(&**s) {
                Some(&v) => RatFunc::from_poly(Poly::var(v, n)),
                None => return Err(SimplifyError::NotRational(s.to_string())),
            },
            Node::Add(v) => {
                let mut acc = RatFunc::constant(GaussRational::zero(), n);
                for t in v {
                    acc = acc.add(&self.go(t)?);
                }
                acc
            }
            Node::Mul(v) => {
                let mut acc = RatFunc::constant(GaussRational::one(), n);
                for t in v {
                    acc = acc.mul(&self.go(t)?);
                }
                acc
            }
            Node::Div(a, b) => self
                .go(a)?
                .div(&self.go(b)?)
                .ok_or(SimplifyError::ZeroDivision)?,
            Node::Pow(a, k) => self.go(a)?.pow(*k).ok_or(SimplifyError::ZeroDivision)?,
            Node::Apply(..) | Node::Deriv(..) => match self.atoms.get(e) {
                Some(&v) => RatFunc::from_poly(Poly::var(v, n)),
                None => return Err(SimplifyError::NotRational(e.to_string())),
            },
        };
        self.memo.insert(e.addr(), r.clone());
        Ok(r)
    }
}

/// Converts `e` to a rational function in `vars` (polynomial variable `k` is
/// `vars[k]`). Any function application is an error.
pub fn to_ratfunc(e: &Expr, vars: &[&str]) -> Result<RatFunc, SimplifyError> {
    let e = e.expand_derivs();
    let index: HashMap<String, usize> = vars
        .iter()
        .enumerate()
        .map(|(k, v)| (v.to_string(), k))
        .collect();
    let atoms = HashMap::new();
    Conv {
        index: &index,
        atoms: &atoms,
        nvars: vars.len(),
        memo: HashMap::new(),
    }
    .go(&e)
}

fn collect_apps(e: &Expr, out: &mut Vec<Expr>, seen: &mut std::collections::HashSet<usize>) {
    if !seen.insert(e.addr()) {
        return;
    }
    match e.node() {
        Node::Const(_) | Node::Sym(_) => {}
        Node::Add(v) | Node::Mul(v) => v.iter().for_each(|t| collect_apps(t, out, seen)),
        Node::Div(a, b) => {
            collect_apps(a, out, seen);
            collect_apps(b, out, seen);
        }
        Node::Pow(a, _) => collect_apps(a, out, seen),
        Node::Apply(..) | Node::Deriv(..) => out.push(e.clone()),
    }
}

/// Rebuilds an expression from a polynomial, highest terms first.
fn poly_to_expr(p: &Poly, vars: &[Expr]) -> Expr {
    let terms: Vec<Expr> = p
        .terms()
        .rev()
        .map(|(exps, c)| {
            let mut fs = vec![Expr::constant(c.clone())];
            for (v, k) in exps.iter().enumerate() {
                if *k > 0 {
                    fs.push(vars[v].pow(*k as i64));
                }
            }
            Expr::mul_all(fs)
        })
        .collect();
    Expr::add_all(terms)
}

/// Canonical form of `e` as an expanded quotient of polynomials.
///
/// Function arguments are simplified recursively. Fails only on a division
/// by something that normalizes to zero.
pub fn simplify(e: &Expr) -> Result<Expr, SimplifyError> {
    let e = e.expand_derivs();
    let mut apps = Vec::new();
    collect_apps(&e, &mut apps, &mut Default::default());
    // canonical atom per application, keyed by printed form
    let mut by_key: BTreeMap<String, Expr> = BTreeMap::new();
    let mut canon_of: Vec<(Expr, String)> = Vec::new();
    for a in apps {
        let canon = match a.node() {
            Node::Apply(f, arg) => Expr::apply(*f, simplify(arg)?),
            _ => a.clone(),
        };
        if canon.as_const().is_some() || matches!(canon.node(), Node::Sym(_)) {
            canon_of.push((a, String::new()));
            continue;
        }
        let key = canon.to_string();
        by_key.entry(key.clone()).or_insert(canon);
        canon_of.push((a, key));
    }
    let mut names: Vec<String> = e.symbols().into_iter().collect();
    names.sort();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut var_exprs: Vec<Expr> = Vec::new();
    for n in &names {
        index.insert(n.clone(), var_exprs.len());
        var_exprs.push(Expr::sym(n));
    }
    let mut key_var: HashMap<String, usize> = HashMap::new();
    for (k, canon) in &by_key {
        key_var.insert(k.clone(), var_exprs.len());
        var_exprs.push(canon.clone());
    }
    let nvars = var_exprs.len();
    let mut atoms: HashMap<Expr, usize> = HashMap::new();
    let mut folded: Vec<(Expr, Expr)> = Vec::new();
    for (a, key) in canon_of {
        if key.is_empty() {
            let canon = match a.node() {
                Node::Apply(f, arg) => Expr::apply(*f, simplify(arg)?),
                _ => a.clone(),
            };
            folded.push((a, canon));
        } else {
            atoms.insert(a, key_var[&key]);
        }
    }
    let e = if folded.is_empty() {
        e
    } else {
        replace(&e, &folded)?
    };
    let r = Conv {
        index: &index,
        atoms: &atoms,
        nvars,
        memo: HashMap::new(),
    }
    .go(&e)?;
    let num = poly_to_expr(&r.num, &var_exprs);
    if r.den.as_constant().is_some_and(|c| c.is_one()) {
        return Ok(num);
    }
    Ok(num / poly_to_expr(&r.den, &var_exprs))
}

/// Replaces whole subexpressions that became constants or symbols.
fn replace(e: &Expr, map: &[(Expr, Expr)]) -> Result<Expr, SimplifyError> {
    if let Some((_, v)) = map.iter().find(|(k, _)| k == e) {
        return Ok(v.clone());
    }
    Ok(match e.node() {
        Node::Const(_) | Node::Sym(_) | Node::Apply(..) | Node::Deriv(..) => e.clone(),
        Node::Add(v) => Expr::add_all(
            v.iter()
                .map(|t| replace(t, map))
                .collect::<Result<_, _>>()?,
        ),
        Node::Mul(v) => Expr::mul_all(
            v.iter()
                .map(|t| replace(t, map))
                .collect::<Result<_, _>>()?,
        ),
        Node::Div(a, b) => replace(a, map)?
            .checked_div(&replace(b, map)?)
            .map_err(|_| SimplifyError::ZeroDivision)?,
        Node::Pow(a, k) => replace(a, map)?
            .checked_pow(*k)
            .map_err(|_| SimplifyError::ZeroDivision)?,
    })
}
