//! Brute-force lower bound on the dimension of degree-`n` integrals.
//!
//! Each coefficient of `F` is an unknown combination of Laurent monomials
//! `x^a y^b`. The coefficients of `{H, F}` are cleared of denominators and
//! matched monomial by monomial; the kernel of the resulting integer matrix
//! is computed by fraction-free elimination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::expr::poly::{gcd, Poly, RatFunc};
use crate::expr::simplify::SimplifyError;
use crate::expr::{to_ratfunc, Expr, GaussRational};
use crate::geometry::Metric2D;
use crate::symplectic::{hamiltonian, poisson_bracket, MomentaPolynomial};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("degree {0} outside 1..=5")]
    Degree(usize),
    #[error("ansatz has {0} unknowns, above the cap of {1}")]
    BasisTooLarge(usize, usize),
    #[error("ansatz ranges are empty")]
    EmptyAnsatz,
    #[error("metric is not rational in the coordinates: {0}")]
    NotRational(String),
    #[error("kernel vector {0} failed the exact bracket check")]
    Verification(usize),
}

impl From<SimplifyError> for OracleError {
    fn from(e: SimplifyError) -> Self {
        OracleError::NotRational(e.to_string())
    }
}

/// Monomials `x^a y^b` allowed in every coefficient of `F`. Negative
/// exponents give a Laurent ansatz.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub x_range: (i32, i32),
    pub y_range: (i32, i32),
    /// Optional bound on `a + b`.
    pub total_degree: Option<i32>,
    /// Cap on the number of unknowns (monomials times momentum slots).
    pub max_basis: usize,
}

impl AnsatzSpec {
    pub fn box_range(x: (i32, i32), y: (i32, i32)) -> Self {
        AnsatzSpec {
            x_range: x,
            y_range: y,
            total_degree: None,
            max_basis: 2000,
        }
    }

    /// Polynomials of total degree at most `d`.
    pub fn polynomial(d: i32) -> Self {
        AnsatzSpec {
            x_range: (0, d),
            y_range: (0, d),
            total_degree: Some(d),
            max_basis: 2000,
        }
    }

    pub fn monomials(&self) -> Vec<(i32, i32)> {
        let mut out = Vec::new();
        for a in self.x_range.0..=self.x_range.1 {
            for b in self.y_range.0..=self.y_range.1 {
                if self.total_degree.is_none_or(|d| a + b <= d) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct DimensionResult {
    pub degree: usize,
    /// Kernel dimension: a lower bound on the number of independent integrals.
    pub dimension: usize,
    pub basis: Vec<MomentaPolynomial>,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
}

fn monomial_expr(x: &Expr, y: &Expr, (a, b): (i32, i32)) -> Expr {
    x.pow(a as i64) * y.pow(b as i64)
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    let g = gcd(a, b);
    a.mul(&b.exact_div(&g).expect("gcd divides")).monic()
}

fn lcm_int(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

/// Integer row from rational entries, cleared of denominators.
fn integer_row(entries: &[(usize, BigRational)], cols: usize) -> Option<Vec<BigInt>> {
    let den = entries
        .iter()
        .fold(BigInt::one(), |acc, (_, q)| lcm_int(&acc, q.denom()));
    let mut row = vec![BigInt::zero(); cols];
    let mut any = false;
    for (c, q) in entries {
        let v = q.numer() * (&den / q.denom());
        if !v.is_zero() {
            any = true;
        }
        row[*c] += v;
    }
    any.then_some(row)
}

/// Fraction-free row echelon form. Returns the pivot columns.
pub fn bareiss_echelon(m: &mut [Vec<BigInt>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let t = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = t / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Kernel basis of an echelon matrix, one vector per free column.
fn kernel(m: &[Vec<BigInt>], pivots: &[usize], cols: usize) -> Vec<Vec<BigRational>> {
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut x = vec![BigRational::zero(); cols];
        x[f] = BigRational::one();
        for (k, &pc) in pivots.iter().enumerate().rev() {
            let mut s = BigRational::zero();
            for j in pc + 1..cols {
                if !m[k][j].is_zero() && !x[j].is_zero() {
                    s += BigRational::from(m[k][j].clone()) * &x[j];
                }
            }
            x[pc] = -s / BigRational::from(m[k][pc].clone());
        }
        out.push(x);
    }
    out
}

fn substituted(g: &Metric2D) -> Metric2D {
    if g.params.is_empty() {
        return g.clone();
    }
    let map: Vec<(&str, Expr)> = g
        .params
        .iter()
        .map(|(n, v)| (n.as_str(), Expr::constant(v.clone())))
        .collect();
    let mut h = g.clone();
    h.g11 = g.g11.substitute(&map);
    h.g12 = g.g12.substitute(&map);
    h.g22 = g.g22.substitute(&map);
    h.params.clear();
    h
}

/// Exact check that `{H, F}` vanishes as a rational function.
pub fn bracket_vanishes(g: &Metric2D, f: &MomentaPolynomial) -> Result<bool, OracleError> {
    let g = substituted(g);
    let vars = g.coord_names();
    let br = poisson_bracket(&hamiltonian(&g), f, vars);
    for c in &br.coeffs {
        if !to_ratfunc(c, &vars)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lower bound on the dimension of integrals of degree `n` within `spec`,
/// with a verified basis.
pub fn integral_space_dimension(
    g: &Metric2D,
    n: usize,
    spec: &AnsatzSpec,
) -> Result<DimensionResult, OracleError> {
    if !(1..=5).contains(&n) {
        return Err(OracleError::Degree(n));
    }
    let g = substituted(g);
    let monos = spec.monomials();
    if monos.is_empty() {
        return Err(OracleError::EmptyAnsatz);
    }
    let cols = monos.len() * (n + 1);
    if cols > spec.max_basis {
        return Err(OracleError::BasisTooLarge(cols, spec.max_basis));
    }
    let vars = g.coord_names();
    let (xs, ys) = (Expr::sym(vars[0]), Expr::sym(vars[1]));
    let h = hamiltonian(&g);

    // per[e][col] = coefficient of p_y^e in {H, m p_x^(n-k) p_y^k}
    let mut per: Vec<Vec<RatFunc>> = vec![Vec::with_capacity(cols); n + 2];
    let mut col_desc = Vec::with_capacity(cols);
    for k in 0..=n {
        for &m in &monos {
            let f = MomentaPolynomial::monomial(monomial_expr(&xs, &ys, m), n - k, k);
            let br = poisson_bracket(&h, &f, vars);
            for (e, slot) in per.iter_mut().enumerate() {
                let c = br.coeffs.get(e).cloned().unwrap_or_else(Expr::zero);
                slot.push(to_ratfunc(&c, &vars)?);
            }
            col_desc.push((k, m));
        }
    }

    let mut matrix: Vec<Vec<BigInt>> = Vec::new();
    for eq in &per {
        let den = eq
            .iter()
            .filter(|r| !r.is_zero())
            .fold(Poly::one(2), |acc, r| lcm(&acc, &r.den));
        // monomial -> (col, value) entries, split into real and imaginary parts
        let mut by_mono: BTreeMap<Vec<u32>, Vec<(usize, GaussRational)>> = BTreeMap::new();
        for (c, r) in eq.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let scaled = r
                .num
                .mul(&den.exact_div(&r.den).expect("lcd is a multiple"));
            for (mono, v) in scaled.terms() {
                by_mono
                    .entry(mono.clone())
                    .or_default()
                    .push((c, v.clone()));
            }
        }
        for entries in by_mono.values() {
            let re: Vec<(usize, BigRational)> =
                entries.iter().map(|(c, v)| (*c, v.re.clone())).collect();
            let im: Vec<(usize, BigRational)> =
                entries.iter().map(|(c, v)| (*c, v.im.clone())).collect();
            matrix.extend(integer_row(&re, cols));
            matrix.extend(integer_row(&im, cols));
        }
    }
    let rows = matrix.len();
    let pivots = bareiss_echelon(&mut matrix);
    let rank = pivots.len();
    let kern = kernel(&matrix, &pivots, cols);

    let mut basis = Vec::with_capacity(kern.len());
    for (idx, v) in kern.iter().enumerate() {
        let mut coeffs = vec![Vec::new(); n + 1];
        for (c, q) in v.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let (k, m) = col_desc[c];
            coeffs[k]
                .push(Expr::constant(GaussRational::real(q.clone())) * monomial_expr(&xs, &ys, m));
        }
        let f = MomentaPolynomial::new(coeffs.into_iter().map(Expr::add_all).collect());
        if !bracket_vanishes(&g, &f)? {
            return Err(OracleError::Verification(idx));
        }
        basis.push(f);
    }
    Ok(DimensionResult {
        degree: n,
        dimension: basis.len(),
        basis,
        rows,
        cols,
        rank,
    })
}

/// Bound `(n² + 3n)/2 − 1` for metrics of nonconstant curvature.
pub fn nonconstant_curvature_bound(n: usize) -> usize {
    (n * n + 3 * n) / 2 - 1
}
