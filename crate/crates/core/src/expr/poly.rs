//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Exponent vectors compare lexicographically, so the last entry of the term
//! map is the leading term. The GCD uses the recursive primitive
//! pseudo-remainder sequence.

use std::collections::BTreeMap;
use std::fmt;

use super::GaussRational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, GaussRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: GaussRational, nvars: usize) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(GaussRational::one(), nvars)
    }

    pub fn var(v: usize, nvars: usize) -> Self {
        Poly::monomial(GaussRational::one(), unit(v, 1, nvars))
    }

    pub fn monomial(c: GaussRational, exps: Vec<u32>) -> Self {
        let mut p = Poly::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> std::collections::btree_map::Iter<'_, Vec<u32>, GaussRational> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<GaussRational> {
        match self.terms.len() {
            0 => Some(GaussRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|k| *k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    pub fn leading(&self) -> Option<(&Vec<u32>, &GaussRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn coeff(&self, exps: &[u32]) -> GaussRational {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(GaussRational::zero)
    }

    fn add_term(&mut self, e: Vec<u32>, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(slot) => {
                let s = &*slot + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *slot = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c);
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &GaussRational) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        let mut sq = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv().unwrap()),
            None => self.clone(),
        }
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (de, dc) = d.leading()?;
        let dinv = dc.inv()?;
        let mut r = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((re, rc)) = r.leading() {
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let t = Poly::monomial(rc * &dinv, e);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Coefficients of the powers of variable `v`.
    fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(self.nvars); self.degree_in(v) as usize + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v] as usize;
            e2[v] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    fn main_var(&self) -> Option<usize> {
        (0..self.nvars).find(|&v| self.degree_in(v) > 0)
    }

    /// Pseudo-remainder of `self` by `b` with respect to variable `v`.
    fn prem(&self, b: &Poly, v: usize) -> Poly {
        let db = b.degree_in(v);
        let lcb = b.coeffs_in(v).pop().unwrap();
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lcr = r.coeffs_in(v).pop().unwrap();
            let shift = Poly::monomial(GaussRational::one(), unit(v, dr - db, self.nvars));
            r = r.mul(&lcb).sub(&lcr.mul(&shift).mul(b));
            r = r.monic();
        }
        r
    }

    fn content_in(&self, v: usize) -> Poly {
        self.coeffs_in(v)
            .iter()
            .fold(Poly::zero(self.nvars), |g, c| gcd(&g, c))
    }

    fn primitive_in(&self, v: usize) -> Poly {
        let c = self.content_in(v);
        self.exact_div(&c).expect("content divides")
    }

    pub fn eval_var(&self, v: usize, value: &GaussRational) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v];
            e2[v] = 0;
            r.add_term(e2, c * &value.pow(k as i64).unwrap());
        }
        r
    }
}

fn unit(v: usize, k: u32, nvars: usize) -> Vec<u32> {
    let mut e = vec![0; nvars];
    e[v] = k;
    e
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one(a.nvars);
    }
    if a.len() == 1 || b.len() == 1 {
        // a monomial divides exactly the monomial part of the other side
        let mut e: Vec<u32> = if a.len() == 1 {
            a.leading().unwrap().0.clone()
        } else {
            b.leading().unwrap().0.clone()
        };
        for (t, _) in a.terms().chain(b.terms()) {
            for (x, y) in e.iter_mut().zip(t) {
                *x = (*x).min(*y);
            }
        }
        return Poly::monomial(GaussRational::one(), e);
    }
    // a variable present on one side only: fold the other side through
    // its coefficients, which keeps every intermediate gcd small
    for v in 0..a.nvars {
        let (da, db) = (a.degree_in(v), b.degree_in(v));
        if (da == 0) != (db == 0) {
            let (big, small) = if da > 0 { (a, b) } else { (b, a) };
            let mut g = small.monic();
            for c in big.coeffs_in(v).iter().rev() {
                if c.is_zero() {
                    continue;
                }
                g = gcd(&g, c);
                if g.as_constant().is_some() {
                    break;
                }
            }
            return g;
        }
    }
    let v = match (a.main_var(), b.main_var()) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => return Poly::one(a.nvars),
    };
    if a.degree_in(v) == 0 {
        return gcd(a, &b.content_in(v));
    }
    if b.degree_in(v) == 0 {
        return gcd(&a.content_in(v), b);
    }
    let c = gcd(&a.content_in(v), &b.content_in(v));
    let (mut p, mut q) = (a.primitive_in(v), b.primitive_in(v));
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = p.prem(&q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            q = Poly::one(a.nvars);
            break;
        }
        p = q;
        q = r.primitive_in(v);
    }
    c.mul(&q).monic()
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| format!("({c}){e:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Quotient of polynomials with no common factor and a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        RatFunc {
            num: p,
            den: Poly::one(n),
        }
    }

    pub fn constant(c: GaussRational, nvars: usize) -> Self {
        RatFunc::from_poly(Poly::constant(c, nvars))
    }

    /// Builds `num/den` in lowest terms; `None` if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFunc::constant(GaussRational::zero(), den.nvars()));
        }
        let g = gcd(&num, &den);
        let (mut n, mut d) = (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap());
        let lc = d.leading().unwrap().1.inv().unwrap();
        n = n.scale(&lc);
        d = d.scale(&lc);
        Some(RatFunc { num: n, den: d })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Scales so the denominator is monic. Both parts must already be
    /// coprime.
    fn normalized(num: Poly, den: Poly) -> RatFunc {
        let lc = den.leading().unwrap().1.clone();
        if lc.is_one() {
            return RatFunc { num, den };
        }
        let inv = lc.inv().unwrap();
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        // with both operands reduced, only factors of gcd(d1, d2) can cancel
        let g = gcd(&self.den, &o.den);
        if g.as_constant().is_some() {
            let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            return RatFunc::normalized(num, self.den.mul(&o.den));
        }
        let (d1, d2) = (
            self.den.exact_div(&g).unwrap(),
            o.den.exact_div(&g).unwrap(),
        );
        let num = self.num.mul(&d2).add(&o.num.mul(&d1));
        if num.is_zero() {
            return RatFunc::constant(GaussRational::zero(), g.nvars());
        }
        let den = self.den.mul(&d2);
        let h = gcd(&num, &g);
        if h.as_constant().is_some() {
            return RatFunc::normalized(num, den);
        }
        RatFunc::normalized(num.exact_div(&h).unwrap(), den.exact_div(&h).unwrap())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.num.is_zero() || o.num.is_zero() {
            return RatFunc::constant(GaussRational::zero(), self.num.nvars());
        }
        // cross cancellation keeps the gcds small
        let cancel = |n: &Poly, d: &Poly| {
            let g = gcd(n, d);
            if g.as_constant().is_some() {
                (n.clone(), d.clone())
            } else {
                (n.exact_div(&g).unwrap(), d.exact_div(&g).unwrap())
            }
        };
        let (n1, d2) = cancel(&self.num, &o.den);
        let (n2, d1) = cancel(&o.num, &self.den);
        RatFunc::normalized(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn inv(&self) -> Option<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Option<RatFunc> {
        Some(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Option<RatFunc> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        Some(RatFunc {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }
}
