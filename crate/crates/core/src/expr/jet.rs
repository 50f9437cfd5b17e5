//! Truncated bivariate Taylor series.
//!
//! Coefficient `(a, b)` multiplies `X^a Y^b` where `X, Y` are offsets from the
//! expansion point, so it equals `∂x^a ∂y^b f / (a! b!)`. Storage is ordered by
//! total degree, which makes truncation a prefix.

use super::number::{ratio, GaussRational, Num};
use super::EvalError;

#[derive(Clone, Debug)]
pub struct Jet<T> {
    pub order: u32,
    pub c: Vec<T>,
}

fn len(n: u32) -> usize {
    let n = n as usize;
    (n + 1) * (n + 2) / 2
}

pub fn idx(a: u32, b: u32) -> usize {
    let t = (a + b) as usize;
    t * (t + 1) / 2 + b as usize
}

impl<T: Num> Jet<T> {
    pub fn constant(v: T, n: u32, ctx: &T::Ctx) -> Self {
        let z = T::from_gauss(&GaussRational::zero(), ctx);
        let mut c = vec![z; len(n)];
        c[0] = v;
        Jet { order: n, c }
    }

    /// The coordinate function with value `v` in direction `dir` (0 or 1).
    pub fn variable(v: T, dir: usize, n: u32, ctx: &T::Ctx) -> Self {
        let mut j = Jet::constant(v, n, ctx);
        if n >= 1 {
            j.c[1 + dir] = T::from_gauss(&GaussRational::one(), ctx);
        }
        j
    }

    pub fn c0(&self) -> &T {
        &self.c[0]
    }

    pub fn coeff(&self, a: u32, b: u32) -> &T {
        &self.c[idx(a, b)]
    }

    pub fn truncate(&self, n: u32) -> Self {
        if n >= self.order {
            return self.clone();
        }
        Jet {
            order: n,
            c: self.c[..len(n)].to_vec(),
        }
    }

    pub fn add(&self, o: &Self, ctx: &T::Ctx) -> Self {
        let n = self.order.min(o.order);
        let c = (0..len(n)).map(|k| self.c[k].add(&o.c[k], ctx)).collect();
        Jet { order: n, c }
    }

    pub fn sub(&self, o: &Self, ctx: &T::Ctx) -> Self {
        let n = self.order.min(o.order);
        let c = (0..len(n)).map(|k| self.c[k].sub(&o.c[k], ctx)).collect();
        Jet { order: n, c }
    }

    pub fn neg(&self) -> Self {
        Jet {
            order: self.order,
            c: self.c.iter().map(|v| v.neg()).collect(),
        }
    }

    pub fn scale(&self, s: &T, ctx: &T::Ctx) -> Self {
        Jet {
            order: self.order,
            c: self.c.iter().map(|v| v.mul(s, ctx)).collect(),
        }
    }

    pub fn mul(&self, o: &Self, ctx: &T::Ctx) -> Self {
        let n = self.order.min(o.order);
        let mut out = Jet::constant(T::from_gauss(&GaussRational::zero(), ctx), n, ctx);
        for t1 in 0..=n {
            for b1 in 0..=t1 {
                let u = &self.c[idx(t1 - b1, b1)];
                if u.is_zero() {
                    continue;
                }
                for t2 in 0..=(n - t1) {
                    for b2 in 0..=t2 {
                        let v = &o.c[idx(t2 - b2, b2)];
                        if v.is_zero() {
                            continue;
                        }
                        let k = idx(t1 - b1 + t2 - b2, b1 + b2);
                        out.c[k] = out.c[k].add(&u.mul(v, ctx), ctx);
                    }
                }
            }
        }
        out
    }

    /// `self - c0`, the nilpotent part.
    fn tail(&self, ctx: &T::Ctx) -> Self {
        let mut t = self.clone();
        t.c[0] = T::from_gauss(&GaussRational::zero(), ctx);
        t
    }

    /// `Σ a_k h^k` with `h = self - c0`, by Horner's rule.
    pub fn compose(&self, a: &[T], ctx: &T::Ctx) -> Self {
        let h = self.tail(ctx);
        let n = self.order as usize;
        let top = a.len().min(n + 1);
        let mut acc = Jet::constant(a[top - 1].clone(), self.order, ctx);
        for k in (0..top - 1).rev() {
            acc = acc.mul(&h, ctx);
            acc.c[0] = acc.c[0].add(&a[k], ctx);
        }
        acc
    }

    pub fn inv(&self, ctx: &T::Ctx) -> Result<Self, EvalError> {
        let r = self.c0().inv(ctx)?;
        // 1/(c0 + h) = Σ (-1)^k r^{k+1} h^k
        let mut a = Vec::with_capacity(self.order as usize + 1);
        let mut p = r.clone();
        for k in 0..=self.order {
            a.push(if k % 2 == 0 { p.clone() } else { p.neg() });
            p = p.mul(&r, ctx);
        }
        Ok(self.compose(&a, ctx))
    }

    pub fn powi(&self, n: i64, ctx: &T::Ctx) -> Result<Self, EvalError> {
        let base = if n < 0 { self.inv(ctx)? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Jet::constant(T::from_gauss(&GaussRational::one(), ctx), self.order, ctx);
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq, ctx);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq, ctx);
            }
        }
        Ok(acc)
    }

    /// Partial derivative in direction `dir`; the order drops by one.
    pub fn deriv(&self, dir: usize, ctx: &T::Ctx) -> Self {
        assert!(self.order >= 1, "derivative of an order-0 jet");
        let n = self.order - 1;
        let mut c = Vec::with_capacity(len(n));
        for t in 0..=n {
            for b in 0..=t {
                let a = t - b;
                let (src, m) = if dir == 0 {
                    (idx(a + 1, b), a + 1)
                } else {
                    (idx(a, b + 1), b + 1)
                };
                c.push(
                    self.c[src].mul(&T::from_gauss(&GaussRational::from_int(m as i64), ctx), ctx),
                );
            }
        }
        Jet { order: n, c }
    }

    pub fn exp(&self, ctx: &T::Ctx) -> Result<Self, EvalError> {
        let e0 = self.c0().exp(ctx)?;
        let mut a = Vec::new();
        let mut fact = 1i64;
        for k in 0..=self.order as i64 {
            if k > 0 {
                fact *= k;
            }
            a.push(e0.mul(&T::from_gauss(&ratio(1, fact), ctx), ctx));
        }
        Ok(self.compose(&a, ctx))
    }

    pub fn ln(&self, ctx: &T::Ctx) -> Result<Self, EvalError> {
        let l0 = self.c0().ln(ctx)?;
        let r = self.c0().inv(ctx)?;
        let mut a = vec![l0];
        let mut p = r.clone();
        for k in 1..=self.order as i64 {
            let s = if k % 2 == 1 {
                ratio(1, k)
            } else {
                ratio(-1, k)
            };
            a.push(p.mul(&T::from_gauss(&s, ctx), ctx));
            p = p.mul(&r, ctx);
        }
        Ok(self.compose(&a, ctx))
    }

    fn trig(&self, start: usize, ctx: &T::Ctx) -> Result<Self, EvalError> {
        let s = self.c0().sin(ctx)?;
        let c = self.c0().cos(ctx)?;
        // derivative cycle of sin: sin, cos, -sin, -cos
        let cyc = [s.clone(), c.clone(), s.neg(), c.neg()];
        let mut a = Vec::new();
        let mut fact = 1i64;
        for k in 0..=self.order as i64 {
            if k > 0 {
                fact *= k;
            }
            a.push(cyc[(start + k as usize) % 4].mul(&T::from_gauss(&ratio(1, fact), ctx), ctx));
        }
        Ok(self.compose(&a, ctx))
    }

    pub fn sin(&self, ctx: &T::Ctx) -> Result<Self, EvalError> {
        self.trig(0, ctx)
    }

    pub fn cos(&self, ctx: &T::Ctx) -> Result<Self, EvalError> {
        self.trig(1, ctx)
    }

    pub fn sqrt(&self, ctx: &T::Ctx) -> Result<Self, EvalError> {
        let s0 = self.c0().sqrt(ctx)?;
        let r = self.c0().inv(ctx)?;
        // binom(1/2, k) = Π_{j<k} (1/2 - j) / k!
        let mut a = vec![s0.clone()];
        let mut binom = GaussRational::one();
        let mut p = s0.mul(&r, ctx);
        for k in 1..=self.order as i64 {
            binom = &binom * &ratio(3 - 2 * k, 2 * k);
            a.push(p.mul(&T::from_gauss(&binom, ctx), ctx));
            p = p.mul(&r, ctx);
        }
        Ok(self.compose(&a, ctx))
    }
}
