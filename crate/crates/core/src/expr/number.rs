//! Exact Gaussian rationals and arbitrary-precision complex floats.

use std::cell::RefCell;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::EvalError;

const RM: RoundingMode = RoundingMode::ToEven;

/// A number `re + im*i` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GaussRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Self::real(self.re.recip()));
        }
        let n = self.norm_sqr();
        Some(GaussRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Some(acc)
    }

    /// Square root when it is again a Gaussian rational.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.im.is_zero() {
            let r = rational_sqrt(&self.re.abs())?;
            return Some(if self.re.is_negative() {
                GaussRational {
                    re: BigRational::zero(),
                    im: r,
                }
            } else {
                Self::real(r)
            });
        }
        // (p + qi)^2 = a + bi with p >= 0
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let p = rational_sqrt(&((&modulus + &self.re) / &two))?;
        if p.is_zero() {
            return None;
        }
        let q = &self.im / (&two * &p);
        Some(GaussRational { re: p, im: q })
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Parses the compact coefficient form used by formula files:
    /// `3`, `-3/2`, `5i`, `-1/4i`, `3/2+1/4i`.
    pub fn parse_compact(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.is_empty() {
            return None;
        }
        if let Some(body) = s.strip_suffix('i') {
            // split at the last sign that is not the leading one
            let split = body
                .char_indices()
                .skip(1)
                .filter(|(_, c)| *c == '+' || *c == '-')
                .map(|(k, _)| k)
                .last();
            let (re, im) = match split {
                Some(k) => (parse_rational(&body[..k])?, parse_im(&body[k..])?),
                None => (BigRational::zero(), parse_im(body)?),
            };
            return Some(GaussRational { re, im });
        }
        Some(Self::real(parse_rational(s)?))
    }

    /// Inverse of [`GaussRational::parse_compact`].
    pub fn to_compact(&self) -> String {
        let r = fmt_rational(&self.re);
        let i = fmt_rational(&self.im);
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => r,
            (true, false) => format!("{i}i"),
            (false, false) if self.im.is_negative() => format!("{r}{i}i"),
            (false, false) => format!("{r}+{i}i"),
        }
    }
}

fn parse_im(s: &str) -> Option<BigRational> {
    match s {
        "" | "+" => Some(BigRational::one()),
        "-" => Some(-BigRational::one()),
        _ => parse_rational(s),
    }
}

/// Parses `p`, `-p`, `p/q` with decimal integers.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => {
            if let Some((int, frac)) = s.split_once('.') {
                let neg = int.starts_with('-');
                let int_abs = int.trim_start_matches('-');
                let digits = format!("{int_abs}{frac}");
                let n: BigInt = if digits.is_empty() {
                    return None;
                } else {
                    digits.parse().ok()?
                };
                let d = num_traits::pow(BigInt::from(10), frac.len());
                let v = BigRational::new(n, d);
                return Some(if neg { -v } else { v });
            }
            Some(BigRational::from_integer(s.parse().ok()?))
        }
    }
}

pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = fmt_rational(&self.re);
        let im_abs = self.im.abs();
        let i = if im_abs.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", fmt_rational(&im_abs))
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{r}"),
            (true, false) if self.im.is_negative() => write!(f, "-{i}"),
            (true, false) => write!(f, "{i}"),
            (false, false) if self.im.is_negative() => write!(f, "{r} - {i}"),
            (false, false) => write!(f, "{r} + {i}"),
        }
    }
}

macro_rules! gauss_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a GaussRational> for &'a GaussRational {
            type Output = GaussRational;
            fn $m(self, o: &'a GaussRational) -> GaussRational {
                $body(self, o)
            }
        }
        impl $tr for GaussRational {
            type Output = GaussRational;
            fn $m(self, o: GaussRational) -> GaussRational {
                $body(&self, &o)
            }
        }
    };
}

gauss_binop!(Add, add, |a: &GaussRational, b: &GaussRational| {
    GaussRational {
        re: &a.re + &b.re,
        im: &a.im + &b.im,
    }
});
gauss_binop!(Sub, sub, |a: &GaussRational, b: &GaussRational| {
    GaussRational {
        re: &a.re - &b.re,
        im: &a.im - &b.im,
    }
});
gauss_binop!(Mul, mul, |a: &GaussRational, b: &GaussRational| {
    if a.im.is_zero() && b.im.is_zero() {
        GaussRational::real(&a.re * &b.re)
    } else {
        GaussRational {
            re: &a.re * &b.re - &a.im * &b.im,
            im: &a.re * &b.im + &a.im * &b.re,
        }
    }
});
gauss_binop!(Div, div, |a: &GaussRational, b: &GaussRational| {
    a * &b.inv().expect("division of Gaussian rational by zero")
});

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

/// Precision and constant cache for complex-float evaluation.
pub struct FloatCtx {
    pub prec: usize,
    consts: RefCell<Consts>,
}

impl FloatCtx {
    pub fn new(prec: usize) -> Self {
        FloatCtx {
            prec,
            consts: RefCell::new(Consts::new().expect("astro-float constants")),
        }
    }

    fn with_cc<R>(&self, f: impl FnOnce(&mut Consts) -> R) -> R {
        f(&mut self.consts.borrow_mut())
    }

    pub fn rational(&self, q: &BigRational) -> BigFloat {
        let p = self.prec + 64;
        let (n, d) = self.with_cc(|cc| {
            (
                BigFloat::parse(&q.numer().to_string(), Radix::Dec, p, RM, cc),
                BigFloat::parse(&q.denom().to_string(), Radix::Dec, p, RM, cc),
            )
        });
        n.div(&d, self.prec, RM)
    }
}

impl fmt::Debug for FloatCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FloatCtx({} bits)", self.prec)
    }
}

/// Complex number with `BigFloat` parts.
#[derive(Clone, Debug)]
pub struct CFloat {
    pub re: BigFloat,
    pub im: BigFloat,
    pub prec: usize,
}

impl CFloat {
    pub fn from_gauss(q: &GaussRational, ctx: &FloatCtx) -> Self {
        CFloat {
            re: ctx.rational(&q.re),
            im: ctx.rational(&q.im),
            prec: ctx.prec,
        }
    }

    fn real(re: BigFloat, prec: usize) -> Self {
        CFloat {
            re,
            im: BigFloat::from_word(0, prec),
            prec,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Max of |re| and |im|, a cheap magnitude for tolerance checks.
    pub fn magnitude(&self) -> BigFloat {
        let a = self.re.abs();
        let b = self.im.abs();
        if a.cmp(&b).unwrap_or(0) >= 0 {
            a
        } else {
            b
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        let parse = |b: &BigFloat| b.to_string().parse::<f64>().unwrap_or(f64::NAN);
        (parse(&self.re), parse(&self.im))
    }

    fn norm_sqr(&self) -> BigFloat {
        let p = self.prec;
        self.re
            .mul(&self.re, p, RM)
            .add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(self.prec, RM)
    }
}

impl fmt::Display for CFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, i) = self.to_f64_pair();
        if i == 0.0 {
            write!(f, "{r:.17e}")
        } else {
            write!(f, "{r:.17e}{:+.17e}*i", i)
        }
    }
}

/// Field operations needed by jet arithmetic.
pub trait Num: Clone + fmt::Debug {
    type Ctx;
    fn from_gauss(q: &GaussRational, ctx: &Self::Ctx) -> Self;
    fn add(&self, o: &Self, ctx: &Self::Ctx) -> Self;
    fn sub(&self, o: &Self, ctx: &Self::Ctx) -> Self;
    fn mul(&self, o: &Self, ctx: &Self::Ctx) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self, ctx: &Self::Ctx) -> Result<Self, EvalError>;
    fn is_zero(&self) -> bool;
    fn exp(&self, ctx: &Self::Ctx) -> Result<Self, EvalError>;
    fn ln(&self, ctx: &Self::Ctx) -> Result<Self, EvalError>;
    fn sin(&self, ctx: &Self::Ctx) -> Result<Self, EvalError>;
    fn cos(&self, ctx: &Self::Ctx) -> Result<Self, EvalError>;
    fn sqrt(&self, ctx: &Self::Ctx) -> Result<Self, EvalError>;
    fn to_scalar(&self) -> Scalar;
    /// Approximate `log2` of the magnitude, `None` for zero.
    fn log2_mag(&self) -> Option<i64>;
}

fn rational_log2(q: &BigRational) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(q.numer().bits() as i64 - q.denom().bits() as i64)
}

impl Num for GaussRational {
    type Ctx = ();
    fn from_gauss(q: &GaussRational, _: &()) -> Self {
        q.clone()
    }
    fn add(&self, o: &Self, _: &()) -> Self {
        self + o
    }
    fn sub(&self, o: &Self, _: &()) -> Self {
        self - o
    }
    fn mul(&self, o: &Self, _: &()) -> Self {
        if self.is_zero() || o.is_zero() {
            return GaussRational::zero();
        }
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self, _: &()) -> Result<Self, EvalError> {
        GaussRational::inv(self).ok_or(EvalError::DivisionByZero)
    }
    fn is_zero(&self) -> bool {
        GaussRational::is_zero(self)
    }
    fn exp(&self, _: &()) -> Result<Self, EvalError> {
        if self.is_zero() {
            Ok(GaussRational::one())
        } else {
            Err(EvalError::Inexact(format!("exp({self})")))
        }
    }
    fn ln(&self, _: &()) -> Result<Self, EvalError> {
        if self.is_one() {
            Ok(GaussRational::zero())
        } else if self.is_zero() {
            Err(EvalError::Domain("log(0)".into()))
        } else {
            Err(EvalError::Inexact(format!("log({self})")))
        }
    }
    fn sin(&self, _: &()) -> Result<Self, EvalError> {
        if self.is_zero() {
            Ok(GaussRational::zero())
        } else {
            Err(EvalError::Inexact(format!("sin({self})")))
        }
    }
    fn cos(&self, _: &()) -> Result<Self, EvalError> {
        if self.is_zero() {
            Ok(GaussRational::one())
        } else {
            Err(EvalError::Inexact(format!("cos({self})")))
        }
    }
    fn sqrt(&self, _: &()) -> Result<Self, EvalError> {
        self.sqrt_exact()
            .ok_or_else(|| EvalError::Inexact(format!("sqrt({self})")))
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }
    fn log2_mag(&self) -> Option<i64> {
        rational_log2(&self.re).max(rational_log2(&self.im))
    }
}

impl Num for CFloat {
    type Ctx = FloatCtx;
    fn from_gauss(q: &GaussRational, ctx: &FloatCtx) -> Self {
        CFloat::from_gauss(q, ctx)
    }
    fn add(&self, o: &Self, ctx: &FloatCtx) -> Self {
        let p = ctx.prec;
        CFloat {
            re: self.re.add(&o.re, p, RM),
            im: self.im.add(&o.im, p, RM),
            prec: p,
        }
    }
    fn sub(&self, o: &Self, ctx: &FloatCtx) -> Self {
        let p = ctx.prec;
        CFloat {
            re: self.re.sub(&o.re, p, RM),
            im: self.im.sub(&o.im, p, RM),
            prec: p,
        }
    }
    fn mul(&self, o: &Self, ctx: &FloatCtx) -> Self {
        let p = ctx.prec;
        if self.im.is_zero() && o.im.is_zero() {
            return CFloat::real(self.re.mul(&o.re, p, RM), p);
        }
        let re = self
            .re
            .mul(&o.re, p, RM)
            .sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self
            .re
            .mul(&o.im, p, RM)
            .add(&self.im.mul(&o.re, p, RM), p, RM);
        CFloat { re, im, prec: p }
    }
    fn neg(&self) -> Self {
        CFloat {
            re: self.re.clone().neg(),
            im: self.im.clone().neg(),
            prec: self.prec,
        }
    }
    fn inv(&self, ctx: &FloatCtx) -> Result<Self, EvalError> {
        if self.is_zero() {
            return Err(EvalError::DivisionByZero);
        }
        let p = ctx.prec;
        let n = self.norm_sqr();
        Ok(CFloat {
            re: self.re.div(&n, p, RM),
            im: self.im.clone().neg().div(&n, p, RM),
            prec: p,
        })
    }
    fn is_zero(&self) -> bool {
        CFloat::is_zero(self)
    }
    fn exp(&self, ctx: &FloatCtx) -> Result<Self, EvalError> {
        let p = ctx.prec;
        ctx.with_cc(|cc| {
            let m = self.re.exp(p, RM, cc);
            if self.im.is_zero() {
                return Ok(CFloat::real(m, p));
            }
            let c = self.im.cos(p, RM, cc);
            let s = self.im.sin(p, RM, cc);
            Ok(CFloat {
                re: m.mul(&c, p, RM),
                im: m.mul(&s, p, RM),
                prec: p,
            })
        })
    }
    fn ln(&self, ctx: &FloatCtx) -> Result<Self, EvalError> {
        if self.is_zero() {
            return Err(EvalError::Domain("log(0)".into()));
        }
        let p = ctx.prec;
        let modulus = self.abs();
        ctx.with_cc(|cc| {
            let re = modulus.ln(p, RM, cc);
            let im = atan2(&self.im, &self.re, p, cc);
            Ok(CFloat { re, im, prec: p })
        })
    }
    fn sin(&self, ctx: &FloatCtx) -> Result<Self, EvalError> {
        let p = ctx.prec;
        ctx.with_cc(|cc| {
            let (s, c) = (self.re.sin(p, RM, cc), self.re.cos(p, RM, cc));
            if self.im.is_zero() {
                return Ok(CFloat::real(s, p));
            }
            let (sh, ch) = (self.im.sinh(p, RM, cc), self.im.cosh(p, RM, cc));
            Ok(CFloat {
                re: s.mul(&ch, p, RM),
                im: c.mul(&sh, p, RM),
                prec: p,
            })
        })
    }
    fn cos(&self, ctx: &FloatCtx) -> Result<Self, EvalError> {
        let p = ctx.prec;
        ctx.with_cc(|cc| {
            let (s, c) = (self.re.sin(p, RM, cc), self.re.cos(p, RM, cc));
            if self.im.is_zero() {
                return Ok(CFloat::real(c, p));
            }
            let (sh, ch) = (self.im.sinh(p, RM, cc), self.im.cosh(p, RM, cc));
            Ok(CFloat {
                re: c.mul(&ch, p, RM),
                im: s.mul(&sh, p, RM).neg(),
                prec: p,
            })
        })
    }
    fn sqrt(&self, ctx: &FloatCtx) -> Result<Self, EvalError> {
        let p = ctx.prec;
        if self.im.is_zero() {
            if self.re.is_negative() {
                return Ok(CFloat {
                    re: BigFloat::from_word(0, p),
                    im: self.re.clone().neg().sqrt(p, RM),
                    prec: p,
                });
            }
            return Ok(CFloat::real(self.re.sqrt(p, RM), p));
        }
        let two = BigFloat::from_word(2, p);
        let r = self.abs();
        let a = r.add(&self.re, p, RM).div(&two, p, RM).sqrt(p, RM);
        let mut b = r.sub(&self.re, p, RM).div(&two, p, RM).sqrt(p, RM);
        if self.im.is_negative() {
            b = b.neg();
        }
        Ok(CFloat {
            re: a,
            im: b,
            prec: p,
        })
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Float(self.clone())
    }
    fn log2_mag(&self) -> Option<i64> {
        let m = self.magnitude();
        if m.is_zero() {
            None
        } else {
            m.exponent().map(|e| e as i64)
        }
    }
}

fn atan2(y: &BigFloat, x: &BigFloat, p: usize, cc: &mut Consts) -> BigFloat {
    let pi = cc.pi(p, RM);
    if x.is_zero() {
        let half = pi.div(&BigFloat::from_word(2, p), p, RM);
        return if y.is_negative() {
            half.neg()
        } else if y.is_zero() {
            BigFloat::from_word(0, p)
        } else {
            half
        };
    }
    let base = y.div(x, p, RM).atan(p, RM, cc);
    if !x.is_negative() {
        base
    } else if y.is_negative() {
        base.sub(&pi, p, RM)
    } else {
        base.add(&pi, p, RM)
    }
}

/// A value produced by evaluation.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(GaussRational),
    Float(CFloat),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(c) => c.is_zero(),
        }
    }

    pub fn as_exact(&self) -> Option<&GaussRational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        match self {
            Scalar::Exact(q) => q.to_f64_pair(),
            Scalar::Float(c) => c.to_f64_pair(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Float(c) => write!(f, "{c}"),
        }
    }
}

/// Binomial-style rational coefficient `num/den` as a Gaussian rational.
pub(crate) fn ratio(num: i64, den: i64) -> GaussRational {
    let g = num.gcd(&den).max(1);
    GaussRational::from_ratio(num / g, den / g)
}
