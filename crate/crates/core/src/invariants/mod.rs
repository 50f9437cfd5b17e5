//! Scalar curvature invariants and their derived combinations.
//!
//! `I_{i,j}` contracts `d_∇^{l} K` (with `l = i - 2`) against `grad K` in the
//! first `l - j` slots and `sgrad K` in the last `j`. Letters encode `j`:
//! `I5a` is `j = 0`, `I5b` is `j = 1`, and so on. `I2 = K`, `I3 = |∇K|²`.

pub mod formula;
pub mod identities;

use std::collections::BTreeMap;

use crate::expr::{Expr, GaussRational};
use crate::geometry::{CovariantTensor, GeometryError, Metric2D, VectorField};

pub use formula::{Formula, FormulaError};
pub use identities::{identity_suite, IdentityReport, IdentityResult};

/// Sign `s` in the seventh-order relations `B𝔍₁ − s·A𝔍₂ = 0` and
/// `A𝔍₃ − s·B𝔍₄ = 0`, fixed for real intrinsic invariants with slot 1 the
/// newest derivative and `sgrad K = (−K_y, K_x)/(orientation·√det g)`.
pub const JFRAK_PAIRING_SIGN: i64 = -1;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("order {0} outside 2..=7")]
    Order(usize),
    #[error("{0} vanishes identically; the quantity is undefined")]
    Degenerate(&'static str),
    #[error("invariant `{0}` not in this frame")]
    Missing(String),
}

/// Name of `I_{order, j}`.
pub fn invariant_name(order: usize, j: usize) -> String {
    match order {
        2 => "I2".into(),
        3 => "I3".into(),
        _ => format!("I{order}{}", (b'a' + j as u8) as char),
    }
}

/// All invariant names up to `max_order`, in order.
pub fn invariant_names(max_order: usize) -> Vec<String> {
    let mut out = Vec::new();
    for i in 2..=max_order {
        if i <= 3 {
            out.push(invariant_name(i, 0));
        } else {
            for j in 0..=(i - 2) {
                out.push(invariant_name(i, j));
            }
        }
    }
    out
}

/// Differential order of a named invariant, e.g. 5 for `I5c`.
pub fn order_of(name: &str) -> Option<usize> {
    name.strip_prefix('I')?
        .chars()
        .next()?
        .to_digit(10)
        .map(|d| d as usize)
}

/// Curvature and the invariant tower of one metric.
#[derive(Clone, Debug)]
pub struct InvariantFrame {
    pub metric: Metric2D,
    pub max_order: usize,
    pub k: Expr,
    pub grad_k: VectorField,
    pub sgrad_k: VectorField,
    /// `tensors[l - 1]` is `d_∇^l K`.
    pub tensors: Vec<CovariantTensor>,
    values: BTreeMap<String, Expr>,
}

impl InvariantFrame {
    pub fn new(metric: &Metric2D, max_order: usize) -> Result<Self, InvariantError> {
        if !(2..=7).contains(&max_order) {
            return Err(InvariantError::Order(max_order));
        }
        let k = metric.gauss_curvature();
        let grad_k = metric.grad(&k);
        let sgrad_k = metric.sgrad(&k)?;
        let tensors = metric.covariant_tower(&k, (max_order - 2).max(1));
        let mut values = BTreeMap::new();
        values.insert("I2".to_string(), k.clone());
        if max_order >= 3 {
            values.insert("I3".to_string(), tensors[0].contract(&[&grad_k]));
        }
        for order in 4..=max_order {
            let l = order - 2;
            for j in 0..=l {
                let vs: Vec<&VectorField> = (0..l)
                    .map(|s| if s < l - j { &grad_k } else { &sgrad_k })
                    .collect();
                values.insert(invariant_name(order, j), tensors[l - 1].contract(&vs));
            }
        }
        Ok(InvariantFrame {
            metric: metric.clone(),
            max_order,
            k,
            grad_k,
            sgrad_k,
            tensors,
            values,
        })
    }

    pub fn get(&self, name: &str) -> Option<&Expr> {
        self.values.get(name)
    }

    pub fn expect(&self, name: &str) -> Result<&Expr, InvariantError> {
        self.get(name)
            .ok_or_else(|| InvariantError::Missing(name.to_string()))
    }

    pub fn names(&self) -> Vec<String> {
        invariant_names(self.max_order)
    }

    /// Lie derivative along `grad K` (direction 1) or `sgrad K` (direction 2).
    pub fn invariant_derivative(&self, direction: u8, e: &Expr) -> Expr {
        let v = if direction == 1 {
            &self.grad_k
        } else {
            &self.sgrad_k
        };
        let [x, y] = self.metric.coord_names();
        &v[0] * e.partial(x) + &v[1] * e.partial(y)
    }

    /// Evaluates a formula over this frame's invariants.
    pub fn formula(&self, f: &Formula) -> Result<Expr, InvariantError> {
        Ok(f.to_expr(|n| self.get(n).cloned())?)
    }
}

/// `J4`, `J5`, the four order-6 relations `V1..V4`, the complex pair `A, B`
/// and the seventh-order `𝔍1..𝔍4`.
///
/// The `V`s carry the denominator `175 I3² I4b`; when `I4b` is literally
/// zero they are absent.
#[derive(Clone, Debug)]
pub struct DerivedInvariants {
    pub j4: Expr,
    pub j5: Expr,
    pub v: Option<[Expr; 4]>,
    pub jfrak: [Expr; 4],
}

impl DerivedInvariants {
    pub fn new(frame: &InvariantFrame) -> Result<Self, InvariantError> {
        if frame.max_order < 7 {
            return Err(InvariantError::Order(frame.max_order));
        }
        let load = |n: &str| frame.formula(&formula::bundled(n));
        let i3 = frame.expect("I3")?;
        let i4b = frame.expect("I4b")?;
        let den = Expr::int(175) * i3.pow(2) * i4b;
        let v = if den.is_zero() {
            None
        } else {
            let mut v = Vec::new();
            for n in ["I6a_rel", "I6b_rel", "I6c_rel", "I6d_rel"] {
                v.push(load(n)? / &den);
            }
            Some(v.try_into().unwrap())
        };
        Ok(DerivedInvariants {
            j4: load("J4")?,
            j5: load("J5")?,
            v,
            jfrak: [
                load("Jfrak1")?,
                load("Jfrak2")?,
                load("Jfrak3")?,
                load("Jfrak4")?,
            ],
        })
    }

    pub fn vs(&self) -> Result<&[Expr; 4], InvariantError> {
        self.v
            .as_ref()
            .ok_or(InvariantError::Degenerate("I3^2 I4b"))
    }

    /// `A = (V2 + V4) + i(V1 + V3)`, `B = (3V2 − V4) + i(3V3 − V1)`.
    pub fn a_b(&self) -> Result<(Expr, Expr), InvariantError> {
        let v = self.vs()?;
        let i = Expr::imag_unit();
        let three = Expr::int(3);
        let a = (&v[1] + &v[3]) + &i * (&v[0] + &v[2]);
        let b = (&three * &v[1] - &v[3]) + &i * (&three * &v[2] - &v[0]);
        Ok((a, b))
    }

    /// `|A|² − |B|²` written through the real `V`s.
    pub fn modulus_difference(&self) -> Result<Expr, InvariantError> {
        let v = self.vs()?;
        let three = Expr::int(3);
        Ok(Expr::add_all(vec![
            (&v[1] + &v[3]).pow(2),
            (&v[0] + &v[2]).pow(2),
            -(&three * &v[1] - &v[3]).pow(2),
            -(&three * &v[2] - &v[0]).pow(2),
        ]))
    }

    /// `(B𝔍₁ − s·A𝔍₂, A𝔍₃ − s·B𝔍₄)`.
    pub fn seventh_order_residuals(&self, sign: i64) -> Result<(Expr, Expr), InvariantError> {
        let (a, b) = self.a_b()?;
        let s = Expr::int(sign);
        let j = &self.jfrak;
        Ok((&b * &j[0] - &s * &a * &j[1], &a * &j[2] - &s * &b * &j[3]))
    }
}

/// Scale exponent of an invariant of order `i` under `g -> c g`: the value
/// is multiplied by `c^(3 - 2i)`.
pub fn rescale_exponent(order: usize) -> i64 {
    3 - 2 * order as i64
}

/// Constant factor by which `name` changes under `g -> c g`.
pub fn rescale_factor(name: &str, c: &GaussRational) -> Option<GaussRational> {
    c.pow(rescale_exponent(order_of(name)?))
}
