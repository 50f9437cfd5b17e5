//! Randomized identity testing at rational sample points.
//!
//! An expression is declared zero when it vanishes at every one of `samples`
//! admissible points of the box, nonzero as soon as one admissible point
//! gives a nonzero value. Points where evaluation fails (a pole, a log of a
//! nonpositive number, a transcendental value in exact mode) are skipped for
//! that expression only. If too few admissible points are found the answer
//! is undecided.

use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eval::{Evaluator, Mode};
use super::number::{CFloat, FloatCtx, GaussRational, Num, Scalar};
use super::{EvalError, Expr};

/// Sampling box `[x0, x1] × [y0, y1]`. An interval with equal ends pins that
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Box2 {
    pub x: (BigRational, BigRational),
    pub y: (BigRational, BigRational),
}

impl Box2 {
    pub fn new(x: (BigRational, BigRational), y: (BigRational, BigRational)) -> Self {
        Box2 { x, y }
    }

    pub fn from_ints(x0: i64, x1: i64, y0: i64, y1: i64) -> Self {
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        Box2 {
            x: (q(x0), q(x1)),
            y: (q(y0), q(y1)),
        }
    }

    /// `true` unless both intervals are single points.
    pub fn is_valid(&self) -> bool {
        self.x.0 <= self.x.1
            && self.y.0 <= self.y.1
            && (self.x.0 != self.x.1 || self.y.0 != self.y.1)
    }
}

impl Default for Box2 {
    fn default() -> Self {
        Box2::from_ints(1, 2, 1, 2)
    }
}

/// How identity tests are carried out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroPolicy {
    pub samples: usize,
    /// Candidate points drawn before giving up, counted per expression.
    pub max_draws: usize,
    pub max_denominator: u64,
    pub seed: u64,
    pub mode: Mode,
    /// Float mode: `|v| <= 2^eps_log2 * (largest intermediate magnitude)`
    /// counts as zero.
    pub eps_log2: i64,
}

impl Default for ZeroPolicy {
    fn default() -> Self {
        ZeroPolicy {
            samples: 7,
            max_draws: 40,
            max_denominator: 97,
            seed: 0x5eed,
            mode: Mode::Exact,
            eps_log2: -180,
        }
    }
}

impl ZeroPolicy {
    pub fn float(prec: usize) -> Self {
        ZeroPolicy {
            mode: Mode::Float { prec },
            eps_log2: -((prec as i64) * 3 / 4),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl fmt::Display for SamplePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use super::number::fmt_rational;
        write!(f, "({}, {})", fmt_rational(&self.x), fmt_rational(&self.y))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriState {
    Zero,
    Nonzero,
    Undecided,
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriState::Zero => "zero",
            TriState::Nonzero => "nonzero",
            TriState::Undecided => "undecided",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ZeroOutcome {
    pub state: TriState,
    /// Points where the expression could be evaluated.
    pub admissible: usize,
    pub rejected: usize,
    /// First point with a nonzero value.
    pub witness: Option<(SamplePoint, Scalar)>,
    pub notes: Vec<String>,
}

enum Evals {
    Exact(Vec<Option<Evaluator<GaussRational>>>),
    Float(Rc<FloatCtx>, Vec<Option<Evaluator<CFloat>>>),
}

/// Reusable tester: sample points are fixed at construction and each
/// point keeps an evaluator cache, so subexpressions shared between tests
/// are evaluated once.
pub struct ZeroTester {
    policy: ZeroPolicy,
    coords: [String; 2],
    params: Vec<(String, GaussRational)>,
    points: Vec<SamplePoint>,
    evals: Evals,
}

fn draw(rng: &mut ChaCha8Rng, lo: &BigRational, hi: &BigRational, max_den: u64) -> BigRational {
    if lo == hi {
        return lo.clone();
    }
    let d = rng.gen_range(2..=max_den.max(2));
    let t = rng.gen_range(1..d);
    lo + (hi - lo) * BigRational::new(BigInt::from(t), BigInt::from(d))
}

impl ZeroTester {
    pub fn new(
        policy: ZeroPolicy,
        coords: [&str; 2],
        params: Vec<(String, GaussRational)>,
        bx: &Box2,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
        let n = policy.max_draws.max(policy.samples);
        let mut points: Vec<SamplePoint> = Vec::with_capacity(n);
        let mut attempts = 0usize;
        while points.len() < n {
            attempts += 1;
            let p = SamplePoint {
                x: draw(&mut rng, &bx.x.0, &bx.x.1, policy.max_denominator),
                y: draw(&mut rng, &bx.y.0, &bx.y.1, policy.max_denominator),
            };
            // distinct points unless the box is too small to allow it
            if !points.contains(&p) || attempts > 100 * n {
                points.push(p);
            }
        }
        let evals = match policy.mode {
            Mode::Exact => Evals::Exact((0..n).map(|_| None).collect()),
            Mode::Float { prec } => {
                Evals::Float(Rc::new(FloatCtx::new(prec)), (0..n).map(|_| None).collect())
            }
        };
        ZeroTester {
            policy,
            coords: [coords[0].to_string(), coords[1].to_string()],
            params,
            points,
            evals,
        }
    }

    pub fn policy(&self) -> &ZeroPolicy {
        &self.policy
    }

    pub fn points(&self) -> &[SamplePoint] {
        &self.points
    }

    fn assignment(&self, k: usize) -> Vec<(String, GaussRational)> {
        let p = &self.points[k];
        let mut v = vec![
            (self.coords[0].clone(), GaussRational::real(p.x.clone())),
            (self.coords[1].clone(), GaussRational::real(p.y.clone())),
        ];
        v.extend(self.params.iter().cloned());
        v
    }

    /// Values of several expressions at sample point `k`.
    pub fn values_at(&mut self, k: usize, es: &[Expr]) -> Vec<Result<Scalar, EvalError>> {
        let assign = self.assignment(k);
        let coords = [self.coords[0].as_str(), self.coords[1].as_str()];
        match &mut self.evals {
            Evals::Exact(v) => {
                let ev = v[k].get_or_insert_with(|| Evaluator::new(Rc::new(()), coords, assign));
                ev.values(es)
                    .into_iter()
                    .map(|r| r.map(Scalar::Exact))
                    .collect()
            }
            Evals::Float(ctx, v) => {
                let ctx = ctx.clone();
                let ev = v[k].get_or_insert_with(|| {
                    let vals = assign
                        .iter()
                        .map(|(n, q)| (n.clone(), CFloat::from_gauss(q, &ctx)))
                        .collect();
                    Evaluator::new(ctx.clone(), coords, vals)
                });
                ev.values(es)
                    .into_iter()
                    .map(|r| r.map(Scalar::Float))
                    .collect()
            }
        }
    }

    /// Whether the value of `e` at point `k` counts as zero.
    fn zero_at(&mut self, k: usize, e: &Expr) -> Result<(bool, Scalar), EvalError> {
        let v = self.values_at(k, std::slice::from_ref(e)).pop().unwrap()?;
        let zero = match (&v, &self.evals) {
            (Scalar::Exact(q), _) => q.is_zero(),
            (Scalar::Float(c), Evals::Float(_, evs)) => match c.log2_mag() {
                None => true,
                Some(m) => {
                    let scale = evs[k]
                        .as_ref()
                        .and_then(|ev| ev.max_log2_magnitude(e))
                        .unwrap_or(0)
                        .max(0);
                    m <= scale + self.policy.eps_log2
                }
            },
            _ => unreachable!(),
        };
        Ok((zero, v))
    }

    pub fn test(&mut self, e: &Expr) -> ZeroOutcome {
        let mut out = ZeroOutcome {
            state: TriState::Undecided,
            admissible: 0,
            rejected: 0,
            witness: None,
            notes: Vec::new(),
        };
        let mut zeros = 0usize;
        for k in 0..self.points.len() {
            match self.zero_at(k, e) {
                Ok((true, _)) => {
                    out.admissible += 1;
                    zeros += 1;
                    if zeros >= self.policy.samples {
                        break;
                    }
                }
                Ok((false, v)) => {
                    out.admissible += 1;
                    out.witness = Some((self.points[k].clone(), v));
                    break;
                }
                Err(EvalError::Unassigned(s)) => {
                    out.notes.push(format!("symbol `{s}` has no value"));
                    return out;
                }
                Err(err) => {
                    out.rejected += 1;
                    if out.notes.len() < 3 {
                        out.notes.push(format!("skipped {}: {err}", self.points[k]));
                    }
                }
            }
        }
        if out.witness.is_some() {
            out.state = TriState::Nonzero;
            if zeros > 0 {
                out.notes
                    .push(format!("mixed: zero at {zeros} earlier point(s)"));
            }
        } else if zeros >= self.policy.samples {
            out.state = TriState::Zero;
        }
        out
    }
}

/// One-off identity test.
pub fn is_identically_zero(
    e: &Expr,
    coords: [&str; 2],
    params: Vec<(String, GaussRational)>,
    bx: &Box2,
    policy: &ZeroPolicy,
) -> ZeroOutcome {
    ZeroTester::new(policy.clone(), coords, params, bx).test(e)
}
