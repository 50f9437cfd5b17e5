//! Polynomials in the momenta with coefficients depending on position.

use std::collections::BTreeMap;
use std::fmt;

use crate::expr::{simplify, Expr, TriState, ZeroTester};
use crate::geometry::Metric2D;

/// Homogeneous `Σ_j c_j p_x^(n−j) p_y^j`; `coeffs[j]` multiplies `p_y^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentaPolynomial {
    pub coeffs: Vec<Expr>,
}

impl MomentaPolynomial {
    pub fn new(coeffs: Vec<Expr>) -> Self {
        assert!(!coeffs.is_empty());
        MomentaPolynomial { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        MomentaPolynomial {
            coeffs: vec![Expr::zero(); n + 1],
        }
    }

    /// `c p_x^i p_y^j`.
    pub fn monomial(c: Expr, i: usize, j: usize) -> Self {
        let mut p = MomentaPolynomial::zero(i + j);
        p.coeffs[j] = c;
        p
    }

    pub fn px() -> Self {
        MomentaPolynomial::monomial(Expr::one(), 1, 0)
    }

    pub fn py() -> Self {
        MomentaPolynomial::monomial(Expr::one(), 0, 1)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `p_x^i p_y^j`.
    pub fn coeff(&self, i: usize, j: usize) -> Expr {
        if i + j != self.degree() {
            return Expr::zero();
        }
        self.coeffs[j].clone()
    }

    /// Structurally zero (every coefficient a literal zero).
    pub fn is_literal_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn zip(&self, o: &Self, f: impl Fn(&Expr, &Expr) -> Expr) -> Self {
        let z = Expr::zero();
        if self.is_literal_zero() && self.degree() != o.degree() {
            return MomentaPolynomial {
                coeffs: o.coeffs.iter().map(|b| f(&z, b)).collect(),
            };
        }
        if o.is_literal_zero() && self.degree() != o.degree() {
            return MomentaPolynomial {
                coeffs: self.coeffs.iter().map(|a| f(a, &z)).collect(),
            };
        }
        assert_eq!(
            self.degree(),
            o.degree(),
            "sum of momenta polynomials of different degree"
        );
        MomentaPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, c: &Expr) -> Self {
        MomentaPolynomial {
            coeffs: self.coeffs.iter().map(|a| c * a).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = vec![Vec::new(); self.degree() + o.degree() + 1];
        for (j, a) in self.coeffs.iter().enumerate() {
            for (k, b) in o.coeffs.iter().enumerate() {
                if !a.is_zero() && !b.is_zero() {
                    out[j + k].push(a * b);
                }
            }
        }
        MomentaPolynomial {
            coeffs: out.into_iter().map(Expr::add_all).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = MomentaPolynomial::new(vec![Expr::one()]);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∂/∂p_x` (momentum 0) or `∂/∂p_y` (momentum 1).
    pub fn d_momentum(&self, m: usize) -> Self {
        let n = self.degree();
        if n == 0 {
            return MomentaPolynomial::zero(0);
        }
        let coeffs = (0..n)
            .map(|j| {
                // term p_x^(n-1-j) p_y^j comes from p_x^(n-j) p_y^j (m=0) or p_x^(n-1-j) p_y^(j+1) (m=1)
                if m == 0 {
                    Expr::int((n - j) as i64) * &self.coeffs[j]
                } else {
                    Expr::int((j + 1) as i64) * &self.coeffs[j + 1]
                }
            })
            .collect();
        MomentaPolynomial { coeffs }
    }

    /// Exact symbolic derivative of the coefficients in a coordinate.
    pub fn d_position(&self, var: &str) -> Self {
        MomentaPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.differentiate(var, 1))
                .collect(),
        }
    }

    /// Coefficients in canonical rational form.
    pub fn simplified(&self) -> Result<Self, crate::expr::simplify::SimplifyError> {
        Ok(MomentaPolynomial {
            coeffs: self.coeffs.iter().map(simplify).collect::<Result<_, _>>()?,
        })
    }

    /// `true` when every coefficient normalizes to zero. Only meaningful for
    /// coefficients that are rational functions (transcendental atoms are
    /// treated as independent).
    pub fn is_exactly_zero(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| simplify(c).is_ok_and(|s| s.is_zero()))
    }

    /// Serialized form: one `i j coefficient` line per nonzero term.
    pub fn to_entries(&self) -> Vec<(usize, usize, String)> {
        let n = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (n - j, j, c.to_string()))
            .collect()
    }
}

impl fmt::Display for MomentaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = |s: &str, k: usize| match k {
                0 => String::new(),
                1 => format!("*{s}"),
                _ => format!("*{s}^{k}"),
            };
            parts.push(format!("({c}){}{}", mono("px", n - j), mono("py", j)));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

/// `H = g^11 p_x² + 2 g^12 p_x p_y + g^22 p_y²`.
pub fn hamiltonian(g: &Metric2D) -> MomentaPolynomial {
    let gi = g.inverse();
    MomentaPolynomial::new(vec![
        gi[0][0].clone(),
        Expr::int(2) * &gi[0][1],
        gi[1][1].clone(),
    ])
}

/// `{F, G} = Σ_k ∂F/∂p_k ∂G/∂x^k − ∂F/∂x^k ∂G/∂p_k`.
pub fn poisson_bracket(
    f: &MomentaPolynomial,
    g: &MomentaPolynomial,
    coords: [&str; 2],
) -> MomentaPolynomial {
    let deg = (f.degree() + g.degree()).max(1) - 1;
    let mut acc = MomentaPolynomial::zero(deg);
    for (k, c) in coords.iter().enumerate() {
        let t1 = f.d_momentum(k).mul(&g.d_position(c));
        let t2 = f.d_position(c).mul(&g.d_momentum(k));
        if f.degree() + g.degree() == 0 {
            continue;
        }
        acc = acc.add(&t1).sub(&t2);
    }
    acc
}

/// Tests `{H, F} = 0` coefficient by coefficient.
pub fn is_first_integral(g: &Metric2D, f: &MomentaPolynomial, tester: &mut ZeroTester) -> TriState {
    let br = poisson_bracket(&hamiltonian(g), f, g.coord_names());
    let mut undecided = false;
    for c in &br.coeffs {
        if c.is_zero() {
            continue;
        }
        match tester.test(c).state {
            TriState::Nonzero => return TriState::Nonzero,
            TriState::Undecided => undecided = true,
            TriState::Zero => {}
        }
    }
    if undecided {
        TriState::Undecided
    } else {
        TriState::Zero
    }
}

/// Linear scalar differential operator `Σ c_(a,b) ∂x^a ∂y^b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScalarOp {
    pub terms: BTreeMap<(u32, u32), Expr>,
}

impl ScalarOp {
    pub fn zero() -> Self {
        ScalarOp::default()
    }

    pub fn mult(c: Expr) -> Self {
        let mut o = ScalarOp::zero();
        o.push((0, 0), c);
        o
    }

    fn push(&mut self, k: (u32, u32), c: Expr) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&k) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(k, v);
        }
    }

    pub fn add(&self, o: &ScalarOp) -> ScalarOp {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.push(*k, c.clone());
        }
        r
    }

    pub fn scale(&self, c: &Expr) -> ScalarOp {
        let mut r = ScalarOp::zero();
        for (k, v) in &self.terms {
            r.push(*k, c * v);
        }
        r
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    /// `self ∘ o` by the Leibniz rule.
    pub fn compose(&self, o: &ScalarOp, coords: [&str; 2]) -> ScalarOp {
        let mut r = ScalarOp::zero();
        for (&(a, b), c) in &self.terms {
            for (&(e, f), d) in &o.terms {
                for s in 0..=a {
                    for t in 0..=b {
                        let dd = d.differentiate(coords[0], s).differentiate(coords[1], t);
                        if dd.is_zero() {
                            continue;
                        }
                        let k = Expr::int((binom(a, s) * binom(b, t)) as i64);
                        r.push((a - s + e, b - t + f), k * c * dd);
                    }
                }
            }
        }
        r
    }

    pub fn apply(&self, u: &Expr, coords: [&str; 2]) -> Expr {
        Expr::add_all(
            self.terms
                .iter()
                .map(|(&(a, b), c)| c * u.differentiate(coords[0], a).differentiate(coords[1], b))
                .collect(),
        )
    }
}

fn binom(n: u32, k: u32) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Operator from the coefficient tuple to one scalar: `Σ_k ops[k](u_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VecOp {
    pub ops: Vec<ScalarOp>,
}

impl VecOp {
    pub fn apply(&self, u: &[Expr], coords: [&str; 2]) -> Expr {
        Expr::add_all(
            self.ops
                .iter()
                .zip(u)
                .map(|(o, v)| o.apply(v, coords))
                .collect(),
        )
    }

    fn compose_left(&self, s: &ScalarOp, coords: [&str; 2]) -> VecOp {
        VecOp {
            ops: self.ops.iter().map(|o| s.compose(o, coords)).collect(),
        }
    }

    fn add(&self, o: &VecOp) -> VecOp {
        VecOp {
            ops: self.ops.iter().zip(&o.ops).map(|(a, b)| a.add(b)).collect(),
        }
    }

    fn scale(&self, c: &Expr) -> VecOp {
        VecOp {
            ops: self.ops.iter().map(|a| a.scale(c)).collect(),
        }
    }
}

/// The `n + 2` first-order equations `{H, F} = 0` on the `n + 1` unknown
/// coefficients of `F`. Equation `e` is the coefficient of
/// `p_x^(n+1−e) p_y^e`; unknown `k` multiplies `p_x^(n−k) p_y^k`.
#[derive(Clone, Debug)]
pub struct PdeSystem {
    pub n: usize,
    pub coords: [String; 2],
    pub equations: Vec<VecOp>,
}

impl PdeSystem {
    pub fn apply(&self, u: &[Expr]) -> Vec<Expr> {
        let c = [self.coords[0].as_str(), self.coords[1].as_str()];
        self.equations.iter().map(|e| e.apply(u, c)).collect()
    }
}

pub fn flow_pde_system(g: &Metric2D, n: usize) -> PdeSystem {
    let h = hamiltonian(g);
    let [x, y] = g.coord_names();
    let mut eqs: Vec<VecOp> = (0..n + 2)
        .map(|_| VecOp {
            ops: vec![ScalarOp::zero(); n + 1],
        })
        .collect();
    for (a, ha) in h.coeffs.iter().enumerate() {
        let (hx, hy) = (ha.differentiate(x, 1), ha.differentiate(y, 1));
        for k in 0..=n {
            let ops = |e: usize, eqs: &mut Vec<VecOp>, key: (u32, u32), c: Expr| {
                let mut t = ScalarOp::zero();
                t.push(key, c);
                eqs[e].ops[k] = eqs[e].ops[k].add(&t);
            };
            // ∂H/∂p_x ∂F/∂x
            if a < 2 {
                ops(a + k, &mut eqs, (1, 0), Expr::int((2 - a) as i64) * ha);
            }
            // ∂H/∂p_y ∂F/∂y
            if a >= 1 {
                ops(a - 1 + k, &mut eqs, (0, 1), Expr::int(a as i64) * ha);
            }
            // −∂H/∂x ∂F/∂p_x
            if k < n {
                ops(a + k, &mut eqs, (0, 0), -(Expr::int((n - k) as i64) * &hx));
            }
            // −∂H/∂y ∂F/∂p_y
            if k >= 1 {
                ops(a + k - 1, &mut eqs, (0, 0), -(Expr::int(k as i64) * &hy));
            }
        }
    }
    PdeSystem {
        n,
        coords: g.coords.clone(),
        equations: eqs,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SymplecticError {
    #[error("multi-bracket implemented for degree 1 only, got {0}")]
    Unsupported(usize),
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // inserting the largest element at `pos` adds `len − pos` inversions
            let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

/// `(1/m!) Σ_{α∈S_m, β∈S_{m+1}} sgn α sgn β E^{α(0)}_{β(1)} ∘ … ∘ E^{α(m−1)}_{β(m)} ∘ E_{β(m+1)}`
/// with `m = n + 1`, without reduction modulo the system.
pub fn multi_bracket(sys: &PdeSystem) -> Result<VecOp, SymplecticError> {
    if sys.n != 1 {
        return Err(SymplecticError::Unsupported(sys.n));
    }
    let m = sys.n + 1;
    let coords = [sys.coords[0].as_str(), sys.coords[1].as_str()];
    let mut total = VecOp {
        ops: vec![ScalarOp::zero(); m],
    };
    let betas = permutations(m + 1);
    for (alpha, sa) in permutations(m) {
        for (beta, sb) in &betas {
            let mut acc = sys.equations[beta[m]].clone();
            for s in (0..m).rev() {
                acc = acc.compose_left(&sys.equations[beta[s]].ops[alpha[s]], coords);
            }
            total = total.add(&acc.scale(&Expr::int(sa * sb)));
        }
    }
    let fact: i64 = (1..=m as i64).product();
    Ok(total.scale(&Expr::rational(1, fact)))
}
