//! Metric-level differential geometry in two coordinates.

use std::fmt;

use crate::expr::{Expr, GaussRational, ParseContext, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    Riemannian,
    Lorentzian,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("{0} is not supported for Lorentzian metrics")]
    Unsupported(&'static str),
    #[error("determinant of the metric is identically zero")]
    Degenerate,
    #[error("curvature gradient vanishes identically")]
    FlatGradient,
    #[error("orientation must be +1 or -1, got {0}")]
    Orientation(i64),
    #[error("covariant derivative order {0} outside 1..=6")]
    Order(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A symmetric 2x2 metric tensor field `g11 dx^2 + 2 g12 dx dy + g22 dy^2`.
#[derive(Clone, Debug)]
pub struct Metric2D {
    pub g11: Expr,
    pub g12: Expr,
    pub g22: Expr,
    pub coords: [String; 2],
    pub orientation: i8,
    pub signature: Signature,
    /// Values for the parameters appearing in the entries.
    pub params: Vec<(String, GaussRational)>,
}

/// Contravariant vector field in the coordinate frame.
pub type VectorField = [Expr; 2];

/// `gamma[k][i][j]` is the Christoffel symbol Γ^k_ij.
#[derive(Clone, Debug)]
pub struct ChristoffelSymbols {
    pub gamma: [[[Expr; 2]; 2]; 2],
}

impl ChristoffelSymbols {
    pub fn get(&self, k: usize, i: usize, j: usize) -> &Expr {
        &self.gamma[k][i][j]
    }
}

/// Covariant tensor of valence `l`. Component `(i1, .., il)` sits at the
/// binary index with `i1` as the most significant digit; slot 1 holds the
/// most recent derivative.
#[derive(Clone, Debug)]
pub struct CovariantTensor {
    pub valence: usize,
    pub comps: Vec<Expr>,
}

impl CovariantTensor {
    pub fn index(slots: &[usize]) -> usize {
        slots.iter().fold(0, |acc, s| acc * 2 + s)
    }

    pub fn get(&self, slots: &[usize]) -> &Expr {
        assert_eq!(slots.len(), self.valence);
        &self.comps[Self::index(slots)]
    }

    /// Contracts every slot with the given vector fields, in order.
    pub fn contract(&self, vs: &[&VectorField]) -> Expr {
        assert_eq!(vs.len(), self.valence);
        let mut terms = Vec::with_capacity(self.comps.len());
        for (k, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut fs = vec![c.clone()];
            for (s, v) in vs.iter().enumerate() {
                let bit = (k >> (self.valence - 1 - s)) & 1;
                fs.push(v[bit].clone());
            }
            terms.push(Expr::mul_all(fs));
        }
        Expr::add_all(terms)
    }
}

impl Metric2D {
    pub fn new(g11: Expr, g12: Expr, g22: Expr) -> Self {
        Metric2D {
            g11,
            g12,
            g22,
            coords: ["x".into(), "y".into()],
            orientation: 1,
            signature: Signature::Riemannian,
            params: Vec::new(),
        }
    }

    /// Conformal metric `f (dx^2 + dy^2)`.
    pub fn conformal(f: Expr) -> Self {
        Metric2D::new(f.clone(), Expr::zero(), f)
    }

    /// Parses the three entries; parameter names come from `ctx`.
    pub fn parse(
        g11: &str,
        g12: &str,
        g22: &str,
        ctx: &ParseContext,
    ) -> Result<Self, GeometryError> {
        let mut m = Metric2D::new(
            Expr::parse(g11, ctx)?,
            Expr::parse(g12, ctx)?,
            Expr::parse(g22, ctx)?,
        );
        m.coords = ctx.coords.clone();
        Ok(m)
    }

    pub fn with_coords(mut self, x: &str, y: &str) -> Self {
        self.coords = [x.into(), y.into()];
        self
    }

    pub fn with_params(mut self, params: Vec<(String, GaussRational)>) -> Self {
        self.params = params;
        self
    }

    pub fn with_orientation(mut self, o: i8) -> Self {
        self.orientation = o;
        self
    }

    pub fn with_signature(mut self, s: Signature) -> Self {
        self.signature = s;
        self
    }

    pub fn flipped(&self) -> Self {
        let mut m = self.clone();
        m.orientation = -self.orientation;
        m
    }

    /// `c * g` for a constant `c`.
    pub fn scaled(&self, c: &GaussRational) -> Self {
        let k = Expr::constant(c.clone());
        let mut m = self.clone();
        m.g11 = &k * &self.g11;
        m.g12 = &k * &self.g12;
        m.g22 = &k * &self.g22;
        m
    }

    /// Pullback under `(x, y) -> (a x + b, c y + d)`.
    pub fn pullback_affine(
        &self,
        a: &GaussRational,
        b: &GaussRational,
        c: &GaussRational,
        d: &GaussRational,
    ) -> Self {
        let (x, y) = (Expr::sym(&self.coords[0]), Expr::sym(&self.coords[1]));
        let k = |q: &GaussRational| Expr::constant(q.clone());
        let map = [
            (self.coords[0].as_str(), &k(a) * &x + k(b)),
            (self.coords[1].as_str(), &k(c) * &y + k(d)),
        ];
        let mut m = self.clone();
        m.g11 = k(&(a * a)) * self.g11.substitute(&map);
        m.g12 = k(&(a * c)) * self.g12.substitute(&map);
        m.g22 = k(&(c * c)) * self.g22.substitute(&map);
        m
    }

    pub fn coord(&self, k: usize) -> &str {
        &self.coords[k]
    }

    pub fn coord_names(&self) -> [&str; 2] {
        [&self.coords[0], &self.coords[1]]
    }

    pub fn entry(&self, i: usize, j: usize) -> &Expr {
        match (i, j) {
            (0, 0) => &self.g11,
            (1, 1) => &self.g22,
            _ => &self.g12,
        }
    }

    pub fn det(&self) -> Expr {
        &self.g11 * &self.g22 - self.g12.pow(2)
    }

    /// `g^{ij}`.
    pub fn inverse(&self) -> [[Expr; 2]; 2] {
        let d = self.det();
        let a = &self.g22 / &d;
        let b = -(&self.g12 / &d);
        let c = &self.g11 / &d;
        [[a, b.clone()], [b, c]]
    }

    /// `sqrt(det g)`, taken structurally when the metric is conformal.
    pub fn sqrt_det(&self) -> Expr {
        if self.g12.is_zero() && self.g11 == self.g22 {
            return self.g11.clone();
        }
        self.det().sqrt()
    }

    fn d(&self, e: &Expr, k: usize) -> Expr {
        e.partial(&self.coords[k])
    }

    pub fn christoffel(&self) -> ChristoffelSymbols {
        let gi = self.inverse();
        let dg = |m: usize, j: usize, i: usize| self.d(self.entry(m, j), i);
        let gamma = std::array::from_fn(|k| {
            std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    let terms = (0..2)
                        .map(|m| &gi[k][m] * (dg(m, j, i) + dg(m, i, j) - dg(i, j, m)))
                        .collect();
                    Expr::rational(1, 2) * Expr::add_all(terms)
                })
            })
        });
        ChristoffelSymbols { gamma }
    }

    /// Gaussian curvature `R_1212 / det g`.
    pub fn gauss_curvature(&self) -> Expr {
        let ch = self.christoffel();
        let g = &ch.gamma;
        // R^a_{bcd} = ∂_c Γ^a_db − ∂_d Γ^a_cb + Γ^a_ce Γ^e_db − Γ^a_de Γ^e_cb
        let r = |a: usize, b: usize, c: usize, d: usize| {
            let mut t = vec![self.d(&g[a][d][b], c), -self.d(&g[a][c][b], d)];
            for e in 0..2 {
                t.push(&g[a][c][e] * &g[e][d][b]);
                t.push(-(&g[a][d][e] * &g[e][c][b]));
            }
            Expr::add_all(t)
        };
        let r1212 = &self.g11 * r(0, 1, 0, 1) + &self.g12 * r(1, 1, 0, 1);
        r1212 / self.det()
    }

    pub fn grad(&self, f: &Expr) -> VectorField {
        let gi = self.inverse();
        let (fx, fy) = (self.d(f, 0), self.d(f, 1));
        [
            &gi[0][0] * &fx + &gi[0][1] * &fy,
            &gi[1][0] * &fx + &gi[1][1] * &fy,
        ]
    }

    /// Rotation of `grad f` by a right angle: `(-f_y, f_x) / (orientation sqrt(det g))`.
    pub fn sgrad(&self, f: &Expr) -> Result<VectorField, GeometryError> {
        if self.signature == Signature::Lorentzian {
            return Err(GeometryError::Unsupported("sgrad"));
        }
        let s = Expr::int(self.orientation as i64) * self.sqrt_det();
        Ok([-(self.d(f, 1)) / &s, self.d(f, 0) / &s])
    }

    /// Pointwise inner product `g(u, v)`.
    pub fn inner(&self, u: &VectorField, v: &VectorField) -> Expr {
        Expr::add_all(vec![
            &self.g11 * &u[0] * &v[0],
            &self.g12 * (&u[0] * &v[1] + &u[1] * &v[0]),
            &self.g22 * &u[1] * &v[1],
        ])
    }

    /// `d_∇` applied `l` times to the scalar `f`.
    pub fn iterated_covariant_derivative(
        &self,
        f: &Expr,
        l: usize,
    ) -> Result<CovariantTensor, GeometryError> {
        if !(1..=6).contains(&l) {
            return Err(GeometryError::Order(l));
        }
        Ok(self.covariant_tower(f, l).pop().unwrap())
    }

    /// `[d_∇ f, d_∇² f, .., d_∇^l f]`.
    pub fn covariant_tower(&self, f: &Expr, l: usize) -> Vec<CovariantTensor> {
        let ch = self.christoffel();
        let mut out: Vec<CovariantTensor> = Vec::with_capacity(l);
        let mut prev = CovariantTensor {
            valence: 0,
            comps: vec![f.clone()],
        };
        for v in 1..=l {
            let mut comps = Vec::with_capacity(1 << v);
            for idx in 0..(1usize << v) {
                let slots: Vec<usize> = (0..v).map(|s| (idx >> (v - 1 - s)) & 1).collect();
                let (i, rest) = (slots[0], &slots[1..]);
                let mut terms = vec![self.d(&prev.comps[CovariantTensor::index(rest)], i)];
                for r in 0..rest.len() {
                    for m in 0..2 {
                        let gam = ch.get(m, i, rest[r]);
                        if gam.is_zero() {
                            continue;
                        }
                        let mut j2 = rest.to_vec();
                        j2[r] = m;
                        terms.push(-(gam * &prev.comps[CovariantTensor::index(&j2)]));
                    }
                }
                comps.push(Expr::add_all(terms));
            }
            prev = CovariantTensor { valence: v, comps };
            out.push(prev.clone());
        }
        out
    }

    /// `Tr_g d_∇² f`.
    pub fn laplacian(&self, f: &Expr) -> Expr {
        let h = self.covariant_tower(f, 2).pop().unwrap();
        let gi = self.inverse();
        let mut terms = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                terms.push(&gi[i][j] * h.get(&[i, j]));
            }
        }
        Expr::add_all(terms)
    }

    /// `(dF ∧ dG)(grad K, sgrad K) / |∇K|²` with `K` the Gaussian curvature.
    pub fn jacobian_invariant(&self, f: &Expr, g: &Expr) -> Result<Expr, GeometryError> {
        let k = self.gauss_curvature();
        let gk = self.grad(&k);
        let sk = self.sgrad(&k)?;
        let i3 = &self.d(&k, 0) * &gk[0] + &self.d(&k, 1) * &gk[1];
        if i3.is_zero() {
            return Err(GeometryError::FlatGradient);
        }
        let along = |e: &Expr, v: &VectorField| &self.d(e, 0) * &v[0] + &self.d(e, 1) * &v[1];
        Ok((along(f, &gk) * along(g, &sk) - along(f, &sk) * along(g, &gk)) / i3)
    }
}

/// Lie bracket `[u, v]` of vector fields.
pub fn lie_bracket(u: &VectorField, v: &VectorField, coords: [&str; 2]) -> VectorField {
    std::array::from_fn(|i| {
        let mut t = Vec::new();
        for (j, c) in coords.iter().enumerate() {
            t.push(&u[j] * v[i].partial(c));
            t.push(-(&v[j] * u[i].partial(c)));
        }
        Expr::add_all(t)
    })
}

impl fmt::Display for Metric2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "g11 = {}, g12 = {}, g22 = {}",
            self.g11, self.g12, self.g22
        )
    }
}
