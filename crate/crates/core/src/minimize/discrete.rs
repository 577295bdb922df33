//! Clamped cubic Hermite discretisation: DOF layout, the discrete profile
//! and element-level assembly of energy, gradient and banded Hessian.

use std::f64::consts::PI;

use serde::Serialize;

use crate::curve::{Curve, Jet, Smoothness};
use crate::specialfn::gauss_legendre;

/// Gauss points per element.
pub(crate) const ELEMENT_NODES: usize = 5;

/// Reference Gauss nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_points() -> (Vec<f64>, Vec<f64>) {
    gauss_legendre(ELEMENT_NODES).into_iter().unzip()
}

/// By which functional the discrete energy is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Functional {
    /// `∫ u''² / (1+u'²)^(5/2)`
    Elastic,
    /// `(π/2) ∫ (u''² u / (1+u'²)^(5/2) + 1/(u √(1+u'²)))`
    Revolution,
}

/// How the computational half relates to the full interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mirror {
    /// The whole interval is discretised.
    None,
    /// Left half discretised, reflected about its right end.
    AboutRightEnd,
    /// Right half discretised, reflected about its left end.
    AboutLeftEnd,
}

/// Degrees of freedom `[u_0, d_0, u_1, d_1, …]` on a uniform mesh of the
/// computational part of the interval.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub full: (f64, f64),
    pub start: f64,
    pub h: f64,
    /// Elements in the computational part.
    pub m: usize,
    pub mirror: Mirror,
    pub fixed: Vec<bool>,
    pub functional: Functional,
}

impl Layout {
    /// 1D problem on `[0, 1]` with `u = u' = 0` at both ends.
    pub fn elastic(n: usize, symmetric: bool) -> Self {
        let h = 1.0 / n as f64;
        if symmetric {
            let m = n / 2;
            let mut fixed = vec![false; 2 * (m + 1)];
            fixed[0] = true;
            fixed[1] = true;
            fixed[2 * m + 1] = true;
            Self { full: (0.0, 1.0), start: 0.0, h, m, mirror: Mirror::AboutRightEnd, fixed, functional: Functional::Elastic }
        } else {
            let mut fixed = vec![false; 2 * (n + 1)];
            for i in [0, 1, 2 * n, 2 * n + 1] {
                fixed[i] = true;
            }
            Self { full: (0.0, 1.0), start: 0.0, h, m: n, mirror: Mirror::None, fixed, functional: Functional::Elastic }
        }
    }

    /// Symmetric revolution problem on `[-1, 1]`, discretised on `[0, 1]`
    /// with `u(1) = α`, `u'(1) = 0` and `u'(0) = 0`.
    pub fn revolution(n: usize) -> Self {
        let m = n / 2;
        let mut fixed = vec![false; 2 * (m + 1)];
        fixed[1] = true;
        fixed[2 * m] = true;
        fixed[2 * m + 1] = true;
        Self { full: (-1.0, 1.0), start: 0.0, h: 2.0 / n as f64, m, mirror: Mirror::AboutLeftEnd, fixed, functional: Functional::Revolution }
    }

    pub fn dofs(&self) -> usize {
        2 * (self.m + 1)
    }

    pub fn node(&self, k: usize) -> f64 {
        if k == self.m {
            self.start + self.h * self.m as f64
        } else {
            self.start + self.h * k as f64
        }
    }

    /// Energy and penalty weight accounting for the mirrored half.
    pub fn factor(&self) -> f64 {
        if self.mirror == Mirror::None {
            1.0
        } else {
            2.0
        }
    }

    /// Full-interval element count.
    pub fn full_elements(&self) -> usize {
        if self.mirror == Mirror::None {
            self.m
        } else {
            2 * self.m
        }
    }

    /// Nodal values and derivatives on the full interval.
    pub fn expand(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let m = self.m;
        let (u, d): (Vec<f64>, Vec<f64>) = (0..=m).map(|k| (x[2 * k], x[2 * k + 1])).unzip();
        match self.mirror {
            Mirror::None => (u, d),
            Mirror::AboutRightEnd => {
                let mut uu = u.clone();
                let mut dd = d.clone();
                for k in (0..m).rev() {
                    uu.push(u[k]);
                    dd.push(-d[k]);
                }
                (uu, dd)
            }
            Mirror::AboutLeftEnd => {
                let mut uu: Vec<f64> = (1..=m).rev().map(|k| u[k]).collect();
                let mut dd: Vec<f64> = (1..=m).rev().map(|k| -d[k]).collect();
                uu.extend(&u);
                dd.extend(&d);
                (uu, dd)
            }
        }
    }

    /// DOF vector interpolating `c` at the computational nodes.
    pub fn interpolate(&self, c: &dyn Curve) -> Vec<f64> {
        let mut x = vec![0.0; self.dofs()];
        for k in 0..=self.m {
            let j = c.eval(self.node(k));
            x[2 * k] = j.u;
            x[2 * k + 1] = j.du;
        }
        x
    }

    pub fn profile(&self, x: &[f64], symmetric: bool) -> DiscreteProfile {
        let (values, derivatives) = self.expand(x);
        DiscreteProfile {
            interval: self.full,
            n: self.full_elements(),
            values,
            derivatives,
            symmetric,
        }
    }
}

/// Hermite shape functions on the reference element, scaled to width `h`:
/// value, first and second derivative weights for `[u_i, d_i, u_{i+1}, d_{i+1}]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Shape {
    pub n0: [f64; 4],
    pub n1: [f64; 4],
    pub n2: [f64; 4],
}

pub(crate) fn shape(t: f64, h: f64) -> Shape {
    let (t2, t3) = (t * t, t * t * t);
    Shape {
        n0: [2.0 * t3 - 3.0 * t2 + 1.0, h * (t3 - 2.0 * t2 + t), -2.0 * t3 + 3.0 * t2, h * (t3 - t2)],
        n1: [
            (6.0 * t2 - 6.0 * t) / h,
            3.0 * t2 - 4.0 * t + 1.0,
            (-6.0 * t2 + 6.0 * t) / h,
            3.0 * t2 - 2.0 * t,
        ],
        n2: [
            (12.0 * t - 6.0) / (h * h),
            (6.0 * t - 4.0) / h,
            (-12.0 * t + 6.0) / (h * h),
            (6.0 * t - 2.0) / h,
        ],
    }
}

/// `Σ nᵢ dofᵢ` for a combination whose value weights sum to `total`
/// (1 for `u`, 0 for derivatives), written in terms of `u₁ - u₀` so large
/// nodal values do not cancel against `1/h²` weights.
fn combine(n: &[f64; 4], dofs: &[f64], total: f64) -> f64 {
    total * dofs[0] + n[2] * (dofs[2] - dofs[0]) + n[1] * dofs[1] + n[3] * dofs[3]
}

impl Shape {
    pub fn value(&self, dofs: &[f64]) -> f64 {
        combine(&self.n0, dofs, 1.0)
    }

    pub fn jet(&self, dofs: &[f64]) -> Jet {
        Jet::new(self.value(dofs), combine(&self.n1, dofs, 0.0), combine(&self.n2, dofs, 0.0))
    }
}

/// A `C¹` cubic Hermite profile on a uniform mesh.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteProfile {
    pub interval: (f64, f64),
    /// Number of elements.
    pub n: usize,
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
    pub symmetric: bool,
}

impl DiscreteProfile {
    pub fn nodes(&self) -> Vec<f64> {
        let (a, b) = self.interval;
        (0..=self.n).map(|k| if k == self.n { b } else { a + (b - a) * k as f64 / self.n as f64 }).collect()
    }

    pub fn mesh_width(&self) -> f64 {
        (self.interval.1 - self.interval.0) / self.n as f64
    }

    /// Element index and local coordinate of `x`, preferring the right
    /// element at interior nodes.
    fn locate(&self, x: f64) -> (usize, f64) {
        let (a, _) = self.interval;
        let h = self.mesh_width();
        let s = ((x - a) / h).clamp(0.0, self.n as f64);
        let e = (s.floor() as usize).min(self.n - 1);
        (e, s - e as f64)
    }

    /// Jet on element `e` at local coordinate `t ∈ [0, 1]`.
    pub fn eval_in(&self, e: usize, t: f64) -> Jet {
        let sh = shape(t, self.mesh_width());
        let dofs = [self.values[e], self.derivatives[e], self.values[e + 1], self.derivatives[e + 1]];
        sh.jet(&dofs)
    }

    /// Second derivative at node `k` from the left and from the right element.
    pub fn one_sided_d2(&self, k: usize) -> (Option<f64>, Option<f64>) {
        let left = (k > 0).then(|| self.eval_in(k - 1, 1.0).d2u);
        let right = (k < self.n).then(|| self.eval_in(k, 0.0).d2u);
        (left, right)
    }

    /// Largest `|u'|` over nodes and element Gauss points.
    pub fn max_abs_slope(&self) -> f64 {
        let (nodes, _) = gauss_points();
        let mut m = self.derivatives.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        for e in 0..self.n {
            for &t in &nodes {
                m = m.max(self.eval_in(e, 0.5 * (t + 1.0)).du.abs());
            }
        }
        m
    }

    /// Smallest value over nodes and element Gauss points.
    pub fn min_value(&self) -> f64 {
        let (nodes, _) = gauss_points();
        let mut m = self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v));
        for e in 0..self.n {
            for &t in &nodes {
                m = m.min(self.eval_in(e, 0.5 * (t + 1.0)).u);
            }
        }
        m
    }

    /// Element-wise Gauss value of the given functional.
    pub fn energy(&self, functional: Functional) -> f64 {
        self.energy_subdivided(functional, 1)
    }

    /// Energy with every element split into `parts` Gauss panels.
    pub fn energy_subdivided(&self, functional: Functional, parts: usize) -> f64 {
        let (nodes, weights) = gauss_points();
        let h = self.mesh_width();
        let k = parts.max(1) as f64;
        let mut total = 0.0;
        for e in 0..self.n {
            for p in 0..parts.max(1) {
                for (&t, &w) in nodes.iter().zip(&weights) {
                    let j = self.eval_in(e, (p as f64 + 0.5 * (t + 1.0)) / k);
                    total += 0.5 * w * h / k * density(functional, &j).0;
                }
            }
        }
        total
    }

    /// Largest total variation of the tangent angle `atan u'` over one
    /// element. `u'` is quadratic per element, so it is exact from the
    /// ends and the vertex.
    pub fn max_element_turning(&self) -> f64 {
        (0..self.n)
            .map(|e| {
                let (a, b) = (self.eval_in(e, 0.0), self.eval_in(e, 1.0));
                let mut ts = vec![a.du.atan()];
                let (q0, q1) = (a.d2u, b.d2u);
                // u'' is linear in t; its zero is the vertex of u'
                if q0 * q1 < 0.0 {
                    ts.push(self.eval_in(e, q0 / (q0 - q1)).du.atan());
                }
                ts.push(b.du.atan());
                ts.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Relative change of the energy under 4× finer quadrature; large
    /// values expose steep cubics whose curvature the element rule misses.
    pub fn quadrature_defect(&self, functional: Functional) -> f64 {
        let coarse = self.energy(functional);
        (self.energy_subdivided(functional, 4) - coarse).abs() / (1.0 + coarse.abs())
    }
}

impl Curve for DiscreteProfile {
    fn interval(&self) -> (f64, f64) {
        self.interval
    }

    fn eval(&self, x: f64) -> Jet {
        let (e, t) = self.locate(x);
        self.eval_in(e, t)
    }

    fn seams(&self) -> Vec<f64> {
        let nodes = self.nodes();
        nodes[1..self.n].to_vec()
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::C1PiecewiseC2
    }
}

/// Integrand with its gradient and Hessian in `(u, u', u'')`.
pub(crate) fn density(functional: Functional, j: &Jet) -> (f64, [f64; 3], [[f64; 3]; 3]) {
    let (u, p, q) = (j.u, j.du, j.d2u);
    let s2 = 1.0 + p * p;
    // a = s^-5 and c = s^-1 with their p-derivatives
    let a = s2.powf(-2.5);
    let a1 = -5.0 * p * a / s2;
    let a2 = -5.0 * a / s2 + 35.0 * p * p * a / (s2 * s2);
    match functional {
        Functional::Elastic => {
            let f = q * q * a;
            let g = [0.0, q * q * a1, 2.0 * q * a];
            let hpq = 2.0 * q * a1;
            let hess = [[0.0, 0.0, 0.0], [0.0, q * q * a2, hpq], [0.0, hpq, 2.0 * a]];
            (f, g, hess)
        }
        Functional::Revolution => {
            let k = 0.5 * PI;
            let c = 1.0 / s2.sqrt();
            let c1 = -p * c / s2;
            let c2 = -c / s2 + 3.0 * p * p * c / (s2 * s2);
            let f = k * (q * q * u * a + c / u);
            let g = [
                k * (q * q * a - c / (u * u)),
                k * (q * q * u * a1 + c1 / u),
                k * 2.0 * q * u * a,
            ];
            let huu = k * 2.0 * c / (u * u * u);
            let hup = k * (q * q * a1 - c1 / (u * u));
            let huq = k * 2.0 * q * a;
            let hpp = k * (q * q * u * a2 + c2 / u);
            let hpq = k * 2.0 * q * u * a1;
            let hqq = k * 2.0 * u * a;
            (f, g, [[huu, hup, huq], [hup, hpp, hpq], [huq, hpq, hqq]])
        }
    }
}

/// A point at which a pointwise constraint `g(u(x)) ≤ 0` is imposed.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ConstraintPoint {
    pub x: f64,
    pub element: usize,
    /// Weights of the element DOFs; nodes use a unit vector.
    pub weights: [f64; 4],
    /// Sum of the value weights: 1 for `u(x)`, 0 for `u'(x)`.
    pub total: f64,
}

/// Gauss points of every element followed by the nodes.
pub(crate) fn constraint_points(layout: &Layout) -> Vec<ConstraintPoint> {
    let (nodes, _) = gauss_points();
    let mut pts = Vec::with_capacity(layout.m * (ELEMENT_NODES + 1) + 1);
    for e in 0..layout.m {
        for &t in &nodes {
            let t = 0.5 * (t + 1.0);
            pts.push(ConstraintPoint {
                x: layout.node(e) + t * layout.h,
                element: e,
                weights: shape(t, layout.h).n0,
                total: 1.0,
            });
        }
    }
    for k in 0..=layout.m {
        let (element, weights) = if k == layout.m { (k - 1, [0.0, 0.0, 1.0, 0.0]) } else { (k, [1.0, 0.0, 0.0, 0.0]) };
        pts.push(ConstraintPoint { x: layout.node(k), element, weights, total: 1.0 });
    }
    pts
}

/// Slope evaluations `u'(x)` at the Gauss points and nodes.
pub(crate) fn slope_points(layout: &Layout) -> Vec<ConstraintPoint> {
    let (nodes, _) = gauss_points();
    let mut pts = Vec::with_capacity(layout.m * (ELEMENT_NODES + 1) + 1);
    for e in 0..layout.m {
        for &t in &nodes {
            let t = 0.5 * (t + 1.0);
            pts.push(ConstraintPoint {
                x: layout.node(e) + t * layout.h,
                element: e,
                weights: shape(t, layout.h).n1,
                total: 0.0,
            });
        }
    }
    for k in 0..=layout.m {
        let (element, weights) = if k == layout.m { (k - 1, [0.0, 0.0, 0.0, 1.0]) } else { (k, [0.0, 1.0, 0.0, 0.0]) };
        pts.push(ConstraintPoint { x: layout.node(k), element, weights, total: 0.0 });
    }
    pts
}

impl ConstraintPoint {
    pub fn value(&self, x: &[f64]) -> f64 {
        combine(&self.weights, &x[2 * self.element..2 * self.element + 4], self.total)
    }
}

/// Symmetric banded matrix with semi-bandwidth 3, stored by rows as
/// `a[i][k] = A(i, i+k)`.
#[derive(Debug, Clone)]
pub(crate) struct Banded {
    pub a: Vec<[f64; 4]>,
}

pub(crate) const BAND: usize = 3;

impl Banded {
    pub fn zeros(n: usize) -> Self {
        Self { a: vec![[0.0; 4]; n] }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    /// Add to entry `(i, j)`; only the upper triangle is stored.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.a[i][j - i] += v;
    }

    #[cfg(test)]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if j - i > BAND {
            0.0
        } else {
            self.a[i][j - i]
        }
    }

    #[cfg(test)]
    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y = vec![0.0; n];
        for i in 0..n {
            for k in 0..=BAND.min(n - 1 - i) {
                let v = self.a[i][k];
                y[i] += v * x[i + k];
                if k > 0 {
                    y[i + k] += v * x[i];
                }
            }
        }
        y
    }

    /// Cholesky factor of `A + shift·I` (upper band of `Rᵀ`), or `None`
    /// when the shifted matrix is not positive definite.
    pub fn cholesky(&self, shift: f64) -> Option<Vec<[f64; 4]>> {
        let n = self.len();
        let mut r = self.a.clone();
        for row in r.iter_mut() {
            row[0] += shift;
        }
        for i in 0..n {
            for k in 1..=BAND.min(i) {
                // subtract contributions of row i-k
                let p = i - k;
                let rpi = r[p][k];
                for l in 0..=(BAND - k) {
                    if i + l < n {
                        r[i][l] -= rpi * r[p][k + l];
                    }
                }
            }
            let d = r[i][0];
            if !(d > 0.0) || !d.is_finite() {
                return None;
            }
            let s = d.sqrt();
            r[i][0] = s;
            for l in 1..=BAND {
                r[i][l] /= s;
            }
        }
        Some(r)
    }
}

/// Solve `RᵀR x = b` with a factor from [`Banded::cholesky`].
pub(crate) fn cholesky_solve(r: &[[f64; 4]], b: &[f64]) -> Vec<f64> {
    let n = r.len();
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 1..=BAND.min(i) {
            y[i] -= r[i - k][k] * y[i - k];
        }
        y[i] /= r[i][0];
    }
    for i in (0..n).rev() {
        for k in 1..=BAND.min(n - 1 - i) {
            y[i] -= r[i][k] * y[i + k];
        }
        y[i] /= r[i][0];
    }
    y
}

/// Element loop for the discrete energy: value, gradient and Hessian.
/// The revolution energy is infinite once `u ≤ 0` at a Gauss point.
pub(crate) fn assemble_energy(layout: &Layout, x: &[f64], grad: &mut [f64], hess: Option<&mut Banded>) -> f64 {
    let (nodes, weights) = gauss_points();
    let h = layout.h;
    let shapes: Vec<(Shape, f64)> = nodes
        .iter()
        .zip(&weights)
        .map(|(&t, &w)| (shape(0.5 * (t + 1.0), h), 0.5 * w * h))
        .collect();
    let factor = layout.factor();
    let mut total = 0.0;
    let mut hess = hess;
    for e in 0..layout.m {
        let dofs = &x[2 * e..2 * e + 4];
        for (sh, w) in &shapes {
            let j = sh.jet(dofs);
            if layout.functional == Functional::Revolution && !(j.u > 0.0) {
                return f64::INFINITY;
            }
            let (f, g, hh) = density(layout.functional, &j);
            let w = w * factor;
            total += w * f;
            let ns = [&sh.n0, &sh.n1, &sh.n2];
            for a in 0..4 {
                grad[2 * e + a] += w * (g[0] * ns[0][a] + g[1] * ns[1][a] + g[2] * ns[2][a]);
            }
            if let Some(hm) = hess.as_deref_mut() {
                for a in 0..4 {
                    for b in a..4 {
                        let mut v = 0.0;
                        for r in 0..3 {
                            for c in 0..3 {
                                v += hh[r][c] * ns[r][a] * ns[c][b];
                            }
                        }
                        hm.add(2 * e + a, 2 * e + b, w * v);
                    }
                }
            }
        }
    }
    total
}
