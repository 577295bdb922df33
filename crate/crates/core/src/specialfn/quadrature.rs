//! Composite Gauss–Legendre and adaptive Simpson quadrature.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureKind {
    /// Fixed panels, each carrying an n-point Gauss–Legendre rule.
    GaussLegendre { panels: usize, nodes: usize },
    /// Recursive Simpson refinement to an absolute tolerance.
    AdaptiveSimpson { tolerance: f64 },
}

/// A quadrature rule. Gauss nodes on [-1, 1] are computed once at
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    kind: QuadratureKind,
    reference: Vec<(f64, f64)>,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::gauss(256, 5).expect("default rule is valid")
    }
}

impl QuadratureRule {
    pub fn gauss(panels: usize, nodes: usize) -> Result<Self> {
        if panels == 0 || nodes == 0 {
            return Err(Error::Validation(format!(
                "Gauss rule needs at least one panel and one node, got {panels} panels, {nodes} nodes"
            )));
        }
        Ok(Self {
            kind: QuadratureKind::GaussLegendre { panels, nodes },
            reference: gauss_legendre(nodes),
        })
    }

    pub fn simpson(tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::Validation(format!(
                "Simpson tolerance must be positive, got {tolerance}"
            )));
        }
        Ok(Self {
            kind: QuadratureKind::AdaptiveSimpson { tolerance },
            reference: Vec::new(),
        })
    }

    pub fn kind(&self) -> QuadratureKind {
        self.kind
    }

    /// Same rule with a different panel count (Gauss only; Simpson is returned unchanged).
    pub fn with_panels(&self, panels: usize) -> Result<Self> {
        match self.kind {
            QuadratureKind::GaussLegendre { nodes, .. } => Self::gauss(panels, nodes),
            QuadratureKind::AdaptiveSimpson { .. } => Ok(self.clone()),
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        self.integrate_with_breaks(f, a, b, &[])
    }

    /// Integrate over `[a, b]` with panel boundaries forced onto every
    /// break point inside the interval.
    pub fn integrate_with_breaks<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64, breaks: &[f64]) -> f64 {
        self.integrate_many(|x| [f(x)], a, b, breaks)[0]
    }

    /// Integrate several integrands sharing one evaluation per point.
    pub fn integrate_many<const N: usize, F: Fn(f64) -> [f64; N]>(
        &self,
        f: F,
        a: f64,
        b: f64,
        breaks: &[f64],
    ) -> [f64; N] {
        if a == b {
            return [0.0; N];
        }
        let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        let segments = segments(lo, hi, breaks);
        let mut sums = [Neumaier::default(); N];
        match self.kind {
            QuadratureKind::GaussLegendre { panels, .. } => {
                for &(s0, s1) in &segments {
                    let m = segment_panels(panels, segments.len(), s1 - s0, hi - lo);
                    let h = (s1 - s0) / m as f64;
                    for p in 0..m {
                        let x0 = s0 + h * p as f64;
                        let x1 = if p + 1 == m { s1 } else { x0 + h };
                        let (mid, half) = (0.5 * (x0 + x1), 0.5 * (x1 - x0));
                        for &(t, w) in &self.reference {
                            let v = f(mid + half * t);
                            for k in 0..N {
                                sums[k].add(w * half * v[k]);
                            }
                        }
                    }
                }
            }
            QuadratureKind::AdaptiveSimpson { tolerance } => {
                let total = hi - lo;
                for &(s0, s1) in &segments {
                    let tol = tolerance * (s1 - s0) / total;
                    let v = adaptive_simpson(&f, s0, s1, tol);
                    for k in 0..N {
                        sums[k].add(v[k]);
                    }
                }
            }
        }
        let mut out = [0.0; N];
        for k in 0..N {
            out[k] = sign * sums[k].total();
        }
        out
    }

    /// Nodes and weights of the composite Gauss rule on `[a, b]` (empty for Simpson).
    pub fn points(&self, a: f64, b: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
        let QuadratureKind::GaussLegendre { panels, .. } = self.kind else {
            return Vec::new();
        };
        let mut pts = Vec::new();
        let segments = segments(a, b, breaks);
        for &(s0, s1) in &segments {
            let m = segment_panels(panels, segments.len(), s1 - s0, b - a);
            let h = (s1 - s0) / m as f64;
            for p in 0..m {
                let x0 = s0 + h * p as f64;
                let x1 = if p + 1 == m { s1 } else { x0 + h };
                let (mid, half) = (0.5 * (x0 + x1), 0.5 * (x1 - x0));
                pts.extend(self.reference.iter().map(|&(t, w)| (mid + half * t, w * half)));
            }
        }
        pts
    }
}

/// Panels for one segment: proportional to its length, but never fewer than
/// a quarter of an even split so narrow pieces between seams stay resolved.
fn segment_panels(panels: usize, segments: usize, len: f64, total: f64) -> usize {
    let share = ((panels as f64) * len / total).round() as usize;
    share.max((panels / (4 * segments)).max(1))
}

fn segments(a: f64, b: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
    let width = b - a;
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x > a + 1e-14 * width && x < b - 1e-14 * width)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * width);
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut prev = a;
    for c in cuts {
        out.push((prev, c));
        prev = c;
    }
    out.push((prev, b));
    out
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    if n == 1 {
        return vec![(0.0, 2.0)];
    }
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

/// Scalar adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
pub(crate) fn simpson_scalar<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    adaptive_simpson(&|x| [f(x)], a, b, tol)[0]
}

fn adaptive_simpson<const N: usize, F: Fn(f64) -> [f64; N]>(f: &F, a: f64, b: f64, tol: f64) -> [f64; N] {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, &fa, &fm, &fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 60)
}

fn simpson<const N: usize>(a: f64, b: f64, fa: &[f64; N], fm: &[f64; N], fb: &[f64; N]) -> [f64; N] {
    let h = (b - a) / 6.0;
    let mut s = [0.0; N];
    for k in 0..N {
        s[k] = h * (fa[k] + 4.0 * fm[k] + fb[k]);
    }
    s
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<const N: usize, F: Fn(f64) -> [f64; N]>(
    f: &F,
    a: f64,
    b: f64,
    fa: [f64; N],
    fm: [f64; N],
    fb: [f64; N],
    whole: [f64; N],
    tol: f64,
    depth: u32,
) -> [f64; N] {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, &fa, &flm, &fm);
    let right = simpson(m, b, &fm, &frm, &fb);
    let mut err: f64 = 0.0;
    for k in 0..N {
        err = err.max((left[k] + right[k] - whole[k]).abs());
    }
    if depth == 0 || err <= 15.0 * tol || (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
        let mut out = [0.0; N];
        for k in 0..N {
            out[k] = left[k] + right[k] + (left[k] + right[k] - whole[k]) / 15.0;
        }
        return out;
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
    let r = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = l[k] + r[k];
    }
    out
}

/// Compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.comp
    }
}
