//! Evaluable profile curves.

use std::fmt;
use std::sync::Arc;

/// Value and first two derivatives of a profile at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub u: f64,
    pub du: f64,
    pub d2u: f64,
}

impl Jet {
    pub const ZERO: Jet = Jet {
        u: 0.0,
        du: 0.0,
        d2u: 0.0,
    };

    pub fn new(u: f64, du: f64, d2u: f64) -> Self {
        Self { u, du, d2u }
    }

    /// Graph curvature `u'' / (1+u'²)^(3/2)`.
    pub fn curvature(&self) -> f64 {
        self.d2u / (1.0 + self.du * self.du).powf(1.5)
    }
}

/// Regularity class of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub enum Smoothness {
    C0,
    /// C¹ with a second derivative that is continuous between seams.
    C1PiecewiseC2,
    C2,
}

/// A real profile `u` on a closed interval with access to `u'` and `u''`.
///
/// Piecewise curves list their interior break points in [`Curve::seams`] so
/// quadrature can align panels to them.
pub trait Curve: Send + Sync {
    fn interval(&self) -> (f64, f64);

    fn eval(&self, x: f64) -> Jet;

    fn seams(&self) -> Vec<f64> {
        Vec::new()
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::C2
    }

    fn value(&self, x: f64) -> f64 {
        self.eval(x).u
    }
}

impl<C: Curve + ?Sized> Curve for Arc<C> {
    fn interval(&self) -> (f64, f64) {
        (**self).interval()
    }
    fn eval(&self, x: f64) -> Jet {
        (**self).eval(x)
    }
    fn seams(&self) -> Vec<f64> {
        (**self).seams()
    }
    fn smoothness(&self) -> Smoothness {
        (**self).smoothness()
    }
}

impl<C: Curve + ?Sized> Curve for &C {
    fn interval(&self) -> (f64, f64) {
        (**self).interval()
    }
    fn eval(&self, x: f64) -> Jet {
        (**self).eval(x)
    }
    fn seams(&self) -> Vec<f64> {
        (**self).seams()
    }
    fn smoothness(&self) -> Smoothness {
        (**self).smoothness()
    }
}

type JetFn = dyn Fn(f64) -> Jet + Send + Sync;

/// A curve backed by a closure.
#[derive(Clone)]
pub struct FnCurve {
    interval: (f64, f64),
    seams: Vec<f64>,
    smoothness: Smoothness,
    f: Arc<JetFn>,
}

impl FnCurve {
    pub fn new<F>(a: f64, b: f64, f: F) -> Self
    where
        F: Fn(f64) -> Jet + Send + Sync + 'static,
    {
        Self {
            interval: (a, b),
            seams: Vec::new(),
            smoothness: Smoothness::C2,
            f: Arc::new(f),
        }
    }

    pub fn constant(a: f64, b: f64, value: f64) -> Self {
        Self::new(a, b, move |_| Jet::new(value, 0.0, 0.0))
    }

    pub fn with_seams(mut self, seams: Vec<f64>, smoothness: Smoothness) -> Self {
        self.seams = seams;
        self.smoothness = smoothness;
        self
    }

    /// A curve given only by values; derivatives come from central differences.
    pub fn from_values<F>(a: f64, b: f64, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let h = 1e-4 * (b - a).abs().max(1e-12);
        Self::new(a, b, move |x| {
            let (fm, f0, fp) = (f(x - h), f(x), f(x + h));
            Jet::new(f0, (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h))
        })
        .with_seams(Vec::new(), Smoothness::C0)
    }
}

impl fmt::Debug for FnCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnCurve")
            .field("interval", &self.interval)
            .field("seams", &self.seams)
            .field("smoothness", &self.smoothness)
            .finish_non_exhaustive()
    }
}

impl Curve for FnCurve {
    fn interval(&self) -> (f64, f64) {
        self.interval
    }
    fn eval(&self, x: f64) -> Jet {
        (self.f)(x)
    }
    fn seams(&self) -> Vec<f64> {
        self.seams.clone()
    }
    fn smoothness(&self) -> Smoothness {
        self.smoothness
    }
}

/// Uniform sample grid with `n ≥ 2` points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
        .collect()
}
