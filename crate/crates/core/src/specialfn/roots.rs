//! Bracketing root finders.

use crate::error::{Error, Result};

/// Search interval and stopping rule for [`find_root`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lower: f64,
    pub upper: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl RootBracket {
    pub const DEFAULT_TOLERANCE: f64 = 1e-12;
    pub const DEFAULT_MAX_ITERATIONS: usize = 200;

    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        Self::with_tolerance(lower, upper, Self::DEFAULT_TOLERANCE, Self::DEFAULT_MAX_ITERATIONS)
    }

    pub fn with_tolerance(
        lower: f64,
        upper: f64,
        tolerance: f64,
        max_iterations: usize,
    ) -> Result<Self> {
        if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
            return Err(Error::Validation(format!(
                "bracket requires finite lower < upper, got [{lower}, {upper}]"
            )));
        }
        if !(tolerance > 0.0) {
            return Err(Error::Validation(format!("tolerance must be positive, got {tolerance}")));
        }
        Ok(Self {
            lower,
            upper,
            max_iterations,
            tolerance,
        })
    }
}

/// Brent's method (inverse quadratic / secant / bisection hybrid).
///
/// Stops as soon as `|f(x)| <= tolerance` or the bracket has shrunk below the
/// tolerance. The iteration is fully deterministic.
pub fn find_root<F: Fn(f64) -> f64>(f: F, bracket: &RootBracket) -> Result<f64> {
    let tol = bracket.tolerance;
    let (mut a, mut b) = (bracket.lower, bracket.upper);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoSignChange {
            lower: a,
            upper: b,
            f_lower: fa,
            f_upper: fb,
        });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..bracket.max_iterations {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 || fb.abs() <= tol {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
    }
    Err(Error::MaxIterations {
        iterations: bracket.max_iterations,
        last: b,
    })
}

/// All sign-change roots of `f` on a uniform grid over `[lower, upper]`.
///
/// Tangential roots (touching zero without a sign change) are not detected.
pub fn scan_roots<F: Fn(f64) -> f64>(f: F, lower: f64, upper: f64, subdivisions: usize) -> Vec<f64> {
    let n = subdivisions.max(2);
    let grid: Vec<f64> = (0..=n)
        .map(|i| lower + (upper - lower) * i as f64 / n as f64)
        .collect();
    scan_grid(&f, &grid)
}

/// Like [`scan_roots`] but with geometrically spaced samples; `lower` must be
/// positive.
pub fn scan_roots_geometric<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    upper: f64,
    subdivisions: usize,
) -> Vec<f64> {
    let n = subdivisions.max(2);
    let ratio = (upper / lower).ln();
    let grid: Vec<f64> = (0..=n)
        .map(|i| {
            if i == n {
                upper
            } else {
                lower * (ratio * i as f64 / n as f64).exp()
            }
        })
        .collect();
    scan_grid(&f, &grid)
}

fn scan_grid<F: Fn(f64) -> f64>(f: &F, grid: &[f64]) -> Vec<f64> {
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..grid.len() - 1 {
        let (f0, f1) = (values[i], values[i + 1]);
        if f0 == 0.0 {
            roots.push(grid[i]);
            continue;
        }
        if !(f0.is_finite() && f1.is_finite()) || f1 == 0.0 || f0.signum() == f1.signum() {
            continue;
        }
        let bracket = RootBracket {
            lower: grid[i],
            upper: grid[i + 1],
            max_iterations: RootBracket::DEFAULT_MAX_ITERATIONS,
            tolerance: RootBracket::DEFAULT_TOLERANCE,
        };
        if let Ok(r) = find_root(f, &bracket) {
            roots.push(r);
        }
    }
    if let (Some(&last), Some(&x)) = (values.last(), grid.last()) {
        if last == 0.0 {
            roots.push(x);
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let r = find_root(|x| x * x - 2.0, &RootBracket::new(1.0, 2.0).unwrap()).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn catenoid_tangency_constant() {
        let b0 = find_root(|b| b * b.tanh() - 1.0, &RootBracket::new(1.0, 2.0).unwrap()).unwrap();
        assert!((b0.cosh() / b0 - 1.508879561).abs() < 1e-8);
    }

    #[test]
    fn no_sign_change() {
        let err = find_root(|x| x * x + 1.0, &RootBracket::new(-1.0, 2.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
    }

    #[test]
    fn max_iterations_reported() {
        let bracket = RootBracket::with_tolerance(0.0, 2.0, 1e-300, 3).unwrap();
        let err = find_root(|x| x.sin() - 0.5, &bracket).unwrap_err();
        assert!(matches!(err, Error::MaxIterations { iterations: 3, .. }));
    }

    #[test]
    fn invalid_bracket() {
        assert!(RootBracket::new(2.0, 1.0).is_err());
        assert!(RootBracket::with_tolerance(0.0, 1.0, 0.0, 10).is_err());
    }

    #[test]
    fn sine_roots() {
        let roots = scan_roots(f64::sin, 1.0, 7.0, 64);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - std::f64::consts::PI).abs() < 1e-10);
        assert!((roots[1] - 2.0 * std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn tangential_root_is_missed() {
        assert!(scan_roots(|x| (x - 0.3).powi(2) + 1e-3, 0.0, 1.0, 50).is_empty());
    }

    #[test]
    fn deterministic() {
        let br = RootBracket::new(0.1, 1.0).unwrap();
        let a = find_root(|x| x.exp() - 3.0 * x, &br).unwrap();
        let b = find_root(|x| x.exp() - 3.0 * x, &br).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
