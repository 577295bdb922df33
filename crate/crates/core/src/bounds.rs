//! Universal bounds and thresholds: the height bound for symmetric
//! supersolutions with clamped ends, the Navier bound `2/c0`, the function
//! `g_α(S) = (α-S) G(S)²` and the a-priori slope / height bounds that come
//! with small energy.

use std::f64::consts::PI;

use serde::Serialize;

use crate::curve::Curve;
use crate::energy::willmore_revolution;
use crate::error::{Error, Result};
use crate::specialfn::{c0, find_root, g_density, g_inverse, g_profile, scan_roots_geometric};
use crate::specialfn::{QuadratureRule, RootBracket};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniversalBoundReport {
    /// Maximiser of the average-slope objective.
    pub y0: f64,
    /// `y0 / 2`, the height bound from the root formulation.
    pub bound: f64,
    /// Half the maximum of the objective found by direct maximisation.
    pub bound_by_maximisation: f64,
    pub navier_bound: f64,
}

/// `(2 + 2(1+y²)^(-1/4)) / (c0 - G(y))`, the scaled average slope of a
/// symmetric elastica parameterised by its end slope `y`.
pub fn dirichlet_objective(y: f64) -> f64 {
    (2.0 + 2.0 * (1.0 + y * y).powf(-0.25)) / (c0() - g_profile(y))
}

pub fn dirichlet_universal_bound() -> Result<UniversalBoundReport> {
    let cc = c0();
    let stationarity = |y: f64| y * (cc - g_profile(y)) - 2.0 - 2.0 * (1.0 + y * y).powf(-0.25);
    let (lo, hi) = (0.1, 100.0);
    let roots = scan_roots_geometric(stationarity, lo, hi, 64);
    let &[y0] = roots.as_slice() else {
        return Err(Error::NoSolution(format!(
            "expected one stationary point of the average-slope objective, found {}",
            roots.len()
        )));
    };
    let y_star = golden_section_max(dirichlet_objective, lo, hi, 1e-10);
    Ok(UniversalBoundReport {
        y0,
        bound: 0.5 * y0,
        bound_by_maximisation: 0.5 * dirichlet_objective(y_star),
        navier_bound: navier_bound(),
    })
}

/// Universal height bound `2/c0` for symmetric supersolutions under Navier conditions.
pub fn navier_bound() -> f64 {
    2.0 / c0()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "alpha",
            value: alpha,
            domain: "alpha > 0",
        })
    }
}

/// `g_α(S) = (α - S) G(S)²` on `[0, α]`.
pub fn g_alpha(alpha: f64, s: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(0.0..=alpha).contains(&s) {
        return Err(Error::Domain {
            what: "g_alpha argument S",
            value: s,
            domain: "0 <= S <= alpha",
        });
    }
    let g = g_profile(s);
    Ok((alpha - s) * g * g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GAlphaReport {
    pub alpha: f64,
    pub argmax: f64,
    pub max_value: f64,
    /// Largest `c` with `α c² + 1/(α-2) <= max g_α`; only for α > 2.
    pub c_threshold: Option<f64>,
}

/// Samples for the unimodality scan of `g_α`.
const G_ALPHA_SCAN: usize = 400;

/// Maximise `g_α` on `[0, α]`.
///
/// `g_α' = G(S) (2(α-S)(1+S²)^(-5/4) - G(S))`, so interior critical points
/// are sign changes of the bracket. The scan requires exactly one.
pub fn max_g_alpha(alpha: f64) -> Result<GAlphaReport> {
    check_alpha(alpha)?;
    let slope_factor = |s: f64| 2.0 * (alpha - s) * g_density(s) - g_profile(s);
    // quadratic spacing resolves the maximiser, which sits at S ≪ α for large α
    let grid: Vec<f64> = (0..=G_ALPHA_SCAN)
        .map(|i| {
            let t = i as f64 / G_ALPHA_SCAN as f64;
            alpha * t * t
        })
        .collect();
    let values: Vec<f64> = grid.iter().map(|&s| slope_factor(s)).collect();
    let changes: Vec<usize> = (0..G_ALPHA_SCAN)
        .filter(|&i| values[i] > 0.0 && values[i + 1] <= 0.0 || values[i] < 0.0 && values[i + 1] >= 0.0)
        .collect();
    if changes.len() != 1 || values[changes[0]] < 0.0 {
        return Err(Error::Unimodality {
            alpha,
            maxima: changes.iter().filter(|&&i| values[i] > 0.0).count(),
        });
    }
    let i = changes[0];
    let (lo, hi) = (grid[i], grid[i + 1]);
    let coarse = golden_section_max(|s| (alpha - s) * g_profile(s).powi(2), lo, hi, 1e-6 * (hi - lo));
    let argmax = if slope_factor(hi) == 0.0 {
        hi
    } else {
        let bracket = RootBracket::with_tolerance(lo, hi, 1e-12, 200)?;
        let refined = find_root(slope_factor, &bracket)?;
        debug_assert!((refined - coarse).abs() <= (hi - lo));
        refined
    };
    let g = g_profile(argmax);
    let max_value = (alpha - argmax) * g * g;
    let c_threshold = if alpha > 2.0 {
        let slack = max_value - 1.0 / (alpha - 2.0);
        (slack > 0.0).then(|| (slack / alpha).sqrt())
    } else {
        None
    };
    Ok(GAlphaReport {
        alpha,
        argmax,
        max_value,
        c_threshold,
    })
}

/// A-priori slope bound for symmetric clamped profiles, `G⁻¹(√W / 4)`.
pub fn slope_bound_1d(energy: f64) -> Result<f64> {
    let cc = c0();
    if !(energy >= 0.0 && energy < 4.0 * cc * cc) {
        return Err(Error::Domain {
            what: "energy for the symmetric slope bound",
            value: energy,
            domain: "0 <= W < 4 c0²",
        });
    }
    g_inverse(0.25 * energy.sqrt())
}

/// Slope bound without symmetry, `G⁻¹(√W / 2)`, valid for `W < c0²`.
pub fn slope_bound_nonsymmetric(energy: f64) -> Result<f64> {
    let cc = c0();
    if !(energy >= 0.0 && energy < cc * cc) {
        return Err(Error::Domain {
            what: "energy for the non-symmetric slope bound",
            value: energy,
            domain: "0 <= W < c0²",
        });
    }
    g_inverse(0.5 * energy.sqrt())
}

/// Slope bound `K` and positive lower bound `M` for symmetric revolution
/// profiles of energy below `4π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RevolutionBounds {
    pub k: f64,
    pub m: f64,
}

pub fn revolution_bounds(energy: f64) -> Result<RevolutionBounds> {
    if !(energy > 0.0 && energy < 4.0 * PI) {
        return Err(Error::Domain {
            what: "energy for the revolution bounds",
            value: energy,
            domain: "0 < W < 4π",
        });
    }
    let ratio = 4.0 * PI / energy;
    let k = 1.0 / ((ratio - 1.0) * (ratio + 1.0)).sqrt();
    Ok(RevolutionBounds {
        k,
        m: height_floor(k, energy),
    })
}

/// `M = K / (exp((2K/π) √(1+K²) W) - 1)`: the lower bound implied by a slope bound `K`.
pub fn height_floor(k: f64, energy: f64) -> f64 {
    k / ((2.0 * k / PI) * (1.0 + k * k).sqrt() * energy).exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeThresholdCheck {
    pub energy: f64,
    /// `π (α - S) G(S)²`
    pub threshold: f64,
    pub max_slope: f64,
    pub hypothesis: bool,
    pub conclusion: bool,
    /// False exactly when the profile is a counterexample to
    /// `W <= π g_α(S) ⟹ max|u'| < S`.
    pub consistent: bool,
}

/// Evaluate both sides of the slope-threshold implication for one profile.
pub fn slope_threshold_check(
    u: &dyn Curve,
    alpha: f64,
    s: f64,
    rule: &QuadratureRule,
) -> Result<SlopeThresholdCheck> {
    check_alpha(alpha)?;
    if !(s > 0.0 && s < alpha) {
        return Err(Error::Domain {
            what: "slope threshold S",
            value: s,
            domain: "0 < S < alpha",
        });
    }
    let energy = willmore_revolution(u, rule)?.total;
    let threshold = PI * g_alpha(alpha, s)?;
    let max_slope = max_abs_slope(u, rule);
    let hypothesis = energy <= threshold;
    let conclusion = max_slope < s;
    Ok(SlopeThresholdCheck {
        energy,
        threshold,
        max_slope,
        hypothesis,
        conclusion,
        consistent: !hypothesis || conclusion,
    })
}

/// Largest |u'| over the quadrature nodes, seams and a uniform grid.
pub fn max_abs_slope(u: &dyn Curve, rule: &QuadratureRule) -> f64 {
    let (a, b) = u.interval();
    let seams = u.seams();
    let mut xs: Vec<f64> = rule.points(a, b, &seams).into_iter().map(|p| p.0).collect();
    xs.extend(crate::curve::linspace(a, b, 2001));
    xs.extend(seams);
    xs.iter().map(|&x| u.eval(x).du.abs()).fold(0.0, f64::max)
}

/// Golden-section search for the maximiser of a unimodal `f` on `[a, b]`.
pub(crate) fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
