//! Post-hoc checks on computed minimisers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::discrete::{gauss_points, DiscreteProfile};
use super::{bump, MinimizeReport, Problem};
use crate::curve::{linspace, Curve, FnCurve, Jet, Smoothness};
use crate::energy::{first_variation_1d, first_variation_hyperbolic, v_of};
use crate::obstacles::{ObstacleSpec, Side};
use crate::specialfn::QuadratureRule;

/// Gap below which a bump is not considered to lie in the free region.
const FREE_GAP: f64 = 1e-7;

fn symmetric_about(problem: &Problem) -> Option<f64> {
    match problem {
        Problem::OneD { symmetric: true } => Some(0.5),
        Problem::OneD { symmetric: false } => None,
        _ => Some(0.0),
    }
}

/// Distance to the obstacle on the admissible side.
fn gap(obstacle: Option<&ObstacleSpec>, u: &DiscreteProfile, x: f64) -> f64 {
    match obstacle {
        None => f64::INFINITY,
        Some(o) => {
            let d = u.value(x) - o.curve.value(x);
            if o.side == Side::Above {
                d
            } else {
                -d
            }
        }
    }
}

/// Directional derivatives along random admissible directions.
///
/// Half of the directions are non-negative bumps anywhere (admissible with
/// the sign that moves away from the obstacle); the others are bumps in the
/// free region, admissible with either sign. For the 1D problem the most
/// negative value of `W'(u)` is returned, for revolution problems the most
/// positive value of `(W^h)'(u)`; both vanish up to discretisation error at
/// a minimiser. Directions are normalised to `∫ φ''² = 1`.
pub fn verify_variational_inequality(report: &MinimizeReport, obstacle: Option<&ObstacleSpec>, trials: usize) -> f64 {
    let u = &report.profile;
    let (lo, hi) = u.interval;
    let len = hi - lo;
    let mirror = symmetric_about(&report.problem);
    let rule = QuadratureRule::gauss(2 * u.n, 5).expect("positive panel count");
    let mut rng = ChaCha8Rng::seed_from_u64(report.seed);
    let one_d = matches!(report.problem, Problem::OneD { .. });
    let mut worst: f64 = 0.0;
    for trial in 0..trials {
        let want_free = trial % 2 == 1;
        let mut chosen = None;
        for _ in 0..50 {
            let w = rng.gen_range(0.05..0.5) * len;
            let a = rng.gen_range(lo + 1e-3 * len..hi - 1e-3 * len - w);
            let (a, b) = (a, a + w);
            if !want_free {
                chosen = Some((a, b, false));
                break;
            }
            let free = linspace(a, b, 200).into_iter().all(|x| {
                gap(obstacle, u, x) > FREE_GAP && mirror.is_none_or(|m| gap(obstacle, u, 2.0 * m - x) > FREE_GAP)
            });
            if free {
                chosen = Some((a, b, true));
                break;
            }
        }
        let Some((a, b, free)) = chosen else { continue };
        let phi = direction(a, b, mirror, lo, hi);
        let norm = rule.integrate_with_breaks(|x| phi.eval(x).d2u.powi(2), lo, hi, &phi.seams()).sqrt();
        let value = if one_d {
            first_variation_1d(u, &phi, &rule)
        } else {
            first_variation_hyperbolic(u, &phi, &rule)
        };
        let Ok(value) = value else { return f64::NAN };
        let v = value / norm;
        worst = match (one_d, free) {
            (true, false) => worst.min(v),
            (true, true) => worst.min(-v.abs()),
            (false, false) => worst.max(v),
            (false, true) => worst.max(v.abs()),
        };
    }
    worst
}

fn direction(a: f64, b: f64, mirror: Option<f64>, lo: f64, hi: f64) -> FnCurve {
    let mut seams = vec![a, b];
    if let Some(m) = mirror {
        seams.extend([2.0 * m - b, 2.0 * m - a]);
    }
    seams.sort_by(f64::total_cmp);
    FnCurve::new(lo, hi, move |x| {
        let j = bump(a, b, x);
        match mirror {
            Some(m) => {
                let r = bump(a, b, 2.0 * m - x);
                Jet::new(j.u + r.u, j.du - r.du, j.d2u + r.d2u)
            }
            None => j,
        }
    })
    .with_seams(seams, Smoothness::C2)
}

/// Shape of `V = u''/(1+u'²)^(5/4)` for a symmetric 1D minimiser.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VStructureReport {
    /// False when the profile is flat (`V ≡ 0`), e.g. without obstacle contact.
    pub applicable: bool,
    pub v_at_0: f64,
    pub v_at_half: f64,
    pub v_at_1: f64,
    /// Element means of `V` failing to decrease on `[0, 1/2]` or increase
    /// on `[1/2, 1]` by more than `monotonicity_tolerance`.
    pub monotonicity_violations: usize,
    /// `1e-6` plus the largest jump of `V` across a node: the discrete `V`
    /// is only determined up to these jumps.
    pub monotonicity_tolerance: f64,
    /// Largest step of `V` against the expected direction.
    pub max_monotonicity_defect: f64,
    /// `V(0) = V(1) > 0 > V(1/2)`.
    pub sign_pattern: bool,
    pub sign_changes_left: usize,
    /// Where `V` changes sign in `(0, 1/2)`.
    pub crossing: Option<f64>,
    pub kappa_half: f64,
    pub kappa_one: f64,
    /// `0 < -κ(1/2) ≤ κ(1)`.
    pub curvature_inequality: bool,
    pub holds: bool,
}

const V_TOL: f64 = 1e-6;

/// `(x, V(x), κ(x))` at nodes (second derivatives averaged across the
/// node) and element midpoints.
fn v_samples(u: &DiscreteProfile) -> (Vec<(f64, f64, f64)>, f64) {
    let nodes = u.nodes();
    let mut out = Vec::with_capacity(2 * u.n + 1);
    let mut jump: f64 = 0.0;
    for k in 0..=u.n {
        let d2 = match u.one_sided_d2(k) {
            (Some(l), Some(r)) => {
                jump = jump.max((l - r).abs() / (1.0 + u.derivatives[k].powi(2)).powf(1.25));
                0.5 * (l + r)
            }
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (None, None) => 0.0,
        };
        let j = Jet::new(u.values[k], u.derivatives[k], d2);
        out.push((nodes[k], v_of(&j), j.curvature()));
        if k < u.n {
            let j = u.eval_in(k, 0.5);
            out.push((0.5 * (nodes[k] + nodes[k + 1]), v_of(&j), j.curvature()));
        }
    }
    (out, jump)
}

/// Gauss-weighted mean of `V` over each element.
fn element_means(u: &DiscreteProfile) -> Vec<f64> {
    let (nodes, weights) = gauss_points();
    (0..u.n)
        .map(|e| {
            nodes.iter().zip(&weights).map(|(&t, &w)| 0.5 * w * v_of(&u.eval_in(e, 0.5 * (t + 1.0)))).sum()
        })
        .collect()
}

pub fn verify_v_structure(report: &MinimizeReport) -> VStructureReport {
    let u = &report.profile;
    let (s, jump) = v_samples(u);
    let tol = V_TOL + jump;
    let mid = s.len() / 2;
    let (v0, vh, v1) = (s[0].1, s[mid].1, s[s.len() - 1].1);
    let applicable = s.iter().any(|p| p.1.abs() > 1e-8);
    // the discrete V oscillates inside elements by O(h²), so monotonicity
    // is judged on element means
    let means = element_means(u);
    let half = u.n / 2;
    let mut violations = 0;
    let mut defect: f64 = 0.0;
    for w in means[..half].windows(2) {
        defect = defect.max(w[1] - w[0]);
        if w[1] - w[0] > tol {
            violations += 1;
        }
    }
    for w in means[half..].windows(2) {
        defect = defect.max(w[0] - w[1]);
        if w[0] - w[1] > tol {
            violations += 1;
        }
    }
    let mut changes = 0;
    let mut crossing = None;
    for w in s[..=mid].windows(2) {
        let (a, b) = (w[0], w[1]);
        if (a.1 > 0.0) != (b.1 > 0.0) {
            changes += 1;
            if crossing.is_none() {
                crossing = Some(a.0 + (b.0 - a.0) * a.1 / (a.1 - b.1));
            }
        }
    }
    let sign_pattern = v0 > V_TOL && v1 > V_TOL && (v0 - v1).abs() <= V_TOL && vh < -V_TOL;
    let (kh, k1) = (s[mid].2, s[s.len() - 1].2);
    let curvature_inequality = -kh > 0.0 && -kh <= k1 + V_TOL;
    VStructureReport {
        applicable,
        v_at_0: v0,
        v_at_half: vh,
        v_at_1: v1,
        monotonicity_violations: violations,
        monotonicity_tolerance: tol,
        max_monotonicity_defect: defect,
        sign_pattern,
        sign_changes_left: changes,
        crossing,
        kappa_half: kh,
        kappa_one: k1,
        curvature_inequality,
        holds: applicable && violations == 0 && sign_pattern && changes == 1 && curvature_inequality,
    }
}

/// Whether the profile stays non-negative, i.e. above the symmetric
/// solution with homogeneous clamped data.
pub fn verify_comparison(report: &MinimizeReport) -> bool {
    profile_nonnegative(&report.profile)
}

pub(crate) fn profile_nonnegative(u: &DiscreteProfile) -> bool {
    let (nodes, _) = gauss_points();
    u.values.iter().all(|&v| v >= -1e-8)
        && (0..u.n).all(|e| nodes.iter().all(|&t| u.eval_in(e, 0.5 * (t + 1.0)).u >= -1e-8))
}

/// Envelope and slope inequalities of the free revolution minimiser on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeCheck {
    pub points: usize,
    /// `α < u(x)`
    pub above_alpha: bool,
    /// `u(x) < √(1 + α² - x²)`
    pub below_sphere: bool,
    /// `-x/α < u'(x)`
    pub slope_lower: bool,
    /// `u'(x) < 0`
    pub decreasing: bool,
    /// `x + u u' > 0`
    pub radial: bool,
    pub holds: bool,
}

pub fn verify_envelope(report: &MinimizeReport) -> EnvelopeCheck {
    let alpha = match report.problem {
        Problem::Revolution { alpha } | Problem::FreeRevolution { alpha } => alpha,
        Problem::OneD { .. } => f64::NAN,
    };
    let u = &report.profile;
    let nodes = u.nodes();
    let interior: Vec<usize> = (0..=u.n).filter(|&k| nodes[k] > 0.0 && nodes[k] < 1.0).collect();
    let mut c = EnvelopeCheck {
        points: interior.len(),
        above_alpha: true,
        below_sphere: true,
        slope_lower: true,
        decreasing: true,
        radial: true,
        holds: false,
    };
    for k in interior {
        let (x, v, d) = (nodes[k], u.values[k], u.derivatives[k]);
        c.above_alpha &= alpha < v;
        c.below_sphere &= v < (1.0 + alpha * alpha - x * x).sqrt();
        c.slope_lower &= -x / alpha < d;
        c.decreasing &= d < 0.0;
        c.radial &= x + v * d > 0.0;
    }
    c.holds = c.points > 0 && c.above_alpha && c.below_sphere && c.slope_lower && c.decreasing && c.radial;
    c
}
