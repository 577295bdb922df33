//! Admissible obstacles: catenoid–circle gluings for the surface of revolution
//! problem, pushed-down elastica profiles, hat obstacles for the 1D problem
//! and the smallness conditions a candidate energy certifies.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::bounds::{golden_section_max, max_g_alpha};
use crate::curve::{linspace, Curve, FnCurve, Jet, Smoothness};
use crate::elastica::{hat_obstacle, odd_extension, HatProfile, OddExtension};
use crate::energy::{willmore_1d, willmore_revolution};
use crate::error::{Error, Result};
use crate::specialfn::{c0, find_root, scan_roots_geometric, QuadratureRule, RootBracket};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Alpha0 {
    pub b0: f64,
    pub ratio: f64,
    pub alpha0: f64,
}

/// `b0 tanh b0 = 1`, `ratio = cosh(b0)/b0` and the threshold
/// `α0 = √(1 - 1/(1 + ratio²))` below which no catenoid–circle gluing exists.
pub fn alpha0() -> Alpha0 {
    static CELL: OnceLock<Alpha0> = OnceLock::new();
    *CELL.get_or_init(|| {
        let bracket = RootBracket::with_tolerance(0.5, 2.0, 1e-15, 200).expect("static bracket");
        let b0 = find_root(|b| b * b.tanh() - 1.0, &bracket).expect("b tanh b = 1 has a root in [0.5, 2]");
        let ratio = b0.cosh() / b0;
        Alpha0 {
            b0,
            ratio,
            alpha0: (1.0 - 1.0 / (1.0 + ratio * ratio)).sqrt(),
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    CatenoidCircle,
    SmallAlpha,
    PushedDown,
    Custom,
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::CatenoidCircle => "catenoid-circle",
            Self::SmallAlpha => "small-alpha",
            Self::PushedDown => "pushed-down",
            Self::Custom => "custom",
        })
    }
}

/// Construction parameters; which are present depends on the kind.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ProfileParams {
    pub b: Option<f64>,
    pub x_b: Option<f64>,
    pub x0: Option<f64>,
    pub x_min: Option<f64>,
    pub r: Option<f64>,
    pub c: Option<f64>,
}

#[derive(Clone)]
enum Shape {
    CatenoidCircle { b: f64, x_b: f64 },
    SmallAlpha { b: f64, x_b: f64, x0: f64, x_min: f64, r: f64 },
    PushedDown { ext: OddExtension, shift: f64 },
    Custom(Arc<dyn Curve>),
}

/// A symmetric profile on `[-1, 1]` with boundary height `alpha`.
///
/// Catenoid–circle and small-α profiles end on circle arcs centred at
/// `(±1, 0)`, so they take the value `alpha` with zero slope at `±1`;
/// pushed-down profiles are clamped by construction.
#[derive(Clone, Serialize)]
pub struct RevolutionProfile {
    pub kind: ProfileKind,
    pub alpha: f64,
    pub params: ProfileParams,
    /// Exact energy, where a closed form is known.
    pub closed_form_energy: Option<f64>,
    /// Upper bound on the energy, where only a bound is known.
    pub energy_bound: Option<f64>,
    #[serde(skip)]
    shape: Shape,
}

impl fmt::Debug for RevolutionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RevolutionProfile")
            .field("kind", &self.kind)
            .field("alpha", &self.alpha)
            .field("params", &self.params)
            .field("closed_form_energy", &self.closed_form_energy)
            .field("energy_bound", &self.energy_bound)
            .finish_non_exhaustive()
    }
}

impl RevolutionProfile {
    /// Wrap an arbitrary symmetric curve on `[-1, 1]`.
    pub fn custom(alpha: f64, curve: Arc<dyn Curve>) -> Result<Self> {
        if curve.interval() != (-1.0, 1.0) {
            return Err(Error::Validation("custom revolution profiles must live on [-1, 1]".into()));
        }
        Ok(Self {
            kind: ProfileKind::Custom,
            alpha,
            params: ProfileParams::default(),
            closed_form_energy: None,
            energy_bound: None,
            shape: Shape::Custom(curve),
        })
    }

    /// Minimum of the profile, attained at 0 or at the catenoid neck `±x0`.
    pub fn min_value(&self) -> f64 {
        let mut xs = linspace(0.0, 1.0, 2001);
        xs.extend(self.params.x0);
        xs.into_iter().map(|x| self.eval(x).u).fold(f64::INFINITY, f64::min)
    }
}

fn boundary_arc(alpha: f64, x: f64) -> Jet {
    let q = 1.0 - x.abs();
    let u = (alpha * alpha - q * q).max(0.0).sqrt();
    Jet::new(u, x.signum() * q / u, -alpha * alpha / (u * u * u))
}

impl Curve for RevolutionProfile {
    fn interval(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }

    fn eval(&self, x: f64) -> Jet {
        let y = x.abs();
        let sign = if x < 0.0 { -1.0 } else { 1.0 };
        match &self.shape {
            Shape::CatenoidCircle { b, x_b } => {
                if y <= *x_b {
                    let (bx, c) = (b * x, (b * x).cosh());
                    Jet::new(c / b, bx.sinh(), b * c)
                } else {
                    boundary_arc(self.alpha, x)
                }
            }
            Shape::SmallAlpha { b, x_b, x0, x_min, r } => {
                if y > *x_b {
                    boundary_arc(self.alpha, x)
                } else if y >= *x_min {
                    let t = b * (y - x0);
                    Jet::new(t.cosh() / b, sign * t.sinh(), b * t.cosh())
                } else {
                    let u = (r * r - x * x).sqrt();
                    Jet::new(u, -x / u, -r * r / (u * u * u))
                }
            }
            Shape::PushedDown { ext, shift } => {
                let j = ext.eval(x + 0.5);
                Jet::new(self.alpha - j.u + shift, -j.du, -j.d2u)
            }
            Shape::Custom(c) => c.eval(x),
        }
    }

    fn seams(&self) -> Vec<f64> {
        match &self.shape {
            Shape::CatenoidCircle { x_b, .. } => vec![-x_b, *x_b],
            Shape::SmallAlpha { x_b, x_min, .. } => vec![-x_b, -x_min, *x_min, *x_b],
            Shape::PushedDown { .. } => vec![-0.5, 0.5],
            Shape::Custom(c) => c.seams(),
        }
    }

    fn smoothness(&self) -> Smoothness {
        match &self.shape {
            Shape::Custom(c) => c.smoothness(),
            _ => Smoothness::C1PiecewiseC2,
        }
    }
}

/// Tolerance on the C¹ tangency condition at the catenoid–circle seam.
pub const GLUING_TOL: f64 = 1e-8;
const B_SCAN_MAX: f64 = 1e4;
const B_SCAN_SUBDIVISIONS: usize = 4096;
/// Below this the minimum of |f| over a scan cell is treated as a double root.
const TANGENTIAL_ROOT_TOL: f64 = 1e-10;

fn gluing_equation(alpha: f64, b: f64) -> f64 {
    let ab = alpha * b;
    (b - (ab * ab - ab).max(0.0).sqrt()).cosh() - ab.sqrt()
}

/// All catenoid–circle gluings `v_α` for `alpha ≥ α0`, ordered by `b`.
///
/// Roots with `x_b ∉ (0, 1)` solve the gluing equation only formally (the
/// square root picks the wrong branch) and are discarded.
pub fn catenoid_circle_profiles(alpha: f64) -> Result<Vec<RevolutionProfile>> {
    let a0 = alpha0().alpha0;
    if !(alpha >= a0 - 1e-12) || !alpha.is_finite() {
        return Err(Error::Domain {
            what: "alpha for catenoid-circle profiles",
            value: alpha,
            domain: "alpha >= alpha0 = 0.8335565596",
        });
    }
    let f = |b: f64| gluing_equation(alpha, b);
    let lo = 1.0 / alpha + 1e-12;
    let mut roots = scan_roots_geometric(f, lo, B_SCAN_MAX, B_SCAN_SUBDIVISIONS);
    roots.extend(tangential_roots(&f, lo, B_SCAN_MAX, B_SCAN_SUBDIVISIONS));
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs());

    let mut profiles = Vec::new();
    for b in roots {
        let x_b = 1.0 - (alpha * alpha - alpha / b).max(0.0).sqrt();
        if !(x_b > 0.0 && x_b < 1.0) {
            continue;
        }
        let q = 1.0 - x_b;
        let gamma = (alpha * alpha - q * q).sqrt();
        let residual = (b * x_b).sinh() - q / gamma;
        if !(residual.abs() <= GLUING_TOL * (1.0 + q / gamma)) {
            return Err(Error::Gluing { b, residual });
        }
        profiles.push(RevolutionProfile {
            kind: ProfileKind::CatenoidCircle,
            alpha,
            params: ProfileParams {
                b: Some(b),
                x_b: Some(x_b),
                ..ProfileParams::default()
            },
            closed_form_energy: Some(4.0 * PI * (b * x_b).tanh()),
            energy_bound: None,
            shape: Shape::CatenoidCircle { b, x_b },
        });
    }
    Ok(profiles)
}

/// Double roots that a sign-change scan cannot see: local minima of |f|
/// between same-sign samples that come within [`TANGENTIAL_ROOT_TOL`] of zero.
fn tangential_roots<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> Vec<f64> {
    let ratio = (b / a).powf(1.0 / n as f64);
    let xs: Vec<f64> = (0..=n).map(|i| if i == n { b } else { a * ratio.powi(i as i32) }).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut out = Vec::new();
    for i in 1..n {
        let same_sign = fs[i - 1].signum() == fs[i].signum() && fs[i].signum() == fs[i + 1].signum();
        if same_sign && fs[i].abs() <= fs[i - 1].abs() && fs[i].abs() <= fs[i + 1].abs() {
            let x = golden_section_max(|x| -f(x).abs(), xs[i - 1], xs[i + 1], 1e-13 * xs[i]);
            if f(x).abs() <= TANGENTIAL_ROOT_TOL {
                out.push(x);
            }
        }
    }
    out
}

/// The five-branch construction for `0 < alpha < α0`, glued to the boundary
/// arcs at `±x_b`.
pub fn small_alpha_profile(alpha: f64, x_b: f64) -> Result<RevolutionProfile> {
    let a0 = alpha0().alpha0;
    if !(alpha > 0.0 && alpha < a0) {
        return Err(Error::Domain {
            what: "alpha for small-alpha profiles",
            value: alpha,
            domain: "0 < alpha < alpha0",
        });
    }
    if !(x_b > 1.0 - alpha && x_b < 1.0) {
        return Err(Error::Domain {
            what: "gluing point x_b",
            value: x_b,
            domain: "1 - alpha < x_b < 1",
        });
    }
    let q = 1.0 - x_b;
    let gamma = (alpha * alpha - q * q).sqrt();
    let beta = q / gamma;
    let b = (1.0 + beta * beta).sqrt() / gamma;
    let x0 = x_b - beta.asinh() / b;
    if !(x0 > 0.0) {
        return Err(Error::NoSolution(format!(
            "catenoid neck x0 = {x0} is not inside (0, x_b); no central circle fits"
        )));
    }
    let h = |x: f64| {
        let t = b * (x0 - x);
        b * x - t.cosh() * t.sinh()
    };
    let bracket = RootBracket::with_tolerance(0.0, x0, 1e-15, 400)
        .map_err(|e| Error::NoSolution(format!("x_min bracket: {e}")))?;
    let x_min = find_root(h, &bracket).map_err(|e| Error::NoSolution(format!("x_min: {e}")))?;
    let neck = (b * (x0 - x_min)).cosh() / b;
    let r = (x_min * x_min + neck * neck).sqrt();
    Ok(RevolutionProfile {
        kind: ProfileKind::SmallAlpha,
        alpha,
        params: ProfileParams {
            b: Some(b),
            x_b: Some(x_b),
            x0: Some(x0),
            x_min: Some(x_min),
            r: Some(r),
            c: None,
        },
        closed_form_energy: Some(4.0 * PI * ((b * (x_b - x0)).tanh() + (b * (x0 - x_min)).tanh())),
        energy_bound: None,
        shape: Shape::SmallAlpha { b, x_b, x0, x_min, r },
    })
}

/// Energy bound for pushed-down profiles, `πα c² + π/(α-2)`.
pub fn pushed_down_bound(alpha: f64, c: f64) -> Option<f64> {
    (alpha > 2.0).then(|| PI * alpha * c * c + PI / (alpha - 2.0))
}

/// `u_{α,c}(x) = α - U_c(x + ½) + U_c(-½)`.
///
/// The quadrature energy is checked against the bound, which is only
/// available for `α > 2`.
pub fn pushed_down_profile(alpha: f64, c: f64) -> Result<RevolutionProfile> {
    let floor = 4.0 / c0();
    if !(alpha > floor) || !alpha.is_finite() {
        return Err(Error::Domain {
            what: "alpha for pushed-down profiles",
            value: alpha,
            domain: "alpha > 4/c0",
        });
    }
    if !(c > 0.0 && c < c0()) {
        return Err(Error::Domain {
            what: "elastica parameter c",
            value: c,
            domain: "0 < c < c0",
        });
    }
    let ext = odd_extension(c)?;
    let profile = RevolutionProfile {
        kind: ProfileKind::PushedDown,
        alpha,
        params: ProfileParams {
            c: Some(c),
            ..ProfileParams::default()
        },
        closed_form_energy: None,
        energy_bound: pushed_down_bound(alpha, c),
        shape: Shape::PushedDown {
            shift: ext.eval(-0.5).u,
            ext,
        },
    };
    if let Some(bound) = profile.energy_bound {
        let w = willmore_revolution(&profile, &QuadratureRule::default())?.total;
        if !(w < bound) {
            return Err(Error::Validation(format!(
                "pushed-down energy {w} is not below its bound {bound}"
            )));
        }
    }
    Ok(profile)
}

/// Whether `u_{α,c}` certifies the energy condition `W < π max g_α`
/// through its bound, i.e. `α c² + 1/(α-2) < max g_α`.
pub fn pushed_down_admissible(alpha: f64, c: f64) -> Result<bool> {
    let report = max_g_alpha(alpha)?;
    Ok(pushed_down_bound(alpha, c).is_some_and(|bound| bound < PI * report.max_value))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Admissible functions satisfy `u ≥ ψ`.
    Above,
    /// Admissible functions satisfy `u ≤ ψ`.
    Below,
}

/// An obstacle `ψ` together with the side admissible functions lie on.
#[derive(Clone)]
pub struct ObstacleSpec {
    pub side: Side,
    pub curve: Arc<dyn Curve>,
    /// Width `σ` of the boundary layers on which `ψ < 0` (side above only).
    pub clearance: f64,
    /// Boundary height for the revolution problem.
    pub alpha: Option<f64>,
    /// A known admissible function, used as a starting point.
    pub witness: Option<Arc<dyn Curve>>,
    /// Exact elastic energy of the witness when known.
    pub witness_energy: Option<f64>,
}

impl fmt::Debug for ObstacleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObstacleSpec")
            .field("side", &self.side)
            .field("interval", &self.curve.interval())
            .field("clearance", &self.clearance)
            .field("alpha", &self.alpha)
            .field("has_witness", &self.witness.is_some())
            .finish()
    }
}

const CLEARANCE_GRID: usize = 20001;
/// Default lowering for `ψ = û_c - ε`.
pub const DEFAULT_EPSILON: f64 = 1e-3;
/// Default enlargement of revolution obstacles at `±1`.
pub const DEFAULT_DELTA: f64 = 1e-3;
/// Width of the enlargement bump next to each boundary point.
const BUMP_WIDTH: f64 = 0.1;

impl ObstacleSpec {
    /// Obstacle from below for the 1D problem on `[0, 1]`; requires `ψ < 0`
    /// at both ends and records how far inside that persists.
    pub fn above(curve: Arc<dyn Curve>) -> Result<Self> {
        let (a, b) = curve.interval();
        if (a, b) != (0.0, 1.0) {
            return Err(Error::Obstacle("1D obstacles live on [0, 1]".into()));
        }
        let (l, r) = (curve.value(0.0), curve.value(1.0));
        if !(l < 0.0 && r < 0.0) {
            return Err(Error::Obstacle(format!(
                "obstacle must be negative at both ends, got psi(0) = {l}, psi(1) = {r}"
            )));
        }
        let xs = linspace(0.0, 0.5, CLEARANCE_GRID);
        let first_bad = |mirror: bool| {
            xs.iter()
                .copied()
                .find(|&x| curve.value(if mirror { 1.0 - x } else { x }) >= 0.0)
                .unwrap_or(0.5)
        };
        let clearance = first_bad(false).min(first_bad(true));
        Ok(Self {
            side: Side::Above,
            curve,
            clearance,
            alpha: None,
            witness: None,
            witness_energy: None,
        })
    }

    /// Obstacle from above for the revolution problem on `[-1, 1]`;
    /// requires `ψ(±1) > alpha` strictly.
    pub fn below(curve: Arc<dyn Curve>, alpha: f64) -> Result<Self> {
        if curve.interval() != (-1.0, 1.0) {
            return Err(Error::Obstacle("revolution obstacles live on [-1, 1]".into()));
        }
        if !(alpha > 0.0) {
            return Err(Error::Domain {
                what: "alpha",
                value: alpha,
                domain: "alpha > 0",
            });
        }
        let (l, r) = (curve.value(-1.0), curve.value(1.0));
        if !(l > alpha && r > alpha) {
            return Err(Error::Obstacle(format!(
                "obstacle must exceed alpha = {alpha} at both ends, got {l} and {r}"
            )));
        }
        Ok(Self {
            side: Side::Below,
            curve,
            clearance: 0.0,
            alpha: Some(alpha),
            witness: None,
            witness_energy: None,
        })
    }

    pub fn with_witness(mut self, witness: Arc<dyn Curve>) -> Self {
        self.witness = Some(witness);
        self.witness_energy = None;
        self
    }

    /// Witness `û_c` together with its energy `4c²`.
    pub fn with_hat_witness(mut self, hat: HatProfile) -> Self {
        let energy = hat.energy();
        self.witness = Some(Arc::new(hat));
        self.witness_energy = Some(energy);
        self
    }

    /// `ψ = û_c - ε` with `û_c` itself as witness.
    pub fn hat(c: f64, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::Domain {
                what: "epsilon",
                value: epsilon,
                domain: "epsilon > 0",
            });
        }
        let hat = hat_obstacle(c)?;
        let psi = FnCurve::new(0.0, 1.0, move |x| {
            let j = hat.eval(x);
            Jet::new(j.u - epsilon, j.du, j.d2u)
        })
        .with_seams(hat.seams(), hat.smoothness());
        Ok(Self::above(Arc::new(psi))?.with_hat_witness(hat))
    }

    /// `ψ = v + δ·bump` for a revolution profile `v`, lifting the obstacle
    /// strictly above `alpha` at `±1`, with `v` as witness.
    pub fn enlarged(profile: RevolutionProfile, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::Domain {
                what: "delta",
                value: delta,
                domain: "delta > 0",
            });
        }
        let alpha = profile.alpha;
        let v: Arc<dyn Curve> = Arc::new(profile);
        let base = Arc::clone(&v);
        let mut seams = v.seams();
        seams.extend([-1.0 + BUMP_WIDTH, 1.0 - BUMP_WIDTH]);
        seams.sort_by(f64::total_cmp);
        let psi = FnCurve::new(-1.0, 1.0, move |x| {
            let j = base.eval(x);
            let t = (x.abs() - (1.0 - BUMP_WIDTH)) / BUMP_WIDTH;
            if t <= 0.0 {
                j
            } else {
                let s = x.signum() / BUMP_WIDTH;
                Jet::new(
                    j.u + delta * t.powi(3),
                    j.du + delta * 3.0 * t * t * s,
                    j.d2u + delta * 6.0 * t / (BUMP_WIDTH * BUMP_WIDTH),
                )
            }
        })
        .with_seams(seams, Smoothness::C1PiecewiseC2);
        Ok(Self::below(Arc::new(psi), alpha)?.with_witness(v))
    }

    /// Largest violation of the side constraint by `candidate` on a grid
    /// (positive means infeasible), with its location.
    pub fn worst_violation(&self, candidate: &dyn Curve) -> (f64, f64) {
        let (a, b) = self.curve.interval();
        let mut xs = linspace(a, b, 4001);
        xs.extend(self.curve.seams());
        xs.extend(candidate.seams());
        xs.into_iter()
            .map(|x| {
                let gap = candidate.value(x) - self.curve.value(x);
                (x, if self.side == Side::Above { -gap } else { gap })
            })
            .fold((a, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { p } else { acc })
    }
}

/// Slack for the side check, absorbing rounding of candidates that touch ψ.
pub const SIDE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SmallnessCondition {
    /// 1D: `inf W < 4 c0²`.
    B,
    /// 1D without symmetry: `inf W < c0²`.
    BStar,
    /// Revolution: `inf W < 4π`.
    D,
    /// Revolution: `inf W < π max g_α`.
    GAlpha,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub energy: f64,
    pub certified: Vec<SmallnessCondition>,
    /// Smallest signed distance to the obstacle on the admissible side.
    pub min_gap: f64,
    pub pi_max_g_alpha: Option<f64>,
}

impl AdmissibilityReport {
    pub fn certifies(&self, c: SmallnessCondition) -> bool {
        self.certified.contains(&c)
    }
}

/// Check that `candidate` is admissible for `spec` and report which
/// smallness conditions its energy certifies for the infimum.
///
/// With `alpha = None` the candidate is scored with the 1D energy,
/// otherwise with the revolution energy at boundary height `alpha`.
pub fn check_admissibility(
    spec: &ObstacleSpec,
    candidate: &dyn Curve,
    alpha: Option<f64>,
    rule: &QuadratureRule,
) -> Result<AdmissibilityReport> {
    let (x, violation) = spec.worst_violation(candidate);
    if violation > SIDE_TOL {
        return Err(Error::SideViolation { x, violation });
    }
    let cc = c0();
    let mut certified = Vec::new();
    let (energy, pi_max_g_alpha) = match alpha {
        None => {
            let w = willmore_1d(candidate, rule);
            if w < 4.0 * cc * cc {
                certified.push(SmallnessCondition::B);
            }
            if w < cc * cc {
                certified.push(SmallnessCondition::BStar);
            }
            (w, None)
        }
        Some(alpha) => {
            let w = willmore_revolution(candidate, rule)?.total;
            if w < 4.0 * PI {
                certified.push(SmallnessCondition::D);
            }
            let threshold = PI * max_g_alpha(alpha)?.max_value;
            if w < threshold {
                certified.push(SmallnessCondition::GAlpha);
            }
            (w, Some(threshold))
        }
    };
    Ok(AdmissibilityReport {
        energy,
        certified,
        min_gap: -violation,
        pi_max_g_alpha,
    })
}
