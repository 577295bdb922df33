//! Discretised obstacle problems for the elastic energy and for the Willmore
//! energy of surfaces of revolution, with post-hoc checks of the qualitative
//! properties minimisers are known to have.
//!
//! Profiles are clamped cubic Hermite splines. Pointwise bounds (the obstacle
//! and, for revolution problems, a positivity floor) are imposed at every
//! element Gauss point and node through an augmented Lagrangian with a
//! geometric penalty schedule; each stage is solved by damped Newton.

mod discrete;
mod probe;
mod solver;
mod verify;

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{height_floor, max_g_alpha, revolution_bounds, slope_bound_1d, slope_bound_nonsymmetric};
use crate::curve::{Curve, FnCurve, Jet};
use crate::error::{Error, Result};
use crate::obstacles::{ObstacleSpec, Side};
use crate::specialfn::c0;

pub use discrete::{DiscreteProfile, Functional};
pub use probe::{cone_obstacle, probe_nonexistence, ProbeRegime, ProbeRow};
pub use solver::InnerSolver;
pub use verify::{
    verify_comparison, verify_envelope, verify_v_structure, verify_variational_inequality, EnvelopeCheck,
    VStructureReport,
};

use discrete::{constraint_points, slope_points, Layout, Mirror};
use solver::{Augmented, Constraint, InnerOptions};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizeConfig {
    /// Elements on the full interval; must be even for symmetric problems.
    pub elements: usize,
    pub penalty_initial: f64,
    pub penalty_growth: f64,
    pub penalty_stages: usize,
    /// Multiplier updates at the final penalty when the schedule ends infeasible.
    pub extra_multiplier_iterations: usize,
    pub solver: InnerSolver,
    pub max_inner_iterations: usize,
    /// Inner stopping tolerance on the free-DOF gradient (max norm).
    pub inner_tolerance: f64,
    /// Largest admissible constraint violation at the constraint points.
    pub constraint_tolerance: f64,
    /// Overrides the floor derived from the a-priori height bound.
    pub positivity_floor: Option<f64>,
    /// Slope cap for 1D problems whose obstacle carries no witness energy.
    pub slope_limit: Option<f64>,
    pub seed: u64,
    pub starts: usize,
    /// Random directions used by the variational-inequality check.
    pub vi_trials: usize,
}

impl Default for MinimizeConfig {
    fn default() -> Self {
        Self {
            elements: 256,
            penalty_initial: 1e2,
            penalty_growth: 10.0,
            penalty_stages: 8,
            extra_multiplier_iterations: 30,
            solver: InnerSolver::Newton,
            max_inner_iterations: 500,
            inner_tolerance: 1e-8,
            constraint_tolerance: 1e-10,
            positivity_floor: None,
            slope_limit: None,
            seed: 1,
            starts: 1,
            vi_trials: 100,
        }
    }
}

impl MinimizeConfig {
    pub fn with_elements(mut self, n: usize) -> Self {
        self.elements = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Validation(msg.to_string()));
        if self.elements < 4 || self.elements % 2 != 0 {
            return bad("element count must be even and at least 4");
        }
        if !(self.penalty_initial > 0.0) {
            return bad("initial penalty must be positive");
        }
        if !(self.penalty_growth > 1.0) {
            return bad("penalty growth factor must exceed 1");
        }
        if self.penalty_stages == 0 || self.starts == 0 || self.max_inner_iterations == 0 {
            return bad("stage, start and iteration counts must be positive");
        }
        if !(self.inner_tolerance > 0.0 && self.constraint_tolerance > 0.0) {
            return bad("tolerances must be positive");
        }
        if let Some(f) = self.positivity_floor {
            if !(f > 0.0) {
                return bad("positivity floor must be positive");
            }
        }
        if let Some(s) = self.slope_limit {
            if !(s > 0.0 && s.is_finite()) {
                return bad("slope limit must be positive and finite");
            }
        }
        if let InnerSolver::Lbfgs { memory: 0 } = self.solver {
            return bad("L-BFGS memory must be positive");
        }
        Ok(())
    }

    fn inner(&self) -> InnerOptions {
        InnerOptions {
            solver: self.solver,
            max_iterations: self.max_inner_iterations,
            tolerance: self.inner_tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Problem {
    /// Elastic energy above an obstacle on `[0, 1]`.
    OneD { symmetric: bool },
    /// Revolution energy below an obstacle with boundary height `alpha`.
    Revolution { alpha: f64 },
    /// Revolution energy without obstacle.
    FreeRevolution { alpha: f64 },
}

impl Problem {
    pub fn functional(&self) -> Functional {
        match self {
            Self::OneD { .. } => Functional::Elastic,
            _ => Functional::Revolution,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageLog {
    pub rho: f64,
    pub objective: f64,
    pub energy: f64,
    pub violation: f64,
    pub inner_iterations: usize,
    pub inner_converged: bool,
}

/// A-priori slope bound against the observed slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeBoundCheck {
    pub energy_threshold: f64,
    pub bound: Option<f64>,
    pub max_slope: f64,
    /// `None` when the energy is too large for the bound to apply.
    pub holds: Option<bool>,
}

/// Slope bound `K` and height floor `M` for revolution minimisers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RevolutionBoundCheck {
    pub k: f64,
    pub m: f64,
    pub max_slope: f64,
    pub min_value: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FloorSource {
    Config,
    /// From the bound for energies below `4π`.
    FourPi,
    /// From the slope threshold `S*` of `g_α`.
    GAlpha,
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Diagnostics {
    pub slope_bound: Option<SlopeBoundCheck>,
    pub revolution_bounds: Option<RevolutionBoundCheck>,
    pub v_structure: Option<VStructureReport>,
    /// Most negative (1D) or most positive (revolution) directional derivative.
    pub vi_residual: Option<f64>,
    pub comparison: Option<bool>,
    pub envelope: Option<EnvelopeCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizeReport {
    pub problem: Problem,
    pub profile: DiscreteProfile,
    pub energy: f64,
    /// Intervals on which the profile touches the obstacle (points appear
    /// as degenerate intervals).
    pub active_set: Vec<(f64, f64)>,
    /// Penalty schedule met the tolerances and the profile is resolved by
    /// the element quadrature.
    pub converged: bool,
    /// See `DiscreteProfile::quadrature_defect`.
    pub quadrature_defect: f64,
    /// See `DiscreteProfile::max_element_turning`.
    pub max_element_turning: f64,
    /// Slope bound imposed from the witness energy, else `slope_limit` (1D only).
    pub slope_cap: Option<f64>,
    /// Some slope constraint carries a positive multiplier or the steepest
    /// slope touches the cap.
    pub slope_cap_active: bool,
    /// Largest obstacle violation at the constraint points.
    pub max_violation: f64,
    pub floor: Option<f64>,
    pub floor_source: Option<FloorSource>,
    pub stages: Vec<StageLog>,
    /// Violation fell at least fivefold per stage until within tolerance.
    pub penalty_trend_ok: bool,
    /// Stage energies rise towards the constrained minimum.
    pub stage_energies_nondecreasing: bool,
    pub seed: u64,
    /// Winning start: 0 the initial profile, then the coarse-grid
    /// continuation when there is one, then random perturbations.
    pub start: usize,
    pub diagnostics: Diagnostics,
}

/// Relative drop of the stage energy ignored by the monotonicity check:
/// multiplier updates and inexact inner solves move it at this level.
const STAGE_ENERGY_SLACK: f64 = 1e-6;
/// Contact tolerance for the reported active set.
const CONTACT_TOL: f64 = 1e-9;
/// Largest violation accepted for a starting profile.
const START_TOL: f64 = 1e-6;

struct Setup {
    layout: Layout,
    constraints: Vec<Constraint>,
    start: Vec<f64>,
    /// Further deterministic starts, tried after `start`.
    alternates: Vec<Vec<f64>>,
    /// +1: perturbations may push down (below obstacle); -1: push up.
    perturb_sign: f64,
}

struct RunOutcome {
    x: Vec<f64>,
    lambda: Vec<f64>,
    stages: Vec<StageLog>,
    converged: bool,
    violation: f64,
    trend_ok: bool,
    nondecreasing: bool,
}

fn run(setup: &Setup, x0: Vec<f64>, config: &MinimizeConfig) -> RunOutcome {
    let inner = config.inner();
    let mut obj = Augmented {
        layout: &setup.layout,
        constraints: &setup.constraints,
        lambda: vec![0.0; setup.constraints.len()],
        rho: config.penalty_initial,
    };
    let mut x = x0;
    let mut stages = Vec::new();
    let total = if setup.constraints.is_empty() {
        1
    } else {
        config.penalty_stages + config.extra_multiplier_iterations
    };
    let mut last_converged = false;
    for s in 0..total {
        if s >= config.penalty_stages {
            let v = stages.last().map_or(f64::INFINITY, |l: &StageLog| l.violation);
            if v <= config.constraint_tolerance && last_converged {
                break;
            }
            // nearly dependent contact constraints make multiplier updates
            // crawl; a stiffer penalty restores progress
            let before = stages.len().checked_sub(2).map_or(f64::INFINITY, |k| stages[k].violation);
            if s > config.penalty_stages && v > 0.5 * before {
                obj.rho = (obj.rho * config.penalty_growth).min(MAX_PENALTY);
            }
        } else {
            obj.rho = config.penalty_initial * config.penalty_growth.powi(s as i32);
        }
        let out = solver::minimize(&obj, &mut x, &inner);
        last_converged = out.converged;
        let mut g = vec![0.0; x.len()];
        let energy = discrete::assemble_energy(&setup.layout, &x, &mut g, None);
        stages.push(StageLog {
            rho: obj.rho,
            objective: obj.value(&x),
            energy,
            violation: obj.violation(&x, false),
            inner_iterations: out.iterations,
            inner_converged: out.converged,
        });
        obj.update_multipliers(&x);
    }
    let violation = obj.violation(&x, false);
    let tol = config.constraint_tolerance;
    let scheduled = &stages[..stages.len().min(config.penalty_stages)];
    let trend_ok = penalty_trend(scheduled, tol);
    let nondecreasing =
        scheduled.windows(2).all(|w| w[1].energy >= w[0].energy - STAGE_ENERGY_SLACK * (1.0 + w[0].energy.abs()));
    RunOutcome {
        lambda: obj.lambda.clone(),
        converged: last_converged && violation <= tol,
        violation: obj.violation(&x, true),
        x,
        stages,
        trend_ok,
        nondecreasing,
    }
}

/// Violations never increase across the penalty stages and shrink on
/// average by at least a factor 5 per stage until below `tol`.
fn penalty_trend(stages: &[StageLog], tol: f64) -> bool {
    let live: Vec<f64> = stages.iter().map(|s| s.violation).collect();
    let cut = live.iter().position(|&v| v <= tol).map_or(live.len(), |k| k + 1);
    let live = &live[..cut];
    if live.len() < 2 {
        return true;
    }
    let monotone = live.windows(2).all(|w| w[1] <= w[0] || w[1] <= tol);
    let first = live[0].max(f64::MIN_POSITIVE);
    let last = live[live.len() - 1].max(tol);
    let rate = (first / last).powf(1.0 / (live.len() - 1) as f64);
    monotone && rate >= 5.0
}

/// Raises `x` by a multiple of `(4x(1-x))²` until the interpolant clears
/// every constraint; the cubic interpolant of a kinked obstacle can dip
/// below it.
fn lift_above(layout: &Layout, constraints: &[Constraint], x: &mut [f64]) {
    let bump = FnCurve::from_values(0.0, 1.0, |t| (4.0 * t * (1.0 - t)).powi(2));
    let w = layout.interpolate(&bump);
    let need = constraints
        .iter()
        .filter(|c| c.residual(x) > 0.0)
        .map(|c| c.residual(x) / c.point.value(&w))
        .filter(|s| s.is_finite())
        .fold(0.0, f64::max);
    if need > 0.0 {
        let scale = 1.01 * need + 1e-6;
        for ((v, wi), &f) in x.iter_mut().zip(&w).zip(&layout.fixed) {
            if !f {
                *v += scale * wi;
            }
        }
    }
}

/// Smooth non-negative bump `((x-a)(b-x))³` on `[a, b]`, scaled to peak 1.
fn bump(a: f64, b: f64, x: f64) -> Jet {
    if x <= a || x >= b {
        return Jet::ZERO;
    }
    let scale = (0.5 * (b - a)).powi(6);
    let p = (x - a) * (b - x);
    let dp = a + b - 2.0 * x;
    Jet::new(p.powi(3) / scale, 3.0 * p * p * dp / scale, (6.0 * p * dp * dp - 6.0 * p * p) / scale)
}

/// Perturbed start for multistart runs: random bumps pushing away from the
/// obstacle, mirrored with the layout.
fn perturbed_start(setup: &Setup, seed: u64, start: usize) -> Vec<f64> {
    let mut x = setup.start.clone();
    if start == 0 {
        return x;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(start as u64));
    let l = &setup.layout;
    let (lo, hi) = (l.node(0), l.node(l.m));
    for _ in 0..3 {
        let w = rng.gen_range(0.1..0.5) * (hi - lo);
        let a = rng.gen_range(lo..hi - w);
        let amp = rng.gen_range(0.01..0.05);
        for k in 0..=l.m {
            let j = bump(a, a + w, l.node(k));
            if !l.fixed[2 * k] {
                x[2 * k] -= setup.perturb_sign * amp * j.u;
            }
            if !l.fixed[2 * k + 1] {
                x[2 * k + 1] -= setup.perturb_sign * amp * j.du;
            }
        }
    }
    x
}

fn mirror_point(layout: &Layout, x: f64) -> Option<f64> {
    match layout.mirror {
        Mirror::None => None,
        Mirror::AboutRightEnd => Some(2.0 * layout.node(layout.m) - x),
        Mirror::AboutLeftEnd => Some(2.0 * layout.node(0) - x),
    }
}

fn active_set(setup: &Setup, outcome: &RunOutcome) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, bool)> = Vec::new();
    for (c, &lam) in setup.constraints.iter().zip(&outcome.lambda) {
        if !c.obstacle {
            continue;
        }
        let active = lam > 0.0 || c.residual(&outcome.x).abs() <= CONTACT_TOL;
        pts.push((c.point.x, active));
        if let Some(m) = mirror_point(&setup.layout, c.point.x) {
            pts.push((m, active));
        }
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-14 && {
        b.1 |= a.1;
        true
    });
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for (x, active) in pts {
        open = match (open, active) {
            (Some((a, _)), true) => Some((a, x)),
            (None, true) => Some((x, x)),
            (Some(iv), false) => {
                out.push(iv);
                None
            }
            (None, false) => None,
        };
    }
    out.extend(open);
    out
}

fn best_run(setup: &Setup, config: &MinimizeConfig) -> Result<(RunOutcome, usize)> {
    let mut best: Option<(RunOutcome, usize, f64)> = None;
    let extra = setup.alternates.len();
    for start in 0..config.starts + extra {
        let x0 = match start {
            0 => setup.start.clone(),
            k if k <= extra => setup.alternates[k - 1].clone(),
            k => perturbed_start(setup, config.seed, k - extra),
        };
        let probe = Augmented {
            layout: &setup.layout,
            constraints: &setup.constraints,
            lambda: vec![0.0; setup.constraints.len()],
            rho: 1.0,
        };
        if probe.violation(&x0, false) > START_TOL || !probe.value(&x0).is_finite() {
            if start == 0 {
                return Err(Error::InfeasibleStart(format!(
                    "starting profile violates the constraints by {:.3e}",
                    probe.violation(&x0, false)
                )));
            }
            continue;
        }
        let out = run(setup, x0, config);
        let mut g = vec![0.0; out.x.len()];
        let e = discrete::assemble_energy(&setup.layout, &out.x, &mut g, None);
        let better = match &best {
            None => true,
            Some((b, _, be)) => (out.converged && !b.converged) || (out.converged == b.converged && e < *be),
        };
        if better {
            best = Some((out, start, e));
        }
    }
    let (out, start, _) = best.expect("the first start is always run");
    Ok((out, start))
}

fn obstacle_constraints(layout: &Layout, psi: &dyn Curve, sign: f64) -> Vec<Constraint> {
    constraint_points(layout)
        .into_iter()
        .map(|point| Constraint {
            bound: psi.value(point.x),
            point,
            sign,
            obstacle: true,
        })
        .collect()
}

fn finish(
    problem: Problem,
    setup: &Setup,
    outcome: RunOutcome,
    start: usize,
    floor: Option<(f64, FloorSource)>,
    config: &MinimizeConfig,
) -> MinimizeReport {
    let symmetric = setup.layout.mirror != Mirror::None;
    let profile = setup.layout.profile(&outcome.x, symmetric);
    let energy = profile.energy(problem.functional());
    let quadrature_defect = profile.quadrature_defect(problem.functional());
    let max_element_turning = profile.max_element_turning();
    MinimizeReport {
        problem,
        active_set: active_set(setup, &outcome),
        converged: outcome.converged && quadrature_defect <= RESOLUTION_TOL && max_element_turning <= MAX_TURNING,
        quadrature_defect,
        max_element_turning,
        slope_cap: None,
        slope_cap_active: false,
        max_violation: outcome.violation,
        floor: floor.map(|f| f.0),
        floor_source: floor.map(|f| f.1),
        stages: outcome.stages,
        penalty_trend_ok: outcome.trend_ok,
        stage_energies_nondecreasing: outcome.nondecreasing,
        seed: config.seed,
        start,
        diagnostics: Diagnostics::default(),
        profile,
        energy,
    }
}

/// Smallest grid solved as a continuation start.
const CONTINUATION_MIN: usize = 128;

/// The converged minimiser on half the grid, prolonged (exactly, as the
/// Hermite spaces are nested) and lifted onto the constraints. The descent
/// from the witness alone can stall in a worse local minimum on some grids.
fn coarse_start(
    obstacle: &ObstacleSpec,
    symmetric: bool,
    config: &MinimizeConfig,
    layout: &Layout,
    constraints: &[Constraint],
) -> Option<Vec<f64>> {
    let coarse = config.elements / 2;
    if coarse < CONTINUATION_MIN || (symmetric && coarse % 2 != 0) {
        return None;
    }
    let cfg = MinimizeConfig { elements: coarse, vi_trials: 0, starts: 1, ..config.clone() };
    let report = solve_1d(obstacle, symmetric, &cfg).ok().filter(|r| r.converged)?;
    let mut x = layout.interpolate(&report.profile);
    for (v, &f) in x.iter_mut().zip(&layout.fixed) {
        if f {
            *v = 0.0;
        }
    }
    lift_above(layout, constraints, &mut x);
    Some(x)
}

/// Internal 1D driver; reports non-convergence through the flag instead of an error.
pub(crate) fn solve_1d(obstacle: &ObstacleSpec, symmetric: bool, config: &MinimizeConfig) -> Result<MinimizeReport> {
    config.validate()?;
    if obstacle.side != Side::Above || obstacle.curve.interval() != (0.0, 1.0) {
        return Err(Error::Validation("1D problems need an obstacle from below on [0, 1]".into()));
    }
    let layout = Layout::elastic(config.elements, symmetric);
    let psi = Arc::clone(&obstacle.curve);
    let start_curve: Arc<dyn Curve> = match &obstacle.witness {
        Some(w) => Arc::clone(w),
        None => {
            let psi = Arc::clone(&psi);
            let lift = move |x: f64| psi.value(x).max(0.0) + 1e-2 * (PI * x).sin().powi(2);
            Arc::new(FnCurve::from_values(0.0, 1.0, lift))
        }
    };
    let mut start = layout.interpolate(&*start_curve);
    for (v, &f) in start.iter_mut().zip(&layout.fixed) {
        if f {
            *v = 0.0;
        }
    }
    let mut constraints = obstacle_constraints(&layout, &*psi, -1.0);
    lift_above(&layout, &constraints, &mut start);
    // a witness below the energy threshold bounds the slope of every
    // minimiser a priori; imposing that bound rules out steep spurious
    // discrete minima
    let cap = obstacle.witness_energy.and_then(|e| {
        let bound = if symmetric { slope_bound_1d(e) } else { slope_bound_nonsymmetric(e) };
        bound.ok().filter(|b| b.is_finite()).map(|b| b * (1.0 + SLOPE_CAP_MARGIN))
    })
    .or(config.slope_limit);
    if let Some(cap) = cap {
        for point in slope_points(&layout) {
            constraints.push(Constraint { point, sign: 1.0, bound: cap, obstacle: false });
            constraints.push(Constraint { point, sign: -1.0, bound: -cap, obstacle: false });
        }
    }
    let alternates = coarse_start(obstacle, symmetric, config, &layout, &constraints).into_iter().collect();
    let setup = Setup { constraints, layout, start, alternates, perturb_sign: -1.0 };
    let (outcome, start) = best_run(&setup, config)?;
    let multiplier_active = setup.constraints.iter().zip(&outcome.lambda).any(|(c, &l)| !c.obstacle && l > 0.0);
    let mut report = finish(Problem::OneD { symmetric }, &setup, outcome, start, None, config);
    report.slope_cap = cap;
    report.slope_cap_active = multiplier_active
        || cap.is_some_and(|c| report.profile.max_abs_slope() >= c * (1.0 - CAP_CONTACT_REL));

    let cc = c0();
    let (threshold, bound) = if symmetric {
        (4.0 * cc * cc, slope_bound_1d(report.energy).ok())
    } else {
        (cc * cc, slope_bound_nonsymmetric(report.energy).ok())
    };
    let max_slope = report.profile.max_abs_slope();
    report.diagnostics.slope_bound = Some(SlopeBoundCheck {
        energy_threshold: threshold,
        bound,
        max_slope,
        holds: bound.map(|b| max_slope <= b + 1e-6),
    });
    if symmetric {
        report.diagnostics.v_structure = Some(verify_v_structure(&report));
        report.diagnostics.comparison = Some(verify_comparison(&report));
    }
    if report.converged && config.vi_trials > 0 {
        report.diagnostics.vi_residual = Some(verify_variational_inequality(&report, Some(obstacle), config.vi_trials));
    }
    Ok(report)
}

/// Minimise the elastic energy over clamped profiles on `[0, 1]` lying above
/// the obstacle, optionally restricted to profiles symmetric about `1/2`.
pub fn minimize_1d(obstacle: &ObstacleSpec, symmetric: bool, config: &MinimizeConfig) -> Result<MinimizeReport> {
    let report = solve_1d(obstacle, symmetric, config)?;
    if !report.converged {
        return Err(non_convergence(&report));
    }
    Ok(report)
}

fn non_convergence(report: &MinimizeReport) -> Error {
    let last = report.stages.last();
    Error::NonConvergence(format!(
        "after {} stages: violation {:.3e}, inner solver converged: {}, quadrature defect {:.3e}, element turning {:.3}",
        report.stages.len(),
        last.map_or(f64::NAN, |s| s.violation),
        last.is_some_and(|s| s.inner_converged),
        report.quadrature_defect,
        report.max_element_turning
    ))
}

const WITNESS_DROP: f64 = 1e-4;
/// A slope within this relative distance of the cap counts as touching it.
const CAP_CONTACT_REL: f64 = 1e-2;
/// Relative slack on the a-priori slope cap so the witness itself stays feasible.
const SLOPE_CAP_MARGIN: f64 = 1e-2;
/// Largest relative quadrature defect of a profile counted as resolved.
const RESOLUTION_TOL: f64 = 1e-6;
/// Largest tangent turning (radians) within one element of a resolved profile.
const MAX_TURNING: f64 = 0.5;
/// Cap on the penalty parameter during the extra multiplier iterations.
const MAX_PENALTY: f64 = 1e13;

/// Positivity floor: half the a-priori lower bound implied by the starting energy.
fn derive_floor(alpha: f64, start_energy: f64, config: &MinimizeConfig) -> Result<(f64, FloorSource)> {
    if let Some(f) = config.positivity_floor {
        return Ok((f, FloorSource::Config));
    }
    if start_energy < 4.0 * PI {
        return Ok((0.5 * revolution_bounds(start_energy)?.m, FloorSource::FourPi));
    }
    let g = max_g_alpha(alpha)?;
    if start_energy < PI * g.max_value {
        let m = height_floor(g.argmax, start_energy);
        if m > 0.0 {
            return Ok((0.5 * m, FloorSource::GAlpha));
        }
    }
    Ok((1e-6 * alpha, FloorSource::Fallback))
}

fn solve_revolution(alpha: f64, obstacle: Option<&ObstacleSpec>, config: &MinimizeConfig) -> Result<MinimizeReport> {
    config.validate()?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Validation(format!("boundary height must be positive, got {alpha}")));
    }
    let layout = Layout::revolution(config.elements);
    let mut constraints = Vec::new();
    let start_curve: Arc<dyn Curve> = match obstacle {
        Some(spec) => {
            if spec.side != Side::Below || spec.curve.interval() != (-1.0, 1.0) {
                return Err(Error::Validation("revolution problems need an obstacle from above on [-1, 1]".into()));
            }
            if spec.alpha.is_some_and(|a| a != alpha) {
                return Err(Error::Validation("obstacle was built for a different boundary height".into()));
            }
            constraints = obstacle_constraints(&layout, &*spec.curve, 1.0);
            match &spec.witness {
                // lowered so the cubic interpolant clears an obstacle touching the witness
                Some(w) => {
                    let w = Arc::clone(w);
                    Arc::new(FnCurve::from_values(-1.0, 1.0, move |x| {
                        w.value(x) - WITNESS_DROP * (1.0 - x * x).powi(2)
                    }))
                }
                None => {
                    let psi = Arc::clone(&spec.curve);
                    Arc::new(FnCurve::from_values(-1.0, 1.0, move |x| {
                        alpha.min(psi.value(x) - 1e-2 * (1.0 - x * x))
                    }))
                }
            }
        }
        None => Arc::new(FnCurve::constant(-1.0, 1.0, alpha)),
    };
    let mut start = layout.interpolate(&*start_curve);
    start[1] = 0.0;
    start[2 * layout.m] = alpha;
    start[2 * layout.m + 1] = 0.0;
    let start_profile = layout.profile(&start, true);
    if !(start_profile.min_value() > 0.0) {
        return Err(Error::InfeasibleStart("starting profile is not positive".into()));
    }
    let start_energy = start_profile.energy(Functional::Revolution);
    let (floor, source) = derive_floor(alpha, start_energy, config)?;
    if !(start_profile.min_value() > floor) {
        return Err(Error::InfeasibleStart(format!(
            "starting profile dips below the positivity floor {floor:.3e}"
        )));
    }
    let floor_constraints: Vec<Constraint> = constraint_points(&layout)
        .into_iter()
        .map(|point| Constraint { point, sign: -1.0, bound: floor, obstacle: false })
        .collect();
    constraints.extend(floor_constraints);
    let setup = Setup { layout, constraints, start, alternates: Vec::new(), perturb_sign: 1.0 };
    let (outcome, start) = best_run(&setup, config)?;
    let floor_touched = setup
        .constraints
        .iter()
        .zip(&outcome.lambda)
        .any(|(c, &lam)| !c.obstacle && lam > 0.0);
    let problem = if obstacle.is_some() { Problem::Revolution { alpha } } else { Problem::FreeRevolution { alpha } };
    let mut report = finish(problem, &setup, outcome, start, Some((floor, source)), config);
    if floor_touched {
        return Err(Error::FloorBreach {
            floor,
            min: report.profile.min_value(),
        });
    }
    if !report.converged {
        return Err(non_convergence(&report));
    }
    if report.energy < 4.0 * PI {
        let b = revolution_bounds(report.energy)?;
        let max_slope = report.profile.max_abs_slope();
        let min_value = report.profile.min_value();
        report.diagnostics.revolution_bounds = Some(RevolutionBoundCheck {
            k: b.k,
            m: b.m,
            max_slope,
            min_value,
            holds: max_slope <= b.k + 1e-6 && min_value >= b.m - 1e-6,
        });
    }
    if obstacle.is_none() {
        report.diagnostics.envelope = Some(verify_envelope(&report));
    }
    if config.vi_trials > 0 {
        report.diagnostics.vi_residual = Some(verify_variational_inequality(&report, obstacle, config.vi_trials));
    }
    Ok(report)
}

/// Minimise the revolution energy over symmetric profiles with `u(±1) = α`,
/// `u'(±1) = 0` lying below the obstacle.
pub fn minimize_revolution(alpha: f64, obstacle: &ObstacleSpec, config: &MinimizeConfig) -> Result<MinimizeReport> {
    solve_revolution(alpha, Some(obstacle), config)
}

/// The free revolution problem; the minimiser is symmetric, lies above `α`
/// and is monotone on each half.
pub fn free_minimize_revolution(alpha: f64, config: &MinimizeConfig) -> Result<MinimizeReport> {
    solve_revolution(alpha, None, config)
}
