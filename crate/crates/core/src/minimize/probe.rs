//! Sweep of symmetric cone obstacles across the universal height bound.

use std::sync::Arc;

use serde::Serialize;

use super::{solve_1d, MinimizeConfig, MinimizeReport};
use crate::bounds::{dirichlet_universal_bound, slope_bound_1d};
use crate::curve::{Curve, FnCurve, Jet, Smoothness};
use crate::elastica::{hat_obstacle, HatProfile};
use crate::error::{Error, Result};
use crate::obstacles::ObstacleSpec;
use crate::specialfn::c0;

/// Depth of the cone below zero at the end points.
const CONE_BASE: f64 = 0.35;
/// Clearance of the hat witness above the cone.
const WITNESS_CLEARANCE: f64 = 1e-3;
/// Grid on `[0, 1/2]` for the clearance check.
const WITNESS_SAMPLES: usize = 500;
const WITNESS_BISECTIONS: usize = 40;

/// `ψ(x) = -0.35 + (h + 0.35)(1 - |2x - 1|)`, peaking at `h` in the middle.
/// The smallest hat `û_c` (`c < c0`) clearing the cone is attached as
/// witness when there is one.
pub fn cone_obstacle(height: f64) -> Result<ObstacleSpec> {
    if !(height > 0.0 && height.is_finite()) {
        return Err(Error::Validation(format!("cone height must be positive, got {height}")));
    }
    let rise = height + CONE_BASE;
    let value = move |x: f64| -CONE_BASE + rise * (1.0 - (2.0 * x - 1.0).abs());
    let psi = FnCurve::new(0.0, 1.0, move |x| {
        let side = if x < 0.5 { 1.0 } else { -1.0 };
        Jet::new(value(x), 2.0 * rise * side, 0.0)
    })
    .with_seams(vec![0.5], Smoothness::C0);
    let spec = ObstacleSpec::above(Arc::new(psi))?;
    Ok(match hat_witness(&value) {
        Some(hat) => spec.with_hat_witness(hat),
        None => spec,
    })
}

/// Bisection for the smallest `c` whose hat clears `ψ` on a fine grid.
fn hat_witness(psi: &dyn Fn(f64) -> f64) -> Option<HatProfile> {
    // both curves are symmetric about 1/2; the peak check rejects most
    // candidates with a single evaluation
    let clears = |c: f64| {
        hat_obstacle(c).ok().filter(|hat| {
            hat.value(0.5) >= psi(0.5) + WITNESS_CLEARANCE
                && (0..=WITNESS_SAMPLES).all(|i| {
                    let x = 0.5 * i as f64 / WITNESS_SAMPLES as f64;
                    hat.value(x) >= psi(x) + WITNESS_CLEARANCE
                })
        })
    };
    let mut hi = c0() * (1.0 - 1e-9);
    let mut best = clears(hi)?;
    let mut lo = 0.0;
    for _ in 0..WITNESS_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        match clears(mid) {
            Some(hat) => {
                best = hat;
                hi = mid;
            }
            None => lo = mid,
        }
    }
    Some(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeRegime {
    Below,
    /// At the bound itself; no prediction.
    Indeterminate,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeRow {
    pub height: f64,
    pub regime: ProbeRegime,
    pub elements: usize,
    pub converged: bool,
    pub energy: f64,
    pub max_slope: f64,
    /// Slope cap imposed on the run.
    pub slope_cap: Option<f64>,
    /// The slope cap carries a positive multiplier or touches the profile.
    pub slope_cap_active: bool,
    /// Largest obstacle violation of the discrete minimiser.
    pub max_violation: f64,
    /// A-priori slope bound at this energy, when the energy is below `4c0²`.
    pub slope_bound: Option<f64>,
    /// Energy reached `4c0²` (within 1e-3).
    pub energy_at_threshold: bool,
    /// The run shows degeneration: no convergence, an active slope cap, or
    /// energy at the threshold above the bound.
    pub flagged: bool,
}

/// Slope caps tried, in order, for cones without a hat witness. Minimising
/// sequences above the bound steepen without limit; a cap keeps the
/// discrete problem compact, and an active cap marks the degeneration.
/// The discrete problem is nonconvex near the cap, so the lowest converged
/// energy over the ladder is kept.
pub const PROBE_SLOPE_LIMITS: [f64; 3] = [30.0, 45.0, 60.0];

/// Grid doublings tried when no run converges.
const ESCALATIONS: usize = 1;

/// Minimise above cone obstacles of the given heights, recording the
/// energies and slopes of the discrete minimisers.
pub fn probe_nonexistence(heights: &[f64], config: &MinimizeConfig) -> Result<Vec<ProbeRow>> {
    if heights.is_empty() {
        return Err(Error::Validation("no heights to probe".into()));
    }
    config.validate()?;
    let bound = dirichlet_universal_bound()?.bound;
    let threshold = 4.0 * c0() * c0();
    let mut rows = Vec::with_capacity(heights.len());
    for &h in heights {
        let obstacle = cone_obstacle(h)?;
        let regime = if (h - bound).abs() <= 1e-9 {
            ProbeRegime::Indeterminate
        } else if h < bound {
            ProbeRegime::Below
        } else {
            ProbeRegime::Above
        };
        let caps: Vec<Option<f64>> = if obstacle.witness_energy.is_some() {
            vec![None]
        } else {
            PROBE_SLOPE_LIMITS.iter().copied().map(Some).collect()
        };
        let mut best: Option<(MinimizeReport, usize)> = None;
        let mut last = None;
        for k in 0..=ESCALATIONS {
            let elements = config.elements << k;
            for &cap in &caps {
                let cfg = MinimizeConfig { vi_trials: 0, slope_limit: cap, elements, ..config.clone() };
                let report = solve_1d(&obstacle, true, &cfg)?;
                if !report.converged {
                    last = Some((report, elements));
                } else if best.as_ref().is_none_or(|(b, _)| report.energy < b.energy) {
                    best = Some((report, elements));
                }
            }
            if best.is_some() {
                break;
            }
        }
        let (report, elements) = best.or(last).expect("at least one attempt");
        let energy_at_threshold = report.energy >= threshold - 1e-3;
        rows.push(ProbeRow {
            height: h,
            regime,
            elements,
            converged: report.converged,
            energy: report.energy,
            max_slope: report.profile.max_abs_slope(),
            slope_cap: report.slope_cap,
            slope_cap_active: report.slope_cap_active,
            max_violation: report.max_violation,
            slope_bound: slope_bound_1d(report.energy).ok(),
            energy_at_threshold,
            flagged: !report.converged || report.slope_cap_active || (regime == ProbeRegime::Above && energy_at_threshold),
        });
    }
    Ok(rows)
}
