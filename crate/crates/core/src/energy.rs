//! Quadrature evaluators for the elastic (1D Willmore) energy, the Willmore
//! energy of surfaces of revolution and its hyperbolic counterpart, their
//! first variations, and the auxiliary function `V = u''/(1+u'²)^(5/4)`.

use std::cell::Cell;
use std::f64::consts::PI;

use serde::Serialize;

use crate::curve::{Curve, Jet, Smoothness};
use crate::error::{Error, Result};
use crate::specialfn::QuadratureRule;

/// Boundary slope above which the revolution energy includes the bracket term.
pub const CLAMPED_SLOPE_TOL: f64 = 1e-8;
/// Tolerance on the clamped data of test functions.
pub const TEST_FUNCTION_TOL: f64 = 1e-10;

/// Parts of the surface-of-revolution Willmore energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub total: f64,
    /// `(π/2) ∫ u''² u / (1+u'²)^(5/2)`
    pub bending: f64,
    /// `(π/2) ∫ 1 / (u √(1+u'²))`
    pub membrane: f64,
    /// `-π [u'/√(1+u'²)]` between the end points.
    pub boundary: f64,
    pub boundary_included: bool,
}

fn breaks(curves: &[&dyn Curve]) -> Vec<f64> {
    let mut b: Vec<f64> = curves.iter().flat_map(|c| c.seams()).collect();
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

#[inline]
fn tangent_sine(du: f64) -> f64 {
    du / (1.0 + du * du).sqrt()
}

/// `[u'/√(1+u'²)]` evaluated as (value at b) - (value at a).
pub fn boundary_bracket(v: &dyn Curve) -> f64 {
    let (a, b) = v.interval();
    tangent_sine(v.eval(b).du) - tangent_sine(v.eval(a).du)
}

/// Hyperbolic curvature `κ_h = u u''/(1+u'²)^(3/2) + 1/√(1+u'²)`.
#[inline]
pub fn hyperbolic_curvature(j: &Jet) -> f64 {
    let s2 = 1.0 + j.du * j.du;
    j.u * j.d2u / (s2 * s2.sqrt()) + 1.0 / s2.sqrt()
}

/// Elastic energy `∫ u''² / (1+u'²)^(5/2)` over the curve's interval.
pub fn willmore_1d(v: &dyn Curve, rule: &QuadratureRule) -> f64 {
    let (a, b) = v.interval();
    rule.integrate_with_breaks(
        |x| {
            let j = v.eval(x);
            let s2 = 1.0 + j.du * j.du;
            j.d2u * j.d2u / (s2 * s2 * s2.sqrt())
        },
        a,
        b,
        &v.seams(),
    )
}

struct PositivityGuard {
    bad: Cell<Option<(f64, f64)>>,
}

impl PositivityGuard {
    fn new() -> Self {
        Self { bad: Cell::new(None) }
    }

    fn check(&self, x: f64, u: f64) -> bool {
        if u > 0.0 {
            return true;
        }
        if self.bad.get().is_none() {
            self.bad.set(Some((x, u)));
        }
        false
    }

    fn finish(self) -> Result<()> {
        match self.bad.get() {
            Some((x, value)) => Err(Error::Positivity { x, value }),
            None => Ok(()),
        }
    }
}

/// Willmore energy of the surface obtained by rotating the graph of `v`
/// about the x-axis.
pub fn willmore_revolution(v: &dyn Curve, rule: &QuadratureRule) -> Result<EnergyBreakdown> {
    let (a, b) = v.interval();
    for x in [a, b] {
        let u = v.eval(x).u;
        if !(u > 0.0) {
            return Err(Error::Positivity { x, value: u });
        }
    }
    let guard = PositivityGuard::new();
    let [bend, memb] = rule.integrate_many(
        |x| {
            let j = v.eval(x);
            if !guard.check(x, j.u) {
                return [0.0, 0.0];
            }
            let s2 = 1.0 + j.du * j.du;
            let s = s2.sqrt();
            [j.d2u * j.d2u * j.u / (s2 * s2 * s), 1.0 / (j.u * s)]
        },
        a,
        b,
        &v.seams(),
    );
    guard.finish()?;
    let (ja, jb) = (v.eval(a), v.eval(b));
    let boundary = -PI * (tangent_sine(jb.du) - tangent_sine(ja.du));
    let included = ja.du.abs() > CLAMPED_SLOPE_TOL || jb.du.abs() > CLAMPED_SLOPE_TOL;
    let bending = 0.5 * PI * bend;
    let membrane = 0.5 * PI * memb;
    Ok(EnergyBreakdown {
        total: bending + membrane + if included { boundary } else { 0.0 },
        bending,
        membrane,
        boundary,
        boundary_included: included,
    })
}

/// Hyperbolic Willmore functional `∫ κ_h² √(1+u'²) / u`.
pub fn willmore_hyperbolic(v: &dyn Curve, rule: &QuadratureRule) -> Result<f64> {
    let (a, b) = v.interval();
    let guard = PositivityGuard::new();
    let value = rule.integrate_with_breaks(
        |x| {
            let j = v.eval(x);
            if !guard.check(x, j.u) {
                return 0.0;
            }
            let kh = hyperbolic_curvature(&j);
            kh * kh * (1.0 + j.du * j.du).sqrt() / j.u
        },
        a,
        b,
        &v.seams(),
    );
    guard.finish()?;
    Ok(value)
}

fn check_test_function(phi: &dyn Curve, a: f64, b: f64) -> Result<()> {
    for x in [a, b] {
        let j = phi.eval(x);
        if j.u.abs() > TEST_FUNCTION_TOL || j.du.abs() > TEST_FUNCTION_TOL {
            return Err(Error::BoundaryCondition {
                x,
                value: j.u,
                slope: j.du,
            });
        }
    }
    Ok(())
}

/// First variation of the elastic energy at `u` in direction `phi`:
/// `2∫ κ/(1+u'²) φ'' - 5∫ κ² u'/√(1+u'²) φ'`.
pub fn first_variation_1d(u: &dyn Curve, phi: &dyn Curve, rule: &QuadratureRule) -> Result<f64> {
    let (a, b) = u.interval();
    check_test_function(phi, a, b)?;
    Ok(rule.integrate_with_breaks(
        |x| {
            let j = u.eval(x);
            let p = phi.eval(x);
            let s2 = 1.0 + j.du * j.du;
            let k = j.d2u / (s2 * s2.sqrt());
            2.0 * k / s2 * p.d2u - 5.0 * k * k * j.du / s2.sqrt() * p.du
        },
        a,
        b,
        &breaks(&[u, phi]),
    ))
}

/// First variation of the hyperbolic Willmore functional at `u` in direction `phi`.
pub fn first_variation_hyperbolic(
    u: &dyn Curve,
    phi: &dyn Curve,
    rule: &QuadratureRule,
) -> Result<f64> {
    let (a, b) = u.interval();
    check_test_function(phi, a, b)?;
    let guard = PositivityGuard::new();
    let value = rule.integrate_with_breaks(
        |x| {
            let j = u.eval(x);
            if !guard.check(x, j.u) {
                return 0.0;
            }
            let p = phi.eval(x);
            let s2 = 1.0 + j.du * j.du;
            let s = s2.sqrt();
            let kh = hyperbolic_curvature(&j);
            let u2 = j.u * j.u;
            2.0 * kh / s2 * p.d2u + kh * kh * s / u2 * p.u - 5.0 * kh * kh * j.du / (j.u * s) * p.du
                - 2.0 * kh / u2 * p.u
                + 4.0 * kh * j.du / (j.u * s2) * p.du
        },
        a,
        b,
        &breaks(&[u, phi]),
    );
    guard.finish()?;
    Ok(value)
}

/// The auxiliary function `V(x) = u''(x) / (1+u'(x)²)^(5/4)` as a curve.
///
/// Derivatives of `V` are central differences, one-sided at the ends.
pub struct AuxiliaryV<'a> {
    base: &'a dyn Curve,
    step: f64,
}

pub fn auxiliary_v(u: &dyn Curve) -> AuxiliaryV<'_> {
    let (a, b) = u.interval();
    AuxiliaryV {
        base: u,
        step: 1e-6 * (b - a),
    }
}

impl AuxiliaryV<'_> {
    pub fn at(&self, x: f64) -> f64 {
        v_of(&self.base.eval(x))
    }
}

/// `V` from a jet.
#[inline]
pub fn v_of(j: &Jet) -> f64 {
    j.d2u / (1.0 + j.du * j.du).powf(1.25)
}

impl Curve for AuxiliaryV<'_> {
    fn interval(&self) -> (f64, f64) {
        self.base.interval()
    }

    fn eval(&self, x: f64) -> Jet {
        let (a, b) = self.interval();
        let h = self.step;
        let c = (x - h).max(a).min(b - 2.0 * h) + h;
        let (vm, v0, vp) = (self.at(c - h), self.at(c), self.at(c + h));
        Jet::new(self.at(x), (vp - vm) / (2.0 * h), (vp - 2.0 * v0 + vm) / (h * h))
    }

    fn seams(&self) -> Vec<f64> {
        self.base.seams()
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::C0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::FnCurve;
    use crate::elastica::{hat_obstacle, symmetric_solution};

    fn rule() -> QuadratureRule {
        QuadratureRule::default()
    }

    #[test]
    fn flat_profile_has_no_energy() {
        let z = FnCurve::constant(0.0, 1.0, 0.0);
        assert_eq!(willmore_1d(&z, &rule()), 0.0);
    }

    #[test]
    fn elastica_energy_is_c_squared() {
        let s = symmetric_solution(1.5).unwrap();
        assert!((willmore_1d(&s, &rule()) - 2.25).abs() < 1e-6);
        let h = hat_obstacle(1.0).unwrap();
        assert!((willmore_1d(&h, &rule()) - 4.0).abs() < 1e-5);
    }

    #[test]
    fn cylinder() {
        let alpha = 0.7;
        let v = FnCurve::constant(-1.0, 1.0, alpha);
        let e = willmore_revolution(&v, &rule()).unwrap();
        assert!((e.total - PI / alpha).abs() < 1e-12);
        assert!(!e.boundary_included);
        assert!((willmore_hyperbolic(&v, &rule()).unwrap() - 2.0 / alpha).abs() < 1e-12);
    }

    #[test]
    fn breakdown_closes() {
        let v = FnCurve::new(-1.0, 1.0, |x| Jet::new(2.0 + 0.3 * x, 0.3, 0.0));
        let e = willmore_revolution(&v, &rule()).unwrap();
        assert!(e.boundary_included);
        assert!((e.total - (e.bending + e.membrane + e.boundary)).abs() < 1e-12);
    }

    #[test]
    fn positivity_violation() {
        let v = FnCurve::new(-1.0, 1.0, |x| Jet::new(x * x - 0.1, 2.0 * x, 2.0));
        assert!(matches!(willmore_revolution(&v, &rule()), Err(Error::Positivity { .. })));
        assert!(matches!(willmore_hyperbolic(&v, &rule()), Err(Error::Positivity { .. })));
    }

    #[test]
    fn geodesic_semicircle_has_zero_hyperbolic_curvature() {
        let r: f64 = 2.0;
        let v = FnCurve::new(-0.5, 0.5, move |x| {
            let w = (r * r - x * x).sqrt();
            Jet::new(w, -x / w, -r * r / (w * w * w))
        });
        for i in 0..=10 {
            let x = -0.5 + i as f64 / 10.0;
            assert!(hyperbolic_curvature(&v.eval(x)).abs() < 1e-14);
        }
        assert!(willmore_hyperbolic(&v, &rule()).unwrap().abs() < 1e-20);
    }

    #[test]
    fn test_function_boundary_checked() {
        let u = FnCurve::constant(0.0, 1.0, 0.0);
        let bad = FnCurve::new(0.0, 1.0, |x| Jet::new(x, 1.0, 0.0));
        assert!(matches!(
            first_variation_1d(&u, &bad, &rule()),
            Err(Error::BoundaryCondition { .. })
        ));
    }

    #[test]
    fn zero_direction() {
        let u = FnCurve::constant(-1.0, 1.0, 1.3);
        let zero = FnCurve::constant(-1.0, 1.0, 0.0);
        assert_eq!(first_variation_hyperbolic(&u, &zero, &rule()).unwrap(), 0.0);
    }

    #[test]
    fn auxiliary_identity() {
        let s = symmetric_solution(1.2).unwrap();
        let v = auxiliary_v(&s);
        for i in 0..100 {
            let x = (i as f64 + 0.5) / 100.0;
            let j = s.eval(x);
            let lhs = v.eval(x).u * (1.0 + j.du * j.du).powf(1.25);
            assert!((lhs - j.d2u).abs() < 1e-10 * j.d2u.abs().max(1.0));
        }
    }
}
