//! Closed-form symmetric solutions of the elastica equation with zero
//! boundary values, their odd extension and the rescaled hat profiles used as
//! obstacle templates.
//!
//! For `|c| < c0` the symmetric solution on `[0, 1]` has slope
//! `u'(x) = G⁻¹(c/2 - c x)` and curvature `κ = -c (1+u'²)^(-1/4)`, so its
//! elastic energy is exactly `c²`.

use crate::curve::{Curve, Jet, Smoothness};
use crate::error::{Error, Result};
use crate::specialfn::{c0, g_inverse};

/// Below this |c| the closed form cancels to O(c) and the Taylor limit is used.
const SMALL_C: f64 = 1e-6;

fn check_parameter(c: f64) -> Result<()> {
    if c.is_finite() && c.abs() < c0() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "elastica parameter c",
            value: c,
            domain: "|c| < c0",
        })
    }
}

/// Symmetric elastica `u_c` on `[0, 1]` with `u(0) = u(1) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticaSolution {
    c: f64,
    /// ln(1 + G⁻¹(c/2)²), the boundary-slope term of the closed form.
    log_edge: f64,
}

pub fn symmetric_solution(c: f64) -> Result<ElasticaSolution> {
    ElasticaSolution::new(c)
}

impl ElasticaSolution {
    pub fn new(c: f64) -> Result<Self> {
        check_parameter(c)?;
        let t0 = g_inverse(0.5 * c)?;
        Ok(Self {
            c,
            log_edge: (t0 * t0).ln_1p(),
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Exact elastic energy `c²`.
    pub fn energy(&self) -> f64 {
        self.c * self.c
    }

    fn slope(&self, x: f64) -> f64 {
        g_inverse(0.5 * self.c - self.c * x).unwrap_or(f64::NAN)
    }

    /// Curvature `κ(x) = -c / (1 + u'(x)²)^(1/4)`.
    pub fn curvature(&self, x: f64) -> f64 {
        if self.c == 0.0 {
            return 0.0;
        }
        let t = self.slope(x);
        -self.c * (1.0 + t * t).powf(-0.25)
    }

    /// Height at the midpoint, `(2/c)(1 - (1+G⁻¹(c/2)²)^(-1/4))`.
    pub fn peak(&self) -> f64 {
        self.eval(0.5).u
    }
}

impl Curve for ElasticaSolution {
    fn interval(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn eval(&self, x: f64) -> Jet {
        let c = self.c;
        if c == 0.0 {
            return Jet::ZERO;
        }
        let t = self.slope(x);
        let log_here = (t * t).ln_1p();
        let d2u = -c * (0.25 * 5.0 * log_here).exp();
        let u = if c.abs() < SMALL_C {
            0.5 * c * x * (1.0 - x)
        } else {
            // (2/c) [ (1+t²)^(-1/4) - (1+t0²)^(-1/4) ] without cancellation
            let k0 = (-0.25 * self.log_edge).exp();
            2.0 / c * k0 * (-0.25 * (log_here - self.log_edge)).exp_m1()
        };
        Jet::new(u, t, d2u)
    }
}

/// Odd extension `U_c` of `u_c` to `[-1/2, 3/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OddExtension {
    base: ElasticaSolution,
}

pub fn odd_extension(c: f64) -> Result<OddExtension> {
    Ok(OddExtension {
        base: ElasticaSolution::new(c)?,
    })
}

impl OddExtension {
    pub fn base(&self) -> &ElasticaSolution {
        &self.base
    }

    /// Exact energy over `[-1/2, 3/2]`, `2c²`.
    pub fn energy(&self) -> f64 {
        2.0 * self.base.energy()
    }
}

impl Curve for OddExtension {
    fn interval(&self) -> (f64, f64) {
        (-0.5, 1.5)
    }

    fn eval(&self, x: f64) -> Jet {
        if x < 0.0 {
            let j = self.base.eval(-x);
            Jet::new(-j.u, j.du, -j.d2u)
        } else if x > 1.0 {
            let j = self.base.eval(2.0 - x);
            Jet::new(-j.u, j.du, -j.d2u)
        } else {
            self.base.eval(x)
        }
    }

    fn seams(&self) -> Vec<f64> {
        vec![0.0, 1.0]
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::C1PiecewiseC2
    }
}

/// Hat profile `û_c(x) = ½ U_c(2x - ½) - ½ U_c(-½)` on `[0, 1]`, clamped at
/// both ends, with energy `4c²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HatProfile {
    ext: OddExtension,
    offset: f64,
}

pub fn hat_obstacle(c: f64) -> Result<HatProfile> {
    let ext = odd_extension(c)?;
    Ok(HatProfile {
        offset: 0.5 * ext.eval(-0.5).u,
        ext,
    })
}

impl HatProfile {
    pub fn c(&self) -> f64 {
        self.ext.base.c
    }

    pub fn energy(&self) -> f64 {
        4.0 * self.ext.base.energy()
    }

    pub fn extension(&self) -> &OddExtension {
        &self.ext
    }
}

impl Curve for HatProfile {
    fn interval(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn eval(&self, x: f64) -> Jet {
        let j = self.ext.eval(2.0 * x - 0.5);
        Jet::new(0.5 * j.u - self.offset, j.du, 2.0 * j.d2u)
    }

    fn seams(&self) -> Vec<f64> {
        vec![0.25, 0.75]
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::C1PiecewiseC2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::willmore_1d;
    use crate::specialfn::QuadratureRule;

    #[test]
    fn zero_parameter_is_flat() {
        let s = symmetric_solution(0.0).unwrap();
        for x in [0.0, 0.3, 0.5, 1.0] {
            assert_eq!(s.eval(x), Jet::ZERO);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(symmetric_solution(c0()).is_err());
        assert!(odd_extension(-c0()).is_err());
        assert!(hat_obstacle(3.0).is_err());
        assert!(symmetric_solution(f64::NAN).is_err());
    }

    #[test]
    fn near_extremal_slope_is_finite() {
        let s = symmetric_solution(c0() - 1e-9).unwrap();
        let j = s.eval(0.0);
        assert!(j.du.is_finite() && j.du > 1e4);
    }

    #[test]
    fn boundary_values_and_symmetry() {
        for c in [-2.0, -0.4, 1e-7, 0.7, 2.3] {
            let s = symmetric_solution(c).unwrap();
            assert!(s.eval(0.0).u.abs() < 1e-14);
            assert!(s.eval(1.0).u.abs() < 1e-14);
            for i in 0..=20 {
                let x = i as f64 / 20.0;
                assert!((s.eval(x).u - s.eval(1.0 - x).u).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn small_parameter_branches_agree() {
        // the Taylor branch and the closed form meet at the switch
        let below = symmetric_solution(0.999e-6).unwrap();
        let above = symmetric_solution(1.001e-6).unwrap();
        let (a, b) = (below.eval(0.3).u / 0.999e-6, above.eval(0.3).u / 1.001e-6);
        assert!((a - b).abs() < 1e-6 * a.abs());
    }

    #[test]
    fn hat_is_clamped() {
        for c in [0.5, 1.0, 2.3] {
            let h = hat_obstacle(c).unwrap();
            for x in [0.0, 1.0] {
                let j = h.eval(x);
                assert!(j.u.abs() < 1e-12 && j.du.abs() < 1e-8, "c = {c}, x = {x}: {j:?}");
            }
        }
    }

    #[test]
    fn hat_peak_at_half_critical_parameter() {
        let h = hat_obstacle(0.5 * c0()).unwrap();
        assert!((h.eval(0.5).u - 0.1628208198).abs() < 1e-8);
    }

    #[test]
    fn hat_energy() {
        let rule = QuadratureRule::default();
        for c in [0.5, 1.0, 2.3] {
            let h = hat_obstacle(c).unwrap();
            assert!((willmore_1d(&h, &rule) - 4.0 * c * c).abs() < 1e-5);
        }
    }
}
