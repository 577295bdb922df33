use std::f64::consts::PI;

use proptest::prelude::*;
use willmore_core::bounds::{g_alpha, max_abs_slope, max_g_alpha, revolution_bounds, slope_bound_1d, slope_threshold_check};
use willmore_core::elastica::{hat_obstacle, symmetric_solution};
use willmore_core::energy::{
    boundary_bracket, first_variation_1d, first_variation_hyperbolic, willmore_1d, willmore_hyperbolic,
    willmore_revolution,
};
use willmore_core::minimize::{minimize_1d, MinimizeConfig};
use willmore_core::obstacles::{catenoid_circle_profiles, ObstacleSpec};
use willmore_core::specialfn::{c0, find_root, g_inverse, g_profile, QuadratureRule, RootBracket};
use willmore_core::{Curve, FnCurve, Jet};

fn rule() -> QuadratureRule {
    QuadratureRule::gauss(256, 5).unwrap()
}

/// `base + Σ aₖ sin(ωₖ x + pₖ)`, kept at least 0.5 above zero.
fn trig_profile(a: f64, b: f64, terms: Vec<(f64, f64, f64)>) -> FnCurve {
    let base = 0.5 + terms.iter().map(|t| t.0.abs()).sum::<f64>();
    FnCurve::new(a, b, move |x| {
        terms.iter().fold(Jet::new(base, 0.0, 0.0), |j, &(amp, w, p)| {
            let (s, c) = (w * x + p).sin_cos();
            Jet::new(j.u + amp * s, j.du + amp * w * c, j.d2u - amp * w * w * s)
        })
    })
}

fn terms() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((-0.5f64..0.5, 0.5f64..4.0, 0.0f64..6.3), 1..4)
}

/// `(x-a)²(b-x)²(p + q x)`: vanishes with its derivative at both ends.
fn clamped_bump(a: f64, b: f64, p: f64, q: f64) -> FnCurve {
    FnCurve::new(a, b, move |x| {
        let (l, r) = (x - a, b - x);
        let w = l * l * r * r;
        let dw = 2.0 * l * r * (r - l);
        let d2w = 2.0 * (r * r - 4.0 * l * r + l * l);
        let (m, dm) = (p + q * x, q);
        Jet::new(w * m, dw * m + w * dm, d2w * m + 2.0 * dw * dm)
    })
}

fn shifted(u: &FnCurve, phi: &FnCurve, eps: f64) -> FnCurve {
    let (u, phi) = (u.clone(), phi.clone());
    let (a, b) = u.interval();
    FnCurve::new(a, b, move |x| {
        let (j, k) = (u.eval(x), phi.eval(x));
        Jet::new(j.u + eps * k.u, j.du + eps * k.du, j.d2u + eps * k.d2u)
    })
}

/// Symmetric clamped profile `s²(p + q s)` with `s = x(1-x)`.
fn symmetric_spline(p: f64, q: f64) -> FnCurve {
    FnCurve::new(0.0, 1.0, move |x| {
        let s = x * (1.0 - x);
        let (f, df, d2f) = (p * s * s + q * s * s * s, 2.0 * p * s + 3.0 * q * s * s, 2.0 * p + 6.0 * q * s);
        let ds = 1.0 - 2.0 * x;
        Jet::new(f, df * ds, d2f * ds * ds - 2.0 * df)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn g_is_odd(t in -50.0f64..50.0) {
        prop_assert!((g_profile(-t) + g_profile(t)).abs() <= 1e-12);
    }

    #[test]
    fn g_is_increasing_and_bounded(t1 in -60.0f64..60.0, dt in 1e-6f64..10.0) {
        let t2 = t1 + dt;
        prop_assert!(g_profile(t1) < g_profile(t2));
        prop_assert!(g_profile(t2).abs() < 0.5 * c0());
    }

    #[test]
    fn g_inverse_round_trip(f in -1.0f64..1.0) {
        let y = f * (0.5 * c0() - 1e-6);
        let t = g_inverse(y).unwrap();
        prop_assert!((g_profile(t) - y).abs() <= 1e-10);
    }

    #[test]
    fn find_root_is_bit_deterministic(k in 0.5f64..3.0, shift in -0.9f64..0.9) {
        let f = |x: f64| (k * x).tanh() - shift;
        let bracket = RootBracket::new(-10.0, 10.0).unwrap();
        let a = find_root(f, &bracket).unwrap();
        let b = find_root(f, &bracket).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn slope_bound_increases_with_energy(e1 in 0.0f64..22.9, de in 1e-6f64..1.0) {
        let e2 = (e1 + de).min(4.0 * c0() * c0() - 1e-9);
        prop_assume!(e2 > e1);
        prop_assert!(slope_bound_1d(e1).unwrap() < slope_bound_1d(e2).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn energies_are_nonnegative(t in terms()) {
        let v = trig_profile(-1.0, 1.0, t);
        prop_assert!(willmore_1d(&v, &rule()) >= 0.0);
        prop_assert!(willmore_revolution(&v, &rule()).unwrap().total > 0.0);
    }

    #[test]
    fn revolution_identity(t in terms(), a in -1.0f64..-0.1, b in 0.1f64..1.0) {
        let v = trig_profile(a, b, t);
        let w = willmore_revolution(&v, &rule()).unwrap();
        let lhs = w.bending + w.membrane + w.boundary;
        let wh = willmore_hyperbolic(&v, &rule()).unwrap();
        let rhs = 0.5 * PI * wh - 2.0 * PI * boundary_bracket(&v);
        prop_assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + lhs.abs()), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn first_variation_matches_differences(t in terms(), p in -2.0f64..2.0, q in -2.0f64..2.0) {
        prop_assume!(p.abs() + q.abs() > 0.1);
        let u = trig_profile(0.0, 1.0, t);
        let phi = clamped_bump(0.0, 1.0, p, q);
        let eps = 1e-5;
        let r = rule();
        let fd = (willmore_1d(&shifted(&u, &phi, eps), &r) - willmore_1d(&shifted(&u, &phi, -eps), &r)) / (2.0 * eps);
        let exact = first_variation_1d(&u, &phi, &r).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-4 * exact.abs().max(1e-2), "{} vs {}", fd, exact);
        let fd = (willmore_hyperbolic(&shifted(&u, &phi, eps), &r).unwrap()
            - willmore_hyperbolic(&shifted(&u, &phi, -eps), &r).unwrap()) / (2.0 * eps);
        let exact = first_variation_hyperbolic(&u, &phi, &r).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-4 * exact.abs().max(1e-2), "{} vs {}", fd, exact);
    }

    #[test]
    fn elastica_scaling_law(c in 0.2f64..2.3, rho in 0.5f64..4.0) {
        let u = symmetric_solution(c).unwrap();
        let base = u.clone();
        let scaled = FnCurve::new(0.0, rho, move |x| {
            let j = base.eval(x / rho);
            Jet::new(rho * j.u, j.du, j.d2u / rho)
        });
        let w = willmore_1d(&u, &rule());
        let ws = willmore_1d(&scaled, &rule());
        prop_assert!((ws - w / rho).abs() <= 1e-8 * w / rho);
    }

    #[test]
    fn elastica_satisfies_equation(ci in 0usize..3, x in 0.05f64..0.95) {
        let c = [0.3, 1.0, 2.0][ci];
        let u = symmetric_solution(c).unwrap();
        let h = 2.5e-4;
        let s = |x: f64| (1.0 + u.eval(x).du.powi(2)).sqrt();
        let dk = |x: f64| (u.curvature(x + h) - u.curvature(x - h)) / (2.0 * h);
        let flux = |x: f64| dk(x) / s(x);
        let k = u.curvature(x);
        let residual = (flux(x + h) - flux(x - h)) / (2.0 * h) / s(x) + 0.5 * k * k * k;
        prop_assert!(residual.abs() < 1e-4, "{}", residual);
    }

    #[test]
    fn symmetric_slope_bound_on_library(p in -30.0f64..30.0, q in -60.0f64..60.0, c in 0.1f64..2.39) {
        let r = rule();
        let v = symmetric_spline(p, q);
        let w = willmore_1d(&v, &r);
        if w < 4.0 * c0() * c0() {
            prop_assert!(max_abs_slope(&v, &r) <= slope_bound_1d(w).unwrap() + 1e-6);
        }
        let hat = hat_obstacle(c).unwrap();
        prop_assert!(max_abs_slope(&hat, &r) <= slope_bound_1d(hat.energy()).unwrap() + 1e-6);
    }

    #[test]
    fn steep_profiles_respect_slope_threshold(alpha in 3.0f64..20.0, f in 0.05f64..0.95, amp in 0.5f64..6.0) {
        let s = f * alpha.min(5.0);
        // symmetric, clamped at ±1 with u(±1) = alpha, steepest near |x| = 1/√5
        let u = FnCurve::new(-1.0, 1.0, move |x| {
            let w = 1.0 - x * x;
            Jet::new(alpha + amp * w * w, -4.0 * amp * x * w, amp * (12.0 * x * x - 4.0))
        });
        let check = slope_threshold_check(&u, alpha, s, &rule()).unwrap();
        prop_assert!(check.consistent);
        if check.max_slope >= s {
            prop_assert!(check.energy > PI * g_alpha(alpha, s).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn revolution_bounds_on_catenoid_library(alpha in 0.84f64..6.0) {
        let r = rule();
        for v in catenoid_circle_profiles(alpha).unwrap() {
            let w = willmore_revolution(&v, &r).unwrap().total;
            prop_assert!(w < 4.0 * PI);
            prop_assert!(v.min_value() > 0.0);
            let b = revolution_bounds(w).unwrap();
            prop_assert!(max_abs_slope(&v, &r) <= b.k + 1e-6);
            prop_assert!(v.min_value() >= b.m - 1e-6);
        }
    }

    #[test]
    fn g_alpha_maximum_grows(alpha in 2.5f64..80.0, d in 0.5f64..20.0) {
        prop_assert!(max_g_alpha(alpha).unwrap().max_value < max_g_alpha(alpha + d).unwrap().max_value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn hat_minimisers_satisfy_invariants(c in 1.0f64..2.0, eps in 1e-3f64..5e-2) {
        let spec = ObstacleSpec::hat(c, eps).unwrap();
        let cfg = MinimizeConfig { vi_trials: 0, ..MinimizeConfig::default().with_elements(32) };
        let r = minimize_1d(&spec, true, &cfg).unwrap();
        prop_assert!(r.max_violation <= cfg.constraint_tolerance);
        prop_assert!(r.energy <= 4.0 * c * c + 1e-3);
        prop_assert!(r.stage_energies_nondecreasing);
        let p = &r.profile;
        prop_assert_eq!((p.values[0], p.derivatives[0], p.values[p.n], p.derivatives[p.n]), (0.0, 0.0, 0.0, 0.0));
        for k in 0..=p.n {
            prop_assert_eq!(p.values[k], p.values[p.n - k]);
            prop_assert_eq!(p.derivatives[k], -p.derivatives[p.n - k]);
        }
        let bound = r.diagnostics.slope_bound.unwrap();
        prop_assert_eq!(bound.holds, Some(true));
    }
}
