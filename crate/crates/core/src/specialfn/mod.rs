//! The slope function `G(t) = ∫₀ᵗ (1+τ²)^(-5/4) dτ`, its inverse, the
//! constant `c0 = 2 G(∞)`, and the quadrature / root-finding primitives the
//! rest of the crate is built on.

mod quadrature;
mod roots;

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub use quadrature::{gauss_legendre, QuadratureKind, QuadratureRule};
pub use roots::{find_root, scan_roots, scan_roots_geometric, RootBracket};

/// Absolute tolerance used for every evaluation of `G`.
pub const G_TOLERANCE: f64 = 1e-12;

/// Beyond this magnitude `G` is evaluated as `c0/2` minus the tail integral.
const TAIL_SWITCH: f64 = 50.0;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) by the Lanczos approximation (g = 7, 9 terms) with reflection for x < 1/2.
pub fn gamma(x: f64) -> f64 {
    use std::f64::consts::PI;
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// `c0 = ∫ℝ (1+τ²)^(-5/4) dτ = √π Γ(3/4) / Γ(5/4)`.
pub fn c0() -> f64 {
    static C0: OnceLock<f64> = OnceLock::new();
    *C0.get_or_init(|| std::f64::consts::PI.sqrt() * gamma(0.75) / gamma(1.25))
}

#[inline]
pub(crate) fn g_density(t: f64) -> f64 {
    (1.0 + t * t).powf(-1.25)
}

/// `G(t)`; infinite arguments return `±c0/2`.
pub fn g_profile(t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t == 0.0 {
        return 0.0;
    }
    let sign = t.signum();
    let s = t.abs();
    if s.is_infinite() {
        return sign * 0.5 * c0();
    }
    let value = if s <= TAIL_SWITCH {
        quadrature::simpson_scalar(g_density, 0.0, s, G_TOLERANCE)
    } else {
        0.5 * c0() - g_tail(s)
    };
    sign * value
}

/// `∫ₜ^∞ (1+τ²)^(-5/4) dτ` for `t > 0`, via τ = 1/w².
fn g_tail(t: f64) -> f64 {
    let upper = t.sqrt().recip();
    quadrature::simpson_scalar(
        |w| {
            let w2 = w * w;
            2.0 * w2 * (1.0 + w2 * w2).powf(-1.25)
        },
        0.0,
        upper,
        G_TOLERANCE,
    )
}

/// Inverse of `G` on `(-c0/2, c0/2)`: safeguarded Newton with bisection fallback.
pub fn g_inverse(y: f64) -> Result<f64> {
    let half = 0.5 * c0();
    if !(y.abs() < half) {
        return Err(Error::Domain {
            what: "g_inverse",
            value: y,
            domain: "|y| < c0/2",
        });
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let target = y.abs();
    let gap = half - target;
    let mut t = if target < 0.8 {
        target
    } else {
        // G(∞) - G(t) ~ (2/3) t^(-3/2)
        (2.0 / (3.0 * gap)).powf(2.0 / 3.0)
    };
    let mut lo = 0.0;
    let mut hi = t.max(1.0) * 2.0;
    while g_profile(hi) <= target {
        lo = hi;
        hi *= 2.0;
    }
    t = t.clamp(lo, hi);
    for _ in 0..200 {
        let r = g_profile(t) - target;
        if r.abs() <= 1e-15 {
            break;
        }
        if r > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let newton = t - r / g_density(t);
        t = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    Ok(y.signum() * t)
}
