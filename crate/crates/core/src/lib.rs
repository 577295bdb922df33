//! Numerical toolkit for Willmore obstacle problems with clamped (Dirichlet)
//! boundary data.
//!
//! The crate covers four layers:
//!
//! * [`specialfn`]: the slope function `G`, its inverse, the constant `c0`,
//!   quadrature and bracketing root finders;
//! * [`elastica`] and [`energy`]: closed-form symmetric elastica, their odd
//!   extensions and rescaled hats, and quadrature evaluators for the 1D and
//!   surface-of-revolution Willmore functionals and their first variations;
//! * [`bounds`] and [`obstacles`]: universal height bounds, slope thresholds
//!   and explicit admissible obstacles built from circles, catenoids and
//!   elastica pieces;
//! * [`minimize`]: an H²-conforming Hermite discretisation with a penalty /
//!   multiplier constrained solver and post-hoc checks of the structure of
//!   minimisers.

pub mod bounds;
pub mod curve;
pub mod elastica;
pub mod energy;
mod error;
pub mod minimize;
pub mod obstacles;
pub mod specialfn;

pub use curve::{Curve, FnCurve, Jet, Smoothness};
pub use error::{Error, Result};
