use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("{what}: value {value} outside the admissible domain ({domain})")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("no sign change on [{lower}, {upper}] (f = {f_lower}, {f_upper})")]
    NoSignChange {
        lower: f64,
        upper: f64,
        f_lower: f64,
        f_upper: f64,
    },
    #[error("root finder hit {iterations} iterations without converging (last x = {last})")]
    MaxIterations { iterations: usize, last: f64 },
    #[error("profile is not positive at x = {x} (value {value})")]
    Positivity { x: f64, value: f64 },
    #[error("test function violates clamped boundary data at x = {x} (value {value}, slope {slope})")]
    BoundaryCondition { x: f64, value: f64, slope: f64 },
    #[error("gluing residual {residual} exceeds tolerance at b = {b}")]
    Gluing { b: f64, residual: f64 },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("g_alpha is not unimodal on [0, {alpha}]: {maxima} local maxima found")]
    Unimodality { alpha: f64, maxima: usize },
    #[error("candidate violates the obstacle at x = {x} by {violation}")]
    SideViolation { x: f64, violation: f64 },
    #[error("obstacle does not satisfy its structural condition: {0}")]
    Obstacle(String),
    #[error("infeasible start: {0}")]
    InfeasibleStart(String),
    #[error("minimization did not converge: {0}")]
    NonConvergence(String),
    #[error("positivity floor {floor} breached (min value {min})")]
    FloorBreach { floor: f64, min: f64 },
    #[error("invalid input: {0}")]
    Validation(String),
}
