//! `minimize` subcommands: build the obstacle, run, write report and profile.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;
use willmore_core::curve::linspace;
use willmore_core::energy::{v_of, willmore_1d, willmore_revolution};
use willmore_core::minimize::{
    cone_obstacle, free_minimize_revolution, minimize_1d, minimize_revolution, InnerSolver, MinimizeConfig,
    MinimizeReport, Problem,
};
use willmore_core::obstacles::{
    catenoid_circle_profiles, pushed_down_profile, small_alpha_profile, ObstacleSpec, DEFAULT_DELTA, DEFAULT_EPSILON,
};
use willmore_core::{Curve, Error, FnCurve};

use crate::output::{col, csv_document, emit, flag, json_document, num, Column, RunManifest};
use crate::{Failure, Globals};

/// Contact tolerance for the profile's contact column.
const CONTACT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Subcommand, Serialize)]
pub enum MinimizeCommand {
    /// Elastic energy above an obstacle on [0, 1].
    #[command(name = "1d")]
    OneD(OneDArgs),
    /// Revolution energy below an obstacle with boundary height alpha.
    Revolution(RevolutionArgs),
    /// Revolution energy without obstacle.
    Free(FreeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OneDObstacle {
    /// psi = hat(c) - eps
    Hat,
    /// Symmetric cone peaking at --height
    Cone,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OneDArgs {
    #[arg(long, value_enum)]
    pub obstacle: OneDObstacle,
    /// Hat parameter, |c| < c0.
    #[arg(long)]
    pub c: Option<f64>,
    /// Lowering of the hat obstacle.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub eps: f64,
    /// Cone peak height.
    #[arg(long)]
    pub height: Option<f64>,
    /// Drop the symmetry constraint.
    #[arg(long)]
    pub nonsymmetric: bool,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RevolutionObstacle {
    /// Enlarged catenoid-circle profile v_alpha
    CatenoidCircle,
    /// Enlarged small-alpha profile at --x-b
    SmallAlpha,
    /// Enlarged pushed-down profile u_{alpha,c}
    PushedDown,
    /// psi = --height everywhere
    Constant,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RevolutionArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_enum)]
    pub obstacle: RevolutionObstacle,
    /// Catenoid-circle branch, in increasing b.
    #[arg(long, default_value_t = 0)]
    pub branch: usize,
    #[arg(long)]
    pub x_b: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub height: Option<f64>,
    /// Enlargement next to the boundary.
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FreeArgs {
    #[arg(long)]
    pub alpha: f64,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Newton,
    Lbfgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunArgs {
    /// Finite elements on the full interval (even).
    #[arg(long, default_value_t = 256)]
    pub elements: usize,
    #[arg(long, value_enum, default_value_t = SolverKind::Newton)]
    pub solver: SolverKind,
    /// Random directions for the variational-inequality check.
    #[arg(long, default_value_t = 100)]
    pub vi_trials: usize,
    #[arg(long, default_value_t = 1)]
    pub starts: usize,
    /// Samples in the profile CSV.
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
    /// Profile CSV path; defaults to the report path with a .csv extension.
    #[arg(long)]
    pub profile_out: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self, seed: u64) -> MinimizeConfig {
        MinimizeConfig {
            elements: self.elements,
            solver: match self.solver {
                SolverKind::Newton => InnerSolver::Newton,
                SolverKind::Lbfgs => InnerSolver::Lbfgs { memory: 10 },
            },
            vi_trials: self.vi_trials,
            starts: self.starts,
            seed,
            ..MinimizeConfig::default()
        }
    }
}

fn need(value: Option<f64>, name: &str) -> Result<f64, Failure> {
    value.ok_or_else(|| Failure::from(Error::Validation(format!("--{name} is required for this obstacle"))))
}

#[derive(Serialize)]
struct Body<'a> {
    /// Energy of the discrete profile under the `--quad-panels` rule.
    energy_quadrature: f64,
    report: &'a MinimizeReport,
}

pub fn run(cmd: &MinimizeCommand, globals: &Globals) -> Result<(), Failure> {
    let (name, run) = match cmd {
        MinimizeCommand::OneD(a) => ("minimize 1d", &a.run),
        MinimizeCommand::Revolution(a) => ("minimize revolution", &a.run),
        MinimizeCommand::Free(a) => ("minimize free", &a.run),
    };
    if run.points < 2 {
        return Err(Error::Validation("--points must be at least 2".into()).into());
    }
    let config = run.config(globals.seed);
    let (report, obstacle) = match cmd {
        MinimizeCommand::OneD(a) => {
            let spec = match a.obstacle {
                OneDObstacle::Hat => ObstacleSpec::hat(need(a.c, "c")?, a.eps)?,
                OneDObstacle::Cone => cone_obstacle(need(a.height, "height")?)?,
            };
            (minimize_1d(&spec, !a.nonsymmetric, &config)?, Some(spec))
        }
        MinimizeCommand::Revolution(a) => {
            let spec = revolution_obstacle(a)?;
            (minimize_revolution(a.alpha, &spec, &config)?, Some(spec))
        }
        MinimizeCommand::Free(a) => (free_minimize_revolution(a.alpha, &config)?, None),
    };
    let rule = globals.rule()?;
    let energy_quadrature = match report.problem {
        Problem::OneD { .. } => willmore_1d(&report.profile, &rule),
        _ => willmore_revolution(&report.profile, &rule)?.total,
    };
    let manifest = RunManifest::new(name, globals.parameters(cmd), globals.seed);
    let body = Body { energy_quadrature, report: &report };
    emit(globals.out.as_deref(), &json_document(&manifest, "result", &body)?)?;
    let profile_path = run.profile_out.clone().or_else(|| globals.out.as_ref().map(|p| p.with_extension("csv")));
    if let Some(path) = profile_path {
        let (columns, rows) = profile_table(&report, obstacle.as_ref(), run.points);
        emit(Some(Path::new(&path)), &csv_document(&manifest, &columns, &rows)?)?;
    }
    Ok(())
}

fn revolution_obstacle(a: &RevolutionArgs) -> Result<ObstacleSpec, Failure> {
    let profile = match a.obstacle {
        RevolutionObstacle::CatenoidCircle => {
            let mut ps = catenoid_circle_profiles(a.alpha)?;
            if a.branch >= ps.len() {
                return Err(Error::Validation(format!(
                    "alpha = {} has {} catenoid-circle branch(es), --branch {} requested",
                    a.alpha,
                    ps.len(),
                    a.branch
                ))
                .into());
            }
            ps.swap_remove(a.branch)
        }
        RevolutionObstacle::SmallAlpha => small_alpha_profile(a.alpha, need(a.x_b, "x-b")?)?,
        RevolutionObstacle::PushedDown => pushed_down_profile(a.alpha, need(a.c, "c")?)?,
        RevolutionObstacle::Constant => {
            let h = need(a.height, "height")?;
            return Ok(ObstacleSpec::below(Arc::new(FnCurve::constant(-1.0, 1.0, h)), a.alpha)?);
        }
    };
    Ok(ObstacleSpec::enlarged(profile, a.delta)?)
}

fn profile_table(report: &MinimizeReport, obstacle: Option<&ObstacleSpec>, points: usize) -> (Vec<Column>, Vec<Vec<String>>) {
    let u = &report.profile;
    let (a, b) = u.interval;
    let alpha = match report.problem {
        Problem::Revolution { alpha } | Problem::FreeRevolution { alpha } => Some(alpha),
        Problem::OneD { .. } => None,
    };
    let mut columns = vec![
        col("x", "1"),
        col("u", "1"),
        col("du", "1"),
        col("d2u", "1"),
        col("V", "1"),
        col("psi", "1"),
        col("contact", "bool"),
    ];
    if alpha.is_some() {
        columns.extend([col("alpha", "1"), col("sphere", "1"), col("slope_lower", "1"), col("radial", "1")]);
    }
    let rows = linspace(a, b, points)
        .into_iter()
        .map(|x| {
            let j = u.eval(x);
            let psi = obstacle.map(|o| o.curve.value(x));
            let contact = psi.is_some_and(|p| (j.u - p).abs() <= CONTACT_TOL);
            let mut row = vec![
                num(x),
                num(j.u),
                num(j.du),
                num(j.d2u),
                num(v_of(&j)),
                psi.map(num).unwrap_or_default(),
                flag(contact),
            ];
            if let Some(al) = alpha {
                // envelope of the free minimiser on (0, 1): α < u < √(1+α²-x²), -x/α < u' < 0, x + u u' > 0
                row.extend([num(al), num((1.0 + al * al - x * x).sqrt()), num(-x / al), num(x + j.u * j.du)]);
            }
            row
        })
        .collect();
    (columns, rows)
}
