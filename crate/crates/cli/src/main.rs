//! `willmore`: constants, tables, minimisations and probes as CSV/JSON.

mod minimize;
mod output;
mod probe;
mod tables;

use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use willmore_core::bounds::{dirichlet_universal_bound, navier_bound};
use willmore_core::elastica::hat_obstacle;
use willmore_core::obstacles::alpha0;
use willmore_core::specialfn::{c0, QuadratureRule};
use willmore_core::{Curve, Error};

use minimize::MinimizeCommand;
use output::{csv_document, emit, fmt_sig, json_document, RunManifest};
use probe::ProbeCommand;
use tables::TableKind;

#[derive(Debug, Parser)]
#[command(name = "willmore", version, about = "Willmore and elastica obstacle problems: constants, tables, minimisers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output file (default standard output); relative paths resolve
    /// against $WILLMORE_OUT_DIR when set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Gauss panels for quadrature-based energies.
    #[arg(long, global = true, default_value_t = 256)]
    quad_panels: usize,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
enum Command {
    /// Print the fundamental constants.
    Constants {
        #[arg(long)]
        json: bool,
    },
    /// Recompute a published table as CSV.
    Tables {
        #[arg(value_enum)]
        which: TableKind,
    },
    /// Run a constrained minimisation; writes a JSON report and a CSV profile.
    Minimize {
        #[command(subcommand)]
        problem: MinimizeCommand,
    },
    /// Parameter sweeps as CSV.
    Probe {
        #[command(subcommand)]
        kind: ProbeCommand,
    },
}

pub struct Globals {
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub quad_panels: usize,
}

impl Globals {
    pub fn rule(&self) -> Result<QuadratureRule, Failure> {
        Ok(QuadratureRule::gauss(self.quad_panels, 5)?)
    }

    /// Subcommand arguments plus the globals that affect numbers.
    pub fn parameters<T: Serialize>(&self, args: &T) -> Value {
        json!({
            "args": serde_json::to_value(args).unwrap_or(Value::Null),
            "seed": self.seed,
            "quad_panels": self.quad_panels,
        })
    }
}

/// Exit status 1: invalid input, 2: infeasible problem, 3: no convergence.
#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Core(Error::InfeasibleStart(_) | Error::SideViolation { .. } | Error::FloorBreach { .. }) => 2,
            Self::Core(Error::NonConvergence(_)) => 3,
            Self::Core(_) | Self::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Core(e) => write!(f, "{e}"),
            Self::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

/// Name and value of every reported constant, in output order.
fn constants() -> Result<Vec<(&'static str, f64)>, Failure> {
    let cc = c0();
    let bound = dirichlet_universal_bound()?;
    let a0 = alpha0();
    let hat = hat_obstacle(0.5 * cc)?;
    Ok(vec![
        ("c0", cc),
        ("c0_half", 0.5 * cc),
        ("two_over_c0", 2.0 / cc),
        ("four_c0_squared", 4.0 * cc * cc),
        ("y0", bound.y0),
        ("dirichlet_bound", bound.bound),
        ("navier_bound", navier_bound()),
        ("b0", a0.b0),
        ("cosh_b0_over_b0", a0.ratio),
        ("alpha0", a0.alpha0),
        ("hat_c0_half_midpoint", hat.value(0.5)),
    ])
}

fn run(cli: Cli) -> Result<(), Failure> {
    let globals = Globals {
        out: cli.out.clone(),
        seed: cli.seed,
        quad_panels: cli.quad_panels,
    };
    match &cli.command {
        Command::Constants { json } => {
            let values = constants()?;
            let manifest = RunManifest::new("constants", globals.parameters(&cli.command), globals.seed);
            let doc = if *json {
                let map: serde_json::Map<String, Value> =
                    values.iter().map(|&(k, v)| (k.to_string(), json!(v))).collect();
                json_document(&manifest, "constants", &map)?
            } else {
                values.iter().map(|(k, v)| format!("{k} = {}\n", fmt_sig(*v, 10))).collect()
            };
            emit(globals.out.as_deref(), &doc)?;
        }
        Command::Tables { which } => {
            let table = tables::build(*which, &globals.rule()?)?;
            let name = format!("tables {}", serde_json::to_value(which).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default());
            let manifest = RunManifest::new(&name, globals.parameters(&cli.command), globals.seed);
            emit(globals.out.as_deref(), &csv_document(&manifest, &table.columns, &table.rows)?)?;
        }
        Command::Minimize { problem } => minimize::run(problem, &globals)?,
        Command::Probe { kind } => probe::run(kind, &globals)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_mapping() {
        let code = |e: Error| Failure::from(e).exit_code();
        assert_eq!(code(Error::Validation("x".into())), 1);
        assert_eq!(code(Error::InfeasibleStart("x".into())), 2);
        assert_eq!(code(Error::SideViolation { x: 0.0, violation: 1.0 }), 2);
        assert_eq!(code(Error::FloorBreach { floor: 1.0, min: 0.5 }), 2);
        assert_eq!(code(Error::NonConvergence("x".into())), 3);
        assert_eq!(Failure::from(io::Error::other("x")).exit_code(), 1);
    }

    #[test]
    fn constants_have_reported_values() {
        let v = constants().ok().unwrap();
        let get = |k: &str| v.iter().find(|(n, _)| *n == k).map(|p| p.1).unwrap();
        assert!((get("c0") - 2.396280469).abs() < 1e-8);
        assert!((get("alpha0") - 0.8335565596).abs() < 1e-8);
        assert!((get("dirichlet_bound") - 1.189046454).abs() < 1e-7);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
