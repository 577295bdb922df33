//! `probe` subcommands: sweeps written as CSV.

use clap::{Args, Subcommand};
use serde::Serialize;
use willmore_core::minimize::{probe_nonexistence, MinimizeConfig, ProbeRegime};
use willmore_core::obstacles::{alpha0, catenoid_circle_profiles};
use willmore_core::Error;

use crate::output::{col, csv_document, emit, flag, num, opt, RunManifest};
use crate::{Failure, Globals};

#[derive(Debug, Clone, Subcommand, Serialize)]
pub enum ProbeCommand {
    /// Cone obstacles across the universal height bound.
    Nonexistence {
        #[command(flatten)]
        range: Range,
        /// Finite elements on [0, 1]; doubled once when no run converges.
        #[arg(long, default_value_t = 256)]
        elements: usize,
    },
    /// Catenoid-circle branches as alpha decreases towards alpha0.
    BranchCoalescence {
        #[command(flatten)]
        range: Range,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Range {
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long)]
    pub step: f64,
}

impl Range {
    /// `from, from + step, ...` up to `to`, inclusive of `to` up to rounding.
    fn values(&self) -> Result<Vec<f64>, Failure> {
        let Self { from, to, step } = *self;
        if !(from.is_finite() && to.is_finite() && step.is_finite()) {
            return Err(Error::Validation("range bounds must be finite".into()).into());
        }
        if step <= 0.0 {
            return Err(Error::Validation(format!("--step must be positive, got {step}")).into());
        }
        if from > to {
            return Err(Error::Validation(format!("empty range: --from {from} > --to {to}")).into());
        }
        let count = ((to - from) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| from + i as f64 * step).collect())
    }
}

fn regime_name(r: ProbeRegime) -> &'static str {
    match r {
        ProbeRegime::Below => "below",
        ProbeRegime::Indeterminate => "indeterminate",
        ProbeRegime::Above => "above",
    }
}

pub fn run(cmd: &ProbeCommand, globals: &Globals) -> Result<(), Failure> {
    let (name, columns, rows) = match cmd {
        ProbeCommand::Nonexistence { range, elements } => {
            let config = MinimizeConfig { seed: globals.seed, ..MinimizeConfig::default().with_elements(*elements) };
            let rows = probe_nonexistence(&range.values()?, &config)?
                .into_iter()
                .map(|r| {
                    vec![
                        num(r.height),
                        regime_name(r.regime).into(),
                        r.elements.to_string(),
                        flag(r.converged),
                        num(r.energy),
                        num(r.max_slope),
                        opt(r.slope_cap),
                        flag(r.slope_cap_active),
                        num(r.max_violation),
                        opt(r.slope_bound),
                        flag(r.energy_at_threshold),
                        flag(r.flagged),
                    ]
                })
                .collect();
            let columns = vec![
                col("height", "1"),
                col("regime", "text"),
                col("elements", "count"),
                col("converged", "bool"),
                col("energy", "1"),
                col("max_slope", "1"),
                col("slope_cap", "1"),
                col("slope_cap_active", "bool"),
                col("max_violation", "1"),
                col("slope_bound", "1"),
                col("energy_at_threshold", "bool"),
                col("flagged", "bool"),
            ];
            ("probe nonexistence", columns, rows)
        }
        ProbeCommand::BranchCoalescence { range } => {
            let a0 = alpha0().alpha0;
            let mut rows = Vec::new();
            for alpha in range.values()? {
                let profiles = catenoid_circle_profiles(alpha)?;
                let bs: Vec<f64> = profiles.iter().filter_map(|p| p.params.b).collect();
                let (low, high) = (bs.first().copied(), bs.last().copied());
                rows.push(vec![
                    num(alpha),
                    num(alpha - a0),
                    bs.len().to_string(),
                    opt(low),
                    opt(high),
                    opt(low.zip(high).map(|(l, h)| h - l)),
                ]);
            }
            let columns = vec![
                col("alpha", "1"),
                col("gap_to_alpha0", "1"),
                col("branches", "count"),
                col("b_low", "1"),
                col("b_high", "1"),
                col("b_gap", "1"),
            ];
            ("probe branch-coalescence", columns, rows)
        }
    };
    let manifest = RunManifest::new(name, globals.parameters(cmd), globals.seed);
    emit(globals.out.as_deref(), &csv_document(&manifest, &columns, &rows)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_includes_end_point() {
        let r = Range { from: 0.5, to: 1.5, step: 0.1 };
        let v = r.values().ok().unwrap();
        assert_eq!(v.len(), 11);
        assert!((v[10] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn bad_ranges_are_rejected() {
        for (from, to, step) in [(1.0, 0.5, 0.1), (0.0, 1.0, 0.0), (0.0, 1.0, -0.1), (0.0, f64::NAN, 0.1)] {
            assert!(Range { from, to, step }.values().is_err());
        }
    }
}
