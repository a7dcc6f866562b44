//! Parameter studies over the thickness or the mesh resolution.

use std::str::FromStr;

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::pipeline::{build, postprocess, solve, Overrides};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    Eps,
    Mesh,
}

impl FromStr for SweepParam {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eps" => Ok(SweepParam::Eps),
            "mesh" => Ok(SweepParam::Mesh),
            other => bail!("unknown sweep parameter '{other}' (expected eps or mesh)"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub energy: Option<f64>,
    pub active: Option<usize>,
    pub residual: Option<f64>,
    pub converged: Option<bool>,
    pub iterations: Option<usize>,
    /// Largest entry of the thickness-scaled leading stiffness.
    pub leading_stiffness: Option<f64>,
    pub penalty_share: Option<f64>,
    pub error: String,
}

fn apply(base: &RunConfig, param: SweepParam, value: f64) -> Result<RunConfig> {
    let mut cfg = base.clone();
    match param {
        SweepParam::Eps => cfg.shell.eps = value,
        SweepParam::Mesh => {
            if !(value >= 1.0 && value.fract() == 0.0) {
                bail!("mesh sweep values must be positive integers, got {value}");
            }
            cfg.mesh.nx = value as usize;
            cfg.mesh.ny = value as usize;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// One run per value; failures are recorded in the row instead of aborting.
pub fn sweep(base: &RunConfig, param: SweepParam, values: &[f64], overrides: &Overrides) -> Result<Vec<SweepRow>> {
    if values.len() < 2 {
        bail!("a sweep needs at least two values, got {}", values.len());
    }
    let rows = values
        .iter()
        .map(|&value| {
            let outcome = apply(base, param, value).and_then(|cfg| {
                let problem = build(&cfg)?;
                let report = solve(&problem, overrides)?;
                let leading = problem.assembled.leading_stiffness();
                Ok((leading, postprocess(&problem, report)?))
            });
            match outcome {
                Ok((leading, bundle)) => {
                    let s = bundle.summary;
                    SweepRow {
                        value,
                        energy: Some(s.energy),
                        active: Some(s.active),
                        residual: Some(s.residual),
                        converged: Some(s.converged),
                        iterations: Some(s.iterations),
                        leading_stiffness: Some(leading),
                        penalty_share: s.penalty_share,
                        error: String::new(),
                    }
                }
                Err(e) => SweepRow { value, error: format!("{e:#}"), ..Default::default() },
            }
        })
        .collect();
    Ok(rows)
}
