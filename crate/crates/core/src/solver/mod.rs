//! Solvers for the bound-constrained quadratic program [`ObstacleQP`].
//!
//! Two iterative methods ([`solve_psor`], [`solve_active_set`]) and an
//! enumeration oracle ([`brute_force_oracle`]) for small instances.

mod active_set;
mod cg;
mod oracle;
mod psor;

pub use active_set::{solve_active_set, ActiveSetOptions};
pub use cg::{pcg, CgOutcome};
pub use oracle::{brute_force_oracle, ORACLE_MAX_CONSTRAINED};
pub use psor::{solve_psor, PsorOptions};

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::qp::ObstacleQP;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverMethod {
    Psor,
    ActiveSet,
    Oracle,
}

impl fmt::Display for SolverMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverMethod::Psor => "psor",
            SolverMethod::ActiveSet => "activeset",
            SolverMethod::Oracle => "oracle",
        })
    }
}

impl FromStr for SolverMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "psor" => Ok(SolverMethod::Psor),
            "activeset" | "active_set" | "active-set" | "pdas" => Ok(SolverMethod::ActiveSet),
            "oracle" | "brute_force" => Ok(SolverMethod::Oracle),
            other => Err(Error::Parameter(format!("unknown solver {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub x: Vec<f64>,
    /// Constrained indices sitting exactly on their bound.
    pub active_set: Vec<usize>,
    pub complementarity_residual: f64,
    pub energy: f64,
    pub iterations: usize,
    pub converged: bool,
    pub method: SolverMethod,
    /// Energy after every sweep, when requested (PSOR only).
    pub energy_history: Vec<f64>,
}

impl SolveReport {
    pub(crate) fn finish(qp: &ObstacleQP, x: Vec<f64>, iterations: usize, converged: bool, method: SolverMethod) -> Self {
        let active_set = (0..qp.dim()).filter(|&i| qp.is_constrained(i) && x[i] <= qp.lower[i]).collect();
        SolveReport {
            complementarity_residual: complementarity_residual(qp, &x),
            energy: qp.energy(&x),
            x,
            active_set,
            iterations,
            converged,
            method,
            energy_history: Vec::new(),
        }
    }

    /// Discrete contact multipliers `(Ax − b)_i` on the active set.
    pub fn multipliers(&self, qp: &ObstacleQP) -> Vec<(usize, f64)> {
        let g = qp.gradient(&self.x);
        self.active_set.iter().map(|&i| (i, g[i])).collect()
    }
}

/// `max_{i constrained} |min(x_i − l_i, (Ax−b)_i)| + max_{i free} |(Ax−b)_i|`.
pub fn complementarity_residual(qp: &ObstacleQP, x: &[f64]) -> f64 {
    let g = qp.gradient(x);
    let mut bound = 0.0_f64;
    let mut free = 0.0_f64;
    for i in 0..qp.dim() {
        if qp.is_constrained(i) {
            bound = bound.max((x[i] - qp.lower[i]).min(g[i]).abs());
        } else {
            free = free.max(g[i].abs());
        }
    }
    bound + free
}

/// Absolute stopping tolerance `tol · max(1, ‖b‖∞)`.
pub(crate) fn scaled_tolerance(qp: &ObstacleQP, tol: f64) -> f64 {
    tol * qp.b.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
}

pub(crate) fn feasible_start(qp: &ObstacleQP, initial: Option<&[f64]>) -> Result<Vec<f64>> {
    let mut x = match initial {
        Some(x0) if x0.len() != qp.dim() => {
            return Err(Error::Dimension(format!("initial guess has {} entries, expected {}", x0.len(), qp.dim())))
        }
        Some(x0) => x0.to_vec(),
        None => vec![0.0; qp.dim()],
    };
    for (xi, li) in x.iter_mut().zip(&qp.lower) {
        *xi = xi.max(*li);
    }
    Ok(x)
}

/// Solve `Ax = b` ignoring all bounds, by dense Cholesky.
pub fn solve_unconstrained(qp: &ObstacleQP) -> Result<Vec<f64>> {
    let chol = qp
        .a
        .to_dense()
        .cholesky()
        .ok_or_else(|| Error::Parameter("stiffness matrix is not positive definite".into()))?;
    Ok(chol.solve(&DVector::from_column_slice(&qp.b)).as_slice().to_vec())
}

/// Dispatch on method with default options and a common tolerance.
pub fn solve(qp: &ObstacleQP, method: SolverMethod, tol: f64) -> Result<SolveReport> {
    match method {
        SolverMethod::Psor => solve_psor(qp, &PsorOptions { tol, ..Default::default() }),
        SolverMethod::ActiveSet => solve_active_set(qp, &ActiveSetOptions { tol, ..Default::default() }),
        SolverMethod::Oracle => brute_force_oracle(qp),
    }
}
