use super::{complementarity_residual, feasible_start, scaled_tolerance, SolveReport, SolverMethod};
use crate::error::{Error, Result};
use crate::qp::ObstacleQP;

#[derive(Clone, Debug, PartialEq)]
pub struct PsorOptions {
    /// Over-relaxation factor in `(0, 2)`.
    pub relax: f64,
    /// Tolerance on both the sweep update and the complementarity residual,
    /// scaled by `max(1, ‖b‖∞)`.
    pub tol: f64,
    pub max_iter: usize,
    pub record_energy: bool,
    pub initial: Option<Vec<f64>>,
}

impl Default for PsorOptions {
    fn default() -> Self {
        PsorOptions { relax: 1.5, tol: 1e-10, max_iter: 200_000, record_energy: false, initial: None }
    }
}

/// Projected successive over-relaxation.
///
/// Each sweep visits the unknowns in index order, takes the relaxed
/// Gauss–Seidel step and clamps constrained entries at their bound.
pub fn solve_psor(qp: &ObstacleQP, opts: &PsorOptions) -> Result<SolveReport> {
    if !(opts.relax > 0.0 && opts.relax < 2.0) {
        return Err(Error::Parameter(format!("relaxation factor {} outside (0, 2)", opts.relax)));
    }
    let diag = qp.a.diagonal();
    if let Some(i) = diag.iter().position(|d| !(*d > 0.0)) {
        return Err(Error::Parameter(format!("non-positive diagonal entry at {i}")));
    }
    let tol = scaled_tolerance(qp, opts.tol);
    let mut x = feasible_start(qp, opts.initial.as_deref())?;
    let mut history = Vec::new();
    if opts.record_energy {
        history.push(qp.energy(&x));
    }

    let mut converged = complementarity_residual(qp, &x) <= tol;
    let mut sweeps = 0;
    while !converged && sweeps < opts.max_iter {
        let mut change = 0.0_f64;
        for i in 0..qp.dim() {
            let r = qp.b[i] - qp.a.row_dot(i, &x);
            let mut xi = x[i] + opts.relax * r / diag[i];
            if xi < qp.lower[i] {
                xi = qp.lower[i];
            }
            change = change.max((xi - x[i]).abs());
            x[i] = xi;
        }
        sweeps += 1;
        if opts.record_energy {
            history.push(qp.energy(&x));
        }
        converged = change <= tol && complementarity_residual(qp, &x) <= tol;
    }

    let mut report = SolveReport::finish(qp, x, sweeps, converged, SolverMethod::Psor);
    report.energy_history = history;
    Ok(report)
}
