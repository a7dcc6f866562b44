use std::collections::HashSet;

use super::{complementarity_residual, feasible_start, pcg, scaled_tolerance, SolveReport, SolverMethod};
use crate::error::Result;
use crate::qp::ObstacleQP;

/// Sign threshold for primal/dual feasibility tests in the set update.
const TIE_THRESHOLD: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct ActiveSetOptions {
    pub tol: f64,
    pub max_outer: usize,
    /// Relative residual target of the inner conjugate-gradient solves.
    pub cg_rel_tol: f64,
    pub initial: Option<Vec<f64>>,
}

impl Default for ActiveSetOptions {
    fn default() -> Self {
        ActiveSetOptions { tol: 1e-10, max_outer: 500, cg_rel_tol: 1e-12, initial: None }
    }
}

/// Primal–dual active-set iteration.
///
/// Each outer step pins the active entries to their bounds, solves the
/// remaining equality system by preconditioned CG, then releases active
/// entries with negative multiplier `(Ax − b)_i` and activates inactive
/// entries below their bound. Should an active set reappear (the full
/// update can cycle on SPD matrices that are not M-matrices), the update
/// falls back to flipping only the lowest-index violator, which
/// terminates for any P-matrix.
pub fn solve_active_set(qp: &ObstacleQP, opts: &ActiveSetOptions) -> Result<SolveReport> {
    let n = qp.dim();
    let tol = scaled_tolerance(qp, opts.tol);
    let constrained = qp.constrained();
    let mut x = feasible_start(qp, opts.initial.as_deref())?;

    let g0 = qp.gradient(&x);
    let mut active = vec![false; n];
    for &i in &constrained {
        active[i] = x[i] <= qp.lower[i] && g0[i] > 0.0;
    }

    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    seen.insert(active.clone());
    let mut single_pivot = false;
    let mut outer = 0;
    let mut settled = false;
    let mut inner_ok = true;
    let cg_cap = 20 * n + 200;

    while outer < opts.max_outer {
        outer += 1;
        let mut free = Vec::with_capacity(n);
        for i in 0..n {
            if active[i] {
                x[i] = qp.lower[i];
            } else {
                free.push(i);
            }
        }
        inner_ok = pcg(&qp.a, &qp.b, &mut x, &free, opts.cg_rel_tol, cg_cap).converged;
        let g = qp.gradient(&x);

        let violators: Vec<usize> = constrained
            .iter()
            .copied()
            .filter(|&i| {
                if active[i] {
                    g[i] < -TIE_THRESHOLD
                } else {
                    x[i] < qp.lower[i] - TIE_THRESHOLD
                }
            })
            .collect();
        if violators.is_empty() {
            settled = true;
            break;
        }

        if single_pivot {
            active[violators[0]] ^= true;
        } else {
            let mut next = active.clone();
            violators.iter().for_each(|&i| next[i] ^= true);
            if seen.contains(&next) {
                single_pivot = true;
                active[violators[0]] ^= true;
            } else {
                active = next;
            }
        }
        seen.insert(active.clone());
    }

    for &i in &constrained {
        x[i] = x[i].max(qp.lower[i]);
    }
    let converged = settled && inner_ok && complementarity_residual(qp, &x) <= tol;
    Ok(SolveReport::finish(qp, x, outer, converged, SolverMethod::ActiveSet))
}
