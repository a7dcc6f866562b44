use nalgebra::{DMatrix, DVector};

use super::{SolveReport, SolverMethod};
use crate::error::{Error, Result};
use crate::qp::ObstacleQP;

/// Enumeration bound on the number of constrained unknowns.
pub const ORACLE_MAX_CONSTRAINED: usize = 20;

const FEASIBILITY_SLACK: f64 = 1e-12;

/// Exact solution by enumerating every active-set candidate.
///
/// For each subset of the constrained unknowns pinned at their bounds the
/// remaining equality system is solved by dense Cholesky; candidates that
/// are primal and dual feasible are KKT points, and the one of least
/// energy is returned. Strict convexity makes it the unique minimiser.
pub fn brute_force_oracle(qp: &ObstacleQP) -> Result<SolveReport> {
    let constrained = qp.constrained();
    let c = constrained.len();
    if c > ORACLE_MAX_CONSTRAINED {
        return Err(Error::Capability(format!(
            "oracle enumerates at most {ORACLE_MAX_CONSTRAINED} constrained unknowns, problem has {c}"
        )));
    }
    let n = qp.dim();
    let dense = qp.a.to_dense();
    let mut best: Option<(f64, Vec<f64>)> = None;

    for mask in 0u32..(1u32 << c) {
        let mut pinned = vec![false; n];
        for (k, &i) in constrained.iter().enumerate() {
            pinned[i] = mask & (1 << k) != 0;
        }
        let free: Vec<usize> = (0..n).filter(|&i| !pinned[i]).collect();
        let mut x = vec![0.0; n];
        (0..n).filter(|&i| pinned[i]).for_each(|i| x[i] = qp.lower[i]);

        if !free.is_empty() {
            let sub = DMatrix::from_fn(free.len(), free.len(), |r, s| dense[(free[r], free[s])]);
            let rhs = DVector::from_iterator(
                free.len(),
                free.iter().map(|&i| qp.b[i] - (0..n).filter(|&j| pinned[j]).map(|j| dense[(i, j)] * x[j]).sum::<f64>()),
            );
            let Some(chol) = sub.cholesky() else {
                return Err(Error::Parameter("stiffness is not positive definite on a free subspace".into()));
            };
            let sol = chol.solve(&rhs);
            free.iter().enumerate().for_each(|(k, &i)| x[i] = sol[k]);
        }

        let g = qp.gradient(&x);
        let feasible = constrained.iter().all(|&i| {
            if pinned[i] {
                g[i] >= -FEASIBILITY_SLACK
            } else {
                x[i] >= qp.lower[i] - FEASIBILITY_SLACK
            }
        });
        if feasible {
            let e = qp.energy(&x);
            if best.as_ref().is_none_or(|(be, _)| e < *be) {
                best = Some((e, x));
            }
        }
    }

    let (_, mut x) = best.ok_or_else(|| Error::Parameter("no KKT point found; matrix not SPD?".into()))?;
    for &i in &constrained {
        x[i] = x[i].max(qp.lower[i]);
    }
    Ok(SolveReport::finish(qp, x, 1usize << c, true, SolverMethod::Oracle))
}
