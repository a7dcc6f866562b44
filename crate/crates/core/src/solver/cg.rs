use crate::sparse::CsrMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CgOutcome {
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
}

/// Jacobi-preconditioned conjugate gradients on the principal submatrix
/// selected by `free`.
///
/// Entries of `x` outside `free` are held fixed and enter through the
/// right-hand side `b_I − A_{I,F} x_F`; `x[free]` is used as the initial
/// guess and overwritten with the solution.
pub fn pcg(a: &CsrMatrix, b: &[f64], x: &mut [f64], free: &[usize], rel_tol: f64, max_iter: usize) -> CgOutcome {
    let m = free.len();
    if m == 0 {
        return CgOutcome { iterations: 0, relative_residual: 0.0, converged: true };
    }
    let mut in_free = vec![false; a.dim()];
    free.iter().for_each(|&i| in_free[i] = true);

    let inv_diag: Vec<f64> = free.iter().map(|&i| 1.0 / a.get(i, i)).collect();
    let mut fixed = x.to_vec();
    free.iter().for_each(|&i| fixed[i] = 0.0);
    let rhs: Vec<f64> = free.iter().map(|&i| b[i] - a.row_dot(i, &fixed)).collect();
    let rhs_norm = norm(&rhs).max(f64::MIN_POSITIVE);

    // apply A_II to a compact vector
    let mut scratch = vec![0.0; a.dim()];
    let mut apply = |v: &[f64], out: &mut [f64]| {
        for (k, &i) in free.iter().enumerate() {
            scratch[i] = v[k];
        }
        for (k, &i) in free.iter().enumerate() {
            out[k] = a.row(i).filter(|(j, _)| in_free[*j]).map(|(j, aij)| aij * scratch[j]).sum();
        }
    };

    let mut xi: Vec<f64> = free.iter().map(|&i| x[i]).collect();
    let mut ax = vec![0.0; m];
    apply(&xi, &mut ax);
    let mut r: Vec<f64> = rhs.iter().zip(&ax).map(|(f, q)| f - q).collect();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut q = vec![0.0; m];

    let mut rel = norm(&r) / rhs_norm;
    let mut it = 0;
    while rel > rel_tol && it < max_iter {
        apply(&p, &mut q);
        let pq = dot(&p, &q);
        if !(pq > 0.0) {
            break;
        }
        let alpha = rz / pq;
        for k in 0..m {
            xi[k] += alpha * p[k];
            r[k] -= alpha * q[k];
        }
        it += 1;
        // refresh the recursive residual periodically against drift
        if it % 50 == 0 {
            apply(&xi, &mut ax);
            for k in 0..m {
                r[k] = rhs[k] - ax[k];
            }
        }
        rel = norm(&r) / rhs_norm;
        for k in 0..m {
            z[k] = r[k] * inv_diag[k];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..m {
            p[k] = z[k] + beta * p[k];
        }
    }
    for (k, &i) in free.iter().enumerate() {
        x[i] = xi[k];
    }
    CgOutcome { iterations: it, relative_residual: rel, converged: rel <= rel_tol }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
