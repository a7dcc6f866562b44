use nalgebra::Matrix2;

use super::{Chart, ChartJet, Vec3};
use crate::error::{Error, Result};

/// Minimum admissible `|a₁ ∧ a₂|`.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Relative finite-difference step used for `∂_α b^σ_β`.
const CURVATURE_FD_STEP: f64 = 1e-5;

/// Pointwise geometry of the middle surface.
///
/// Index conventions: `christoffel[σ][α][β] = Γ^σ_αβ`,
/// `b_mix[(σ, β)] = b^σ_β = a^{στ} b_τβ`,
/// `b_covdev[σ][β][α] = b^σ_β|α`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceFrame {
    pub y: [f64; 2],
    pub position: Vec3,
    pub a1: Vec3,
    pub a2: Vec3,
    pub a3: Vec3,
    pub a_cov: Matrix2<f64>,
    pub a_con: Matrix2<f64>,
    pub b_cov: Matrix2<f64>,
    pub b_mix: Matrix2<f64>,
    pub christoffel: [[[f64; 2]; 2]; 2],
    pub b_covdev: [[[f64; 2]; 2]; 2],
    pub sqrt_a: f64,
}

/// Everything that follows algebraically from a single jet.
struct LocalForms {
    a3: Vec3,
    a_cov: Matrix2<f64>,
    a_con: Matrix2<f64>,
    b_cov: Matrix2<f64>,
    b_mix: Matrix2<f64>,
    christoffel: [[[f64; 2]; 2]; 2],
    sqrt_a: f64,
}

fn local_forms(jet: &ChartJet) -> Result<LocalForms> {
    let normal = jet.d1.cross(&jet.d2);
    let area = normal.norm();
    if !(area >= DEGENERACY_THRESHOLD) {
        return Err(Error::Geometry(format!(
            "tangent vectors nearly parallel, |a1 x a2| = {area:e}"
        )));
    }
    let a3 = normal / area;
    let a = [jet.d1, jet.d2];
    let a_cov = Matrix2::from_fn(|i, j| a[i].dot(&a[j]));
    let det = a_cov[(0, 0)] * a_cov[(1, 1)] - a_cov[(0, 1)] * a_cov[(1, 0)];
    let a_con = Matrix2::new(a_cov[(1, 1)], -a_cov[(0, 1)], -a_cov[(1, 0)], a_cov[(0, 0)]) / det;
    let b_cov = Matrix2::from_fn(|alpha, beta| a3.dot(&jet.second(alpha, beta)));
    let b_mix = a_con * b_cov;

    // contravariant basis a^σ = a^{στ} a_τ
    let a_up = [
        a[0] * a_con[(0, 0)] + a[1] * a_con[(0, 1)],
        a[0] * a_con[(1, 0)] + a[1] * a_con[(1, 1)],
    ];
    let mut christoffel = [[[0.0; 2]; 2]; 2];
    for (sigma, up) in a_up.iter().enumerate() {
        for alpha in 0..2 {
            for beta in 0..2 {
                christoffel[sigma][alpha][beta] = up.dot(&jet.second(alpha, beta));
            }
        }
    }
    Ok(LocalForms { a3, a_cov, a_con, b_cov, b_mix, christoffel, sqrt_a: det.sqrt() })
}

impl SurfaceFrame {
    /// Build the full frame at `y`.
    ///
    /// `∂_α b^σ_β` comes from central differences of the closed-form mixed
    /// curvature with step `1e-5 · diam(ω)`; everything else is exact in the
    /// chart's first and second derivatives.
    pub fn at(chart: &Chart, y: [f64; 2]) -> Result<Self> {
        let jet = chart.eval(y)?;
        let forms = local_forms(&jet)?;

        let h = CURVATURE_FD_STEP * chart.domain().diameter();
        let mut d_bmix = [Matrix2::zeros(); 2];
        for (alpha, d) in d_bmix.iter_mut().enumerate() {
            let (mut yp, mut ym) = (y, y);
            yp[alpha] += h;
            ym[alpha] -= h;
            let bp = local_forms(&chart.jet(yp)?)?.b_mix;
            let bm = local_forms(&chart.jet(ym)?)?.b_mix;
            *d = (bp - bm) / (yp[alpha] - ym[alpha]);
        }

        let g = &forms.christoffel;
        let bm = &forms.b_mix;
        let mut b_covdev = [[[0.0; 2]; 2]; 2];
        for sigma in 0..2 {
            for beta in 0..2 {
                for alpha in 0..2 {
                    let mut v = d_bmix[alpha][(sigma, beta)];
                    for tau in 0..2 {
                        v += g[sigma][alpha][tau] * bm[(tau, beta)];
                        v -= g[tau][alpha][beta] * bm[(sigma, tau)];
                    }
                    b_covdev[sigma][beta][alpha] = v;
                }
            }
        }

        Ok(SurfaceFrame {
            y,
            position: jet.position,
            a1: jet.d1,
            a2: jet.d2,
            a3: forms.a3,
            a_cov: forms.a_cov,
            a_con: forms.a_con,
            b_cov: forms.b_cov,
            b_mix: forms.b_mix,
            christoffel: forms.christoffel,
            b_covdev,
            sqrt_a: forms.sqrt_a,
        })
    }

    /// Gaussian-curvature sign test: `det b_αβ > 0` at an elliptic point.
    pub fn is_elliptic(&self) -> bool {
        self.b_cov.determinant() > 0.0
    }

    /// Largest violation of the Codazzi symmetry `b^σ_β|α = b^σ_α|β`.
    pub fn codazzi_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for sigma in 0..2 {
            worst = worst.max((self.b_covdev[sigma][0][1] - self.b_covdev[sigma][1][0]).abs());
        }
        worst
    }
}
