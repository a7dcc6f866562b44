//! Shell elasticity tensor, linearised strain operators, load resultants and
//! the through-thickness post-processing identities.

use nalgebra::{Matrix2, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::geometry::SurfaceFrame;

/// `a^{αβστ}` packed in Voigt order `[11, 22, 12]`.
///
/// The 12 slot stores the raw component (`m[(2, 2)] = a^{1212}`). Energies
/// are evaluated against engineering strains `[t₁₁, t₂₂, 2t₁₂]`, which makes
/// `eᵀ m e = a^{αβστ} t_στ t_αβ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VoigtTensor2D {
    pub m: Matrix3<f64>,
}

impl VoigtTensor2D {
    /// `a^{αβστ} s_στ t_αβ`.
    pub fn contract(&self, s: &Matrix2<f64>, t: &Matrix2<f64>) -> f64 {
        engineering(t).dot(&(self.m * engineering(s)))
    }
}

/// Engineering Voigt vector `[t₁₁, t₂₂, t₁₂ + t₂₁]`.
pub fn engineering(t: &Matrix2<f64>) -> Vector3<f64> {
    Vector3::new(t[(0, 0)], t[(1, 1)], t[(0, 1)] + t[(1, 0)])
}

fn check_lame(lambda: f64, mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::Parameter(format!("shear modulus must be positive, got {mu}")));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Parameter(format!("Lame lambda must be non-negative, got {lambda}")));
    }
    Ok(())
}

/// `a^{αβστ} = 4λμ/(λ+2μ) a^{αβ}a^{στ} + 2μ (a^{ασ}a^{βτ} + a^{ατ}a^{βσ})`.
pub fn elasticity_tensor(a_con: &Matrix2<f64>, lambda: f64, mu: f64) -> Result<VoigtTensor2D> {
    check_lame(lambda, mu)?;
    let symmetric = (a_con[(0, 1)] - a_con[(1, 0)]).abs() <= 1e-12 * a_con.abs().max();
    if !symmetric || a_con[(0, 0)] <= 0.0 || a_con.determinant() <= 0.0 {
        return Err(Error::Geometry(format!("metric is not symmetric positive definite: {a_con:?}")));
    }
    let c = 4.0 * lambda * mu / (lambda + 2.0 * mu);
    let a = |i: usize, j: usize| a_con[(i, j)];
    let comp = |al: usize, be: usize, si: usize, ta: usize| {
        c * a(al, be) * a(si, ta) + 2.0 * mu * (a(al, si) * a(be, ta) + a(al, ta) * a(be, si))
    };
    const PAIRS: [(usize, usize); 3] = [(0, 0), (1, 1), (0, 1)];
    let mut m = Matrix3::zeros();
    for i in 0..3 {
        for j in i..3 {
            let (al, be) = PAIRS[i];
            let (si, ta) = PAIRS[j];
            m[(i, j)] = comp(al, be, si, ta);
            m[(j, i)] = m[(i, j)];
        }
    }
    Ok(VoigtTensor2D { m })
}

/// First-order data of a surface displacement at a point.
///
/// `grads[i][β] = ∂_β η_i`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EtaJet {
    pub vals: [f64; 3],
    pub grads: [[f64; 2]; 3],
    pub eta3_hess: Matrix2<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrainPair {
    pub gamma: Matrix2<f64>,
    pub rho: Matrix2<f64>,
}

impl StrainPair {
    pub fn of(frame: &SurfaceFrame, eta: &EtaJet) -> Self {
        StrainPair {
            gamma: gamma_of(frame, eta.vals, eta.grads),
            rho: rho_of(frame, eta.vals, eta.grads, eta.eta3_hess),
        }
    }
}

/// Linearised change of metric
/// `γ_αβ = ½(∂_β η_α + ∂_α η_β) − Γ^σ_αβ η_σ − b_αβ η₃`.
pub fn gamma_of(frame: &SurfaceFrame, vals: [f64; 3], grads: [[f64; 2]; 3]) -> Matrix2<f64> {
    let g = &frame.christoffel;
    Matrix2::from_fn(|al, be| {
        0.5 * (grads[al][be] + grads[be][al])
            - g[0][al][be] * vals[0]
            - g[1][al][be] * vals[1]
            - frame.b_cov[(al, be)] * vals[2]
    })
}

/// Linearised change of curvature (symmetrised):
///
/// `ρ_αβ = ∂_αβ η₃ − Γ^σ_αβ ∂_σ η₃ − b^σ_α b_σβ η₃ + b^σ_α(∂_β η_σ − Γ^τ_βσ η_τ)
///        + b^τ_β(∂_α η_τ − Γ^σ_ατ η_σ) + b^τ_β|α η_τ`.
pub fn rho_of(
    frame: &SurfaceFrame,
    vals: [f64; 3],
    grads: [[f64; 2]; 3],
    eta3_hess: Matrix2<f64>,
) -> Matrix2<f64> {
    let g = &frame.christoffel;
    let bm = &frame.b_mix;
    let bc = &frame.b_cov;
    let bd = &frame.b_covdev;
    // ∂_β η_σ − Γ^τ_βσ η_τ
    let cov_grad = |sigma: usize, beta: usize| {
        grads[sigma][beta] - g[0][beta][sigma] * vals[0] - g[1][beta][sigma] * vals[1]
    };
    let raw = Matrix2::from_fn(|al, be| {
        let mut v = eta3_hess[(al, be)];
        for s in 0..2 {
            v -= g[s][al][be] * grads[2][s];
            v -= bm[(s, al)] * bc[(s, be)] * vals[2];
            v += bm[(s, al)] * cov_grad(s, be);
            v += bm[(s, be)] * cov_grad(s, al);
            v += bd[s][be][al] * vals[s];
        }
        v
    });
    0.5 * (raw + raw.transpose())
}

/// Polynomial through-thickness body-force profile, ascending coefficients
/// in the physical transverse coordinate `x₃ ∈ [−ε, ε]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LoadProfile {
    pub coeffs: [Vec<f64>; 3],
}

impl LoadProfile {
    pub fn constant(f: [f64; 3]) -> Self {
        LoadProfile { coeffs: f.map(|v| vec![v]) }
    }

    pub fn eval(&self, i: usize, x3: f64) -> f64 {
        self.coeffs[i].iter().rev().fold(0.0, |acc, c| acc * x3 + c)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LoadResultant {
    pub p: [f64; 3],
}

/// `p^i = ∫_{−ε}^{ε} f^i dx₃ + h^i₊`, by 3-point Gauss–Legendre (exact to degree 5).
pub fn load_resultant(profile: &LoadProfile, h_top: [f64; 3], eps: f64) -> Result<LoadResultant> {
    if !(eps > 0.0) {
        return Err(Error::Parameter(format!("thickness half-width must be positive, got {eps}")));
    }
    if let Some(c) = profile.coeffs.iter().find(|c| c.len() > 6) {
        return Err(Error::Parameter(format!(
            "load profile of degree {} exceeds the exactly integrated degree 5",
            c.len() - 1
        )));
    }
    let node = (0.6_f64).sqrt();
    let rule = [(-node, 5.0 / 9.0), (0.0, 8.0 / 9.0), (node, 5.0 / 9.0)];
    let mut p = h_top;
    for (i, pi) in p.iter_mut().enumerate() {
        let integral: f64 = rule.iter().map(|(x, w)| w * profile.eval(i, eps * x)).sum();
        *pi += eps * integral;
    }
    Ok(LoadResultant { p })
}

/// `e₃‖₃ = −λ/(λ+2μ) · a^{αβ} γ_αβ`.
pub fn transverse_strain(frame: &SurfaceFrame, gamma: &Matrix2<f64>, lambda: f64, mu: f64) -> f64 {
    -lambda / (lambda + 2.0 * mu) * frame.a_con.component_mul(gamma).sum()
}

/// First-order through-thickness displacement at scaled coordinate `x₃ ∈ [−1, 1]`:
/// `u¹_α = ξ¹_α − x₃(∂_α ξ⁰₃ + 2 b^σ_α ξ⁰_σ)`, `u¹₃ = ξ¹₃`.
pub fn reconstruct_u1(
    frame: &SurfaceFrame,
    xi0_vals: [f64; 3],
    xi0_grads: [[f64; 2]; 3],
    xi1_vals: [f64; 3],
    x3: f64,
) -> [f64; 3] {
    let bm = &frame.b_mix;
    let mut u = xi1_vals;
    for (al, ua) in u.iter_mut().take(2).enumerate() {
        let bend = xi0_grads[2][al] + 2.0 * (bm[(0, al)] * xi0_vals[0] + bm[(1, al)] * xi0_vals[1]);
        *ua -= x3 * bend;
    }
    u
}
