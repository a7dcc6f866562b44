use nalgebra::{DMatrix, Matrix3, Vector3};

use super::mesh::Mesh;
use super::quadrature::element_quadrature;
use super::space::{FeSpace, SpaceKind};
use crate::error::{Error, Result};
use crate::geometry::{Chart, SurfaceFrame};
use crate::qp::{DofInfo, ObstacleQP};
use crate::sparse::{CsrMatrix, TripletBuilder};
use crate::tensors::{elasticity_tensor, engineering, gamma_of, rho_of, EtaJet, LoadResultant};

/// Lamé constants of the shell material.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Material {
    pub lambda: f64,
    pub mu: f64,
}

impl Material {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) || !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::Parameter(format!("need lambda >= 0 and mu > 0, got ({lambda}, {mu})")));
        }
        Ok(Material { lambda, mu })
    }
}

pub const MEMBRANE_QUADRATURE: usize = 2;
pub const FLEXURAL_QUADRATURE: usize = 3;

/// Inner product weights turning engineering Voigt vectors back into `s:t`.
fn frobenius_weights() -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 0.5))
}

fn check_inputs(mesh: &Mesh, chart: &Chart, eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Parameter(format!("thickness half-width must be positive, got {eps}")));
    }
    let dom = chart.domain();
    if !mesh.domain.corners().iter().all(|c| dom.contains(*c)) {
        return Err(Error::Parameter("mesh domain extends beyond the chart domain".into()));
    }
    Ok(())
}

/// One quadrature point handed to an element integrand.
struct PointData<'a> {
    frame: &'a SurfaceFrame,
    basis: &'a [(usize, EtaJet)],
    /// Quadrature weight × Jacobian × `√a`.
    weight: f64,
}

/// Loop over all elements and quadrature points; `local` fills the element
/// matrices (one per operator) for the basis functions of that element.
fn integrate<F>(space: &FeSpace, chart: &Chart, order: usize, n_mats: usize, mut point: F) -> Result<Vec<CsrMatrix>>
where
    F: FnMut(&PointData<'_>, &mut [DMatrix<f64>]) -> Result<()>,
{
    let rule = element_quadrature(order)?;
    let n = space.num_dofs();
    let mut builders: Vec<TripletBuilder> = (0..n_mats).map(|_| TripletBuilder::new(n)).collect();
    let mesh = &space.mesh;
    for e in 0..mesh.num_elements() {
        let [h1, h2] = mesh.element_extent(e);
        let jac = 0.25 * h1 * h2;
        let mut locals: Vec<DMatrix<f64>> = Vec::new();
        let mut dofs: Vec<usize> = Vec::new();
        for (xi, w) in &rule {
            let frame = SurfaceFrame::at(chart, mesh.map_point(e, *xi))?;
            let basis = space.basis(e, *xi);
            if locals.is_empty() {
                dofs = basis.iter().map(|(d, _)| *d).collect();
                locals = (0..n_mats).map(|_| DMatrix::zeros(dofs.len(), dofs.len())).collect();
            }
            let data = PointData { frame: &frame, basis: &basis, weight: w * jac * frame.sqrt_a };
            point(&data, &mut locals)?;
        }
        for (local, builder) in locals.iter().zip(builders.iter_mut()) {
            for (r, &dr) in dofs.iter().enumerate() {
                for (c, &dc) in dofs.iter().enumerate() {
                    if local[(r, c)] != 0.0 {
                        builder.push(dr, dc, local[(r, c)]);
                    }
                }
            }
        }
    }
    Ok(builders.into_iter().map(TripletBuilder::into_csr).collect())
}

// K += weight · Sᵀ M S for the per-basis strain vectors `s`.
fn add_energy(local: &mut DMatrix<f64>, strains: &[Vector3<f64>], m: &Matrix3<f64>, weight: f64) {
    let ms: Vec<Vector3<f64>> = strains.iter().map(|s| m * s).collect();
    for (r, sr) in strains.iter().enumerate() {
        for (c, msc) in ms.iter().enumerate() {
            local[(r, c)] += weight * sr.dot(msc);
        }
    }
}

/// Load vector `∫ p^i φ_i √a` and lumped areas `∫ φ₃ √a` of the normal unknowns.
fn loads_and_areas(space: &FeSpace, chart: &Chart, order: usize, load: &LoadResultant) -> Result<(Vec<f64>, Vec<f64>)> {
    let rule = element_quadrature(order)?;
    let mesh = &space.mesh;
    let mut b = vec![0.0; space.num_dofs()];
    let mut area = vec![0.0; space.num_dofs()];
    for e in 0..mesh.num_elements() {
        let [h1, h2] = mesh.element_extent(e);
        for (xi, w) in &rule {
            let frame = SurfaceFrame::at(chart, mesh.map_point(e, *xi))?;
            let weight = w * 0.25 * h1 * h2 * frame.sqrt_a;
            for (d, jet) in space.basis(e, *xi) {
                b[d] += weight * (0..3).map(|i| load.p[i] * jet.vals[i]).sum::<f64>();
                area[d] += weight * (jet.vals[0] + jet.vals[1] + jet.vals[2]);
            }
        }
    }
    Ok((b, area))
}

fn build_qp(space: &FeSpace, a: CsrMatrix, b: Vec<f64>, area: Vec<f64>) -> Result<ObstacleQP> {
    let lower = (0..space.num_dofs())
        .map(|d| if space.is_obstacle_dof(d) { 0.0 } else { f64::NEG_INFINITY })
        .collect();
    let mut qp = ObstacleQP::new(a, b, lower)?;
    qp.dofs = space
        .dof_kinds()
        .iter()
        .zip(area)
        .map(|(&kind, lumped_area)| DofInfo { kind, lumped_area })
        .collect();
    Ok(qp)
}

/// Discrete elliptic-membrane obstacle problem.
///
/// `A_ij = ε ∫ a^{αβστ} γ_στ(φ_j) γ_αβ(φ_i) √a dy` on Q1 × Q1 × Q0 with 2×2
/// Gauss points, `b_i = ∫ p^k φ_{i,k} √a dy`, and `η₃ ≥ 0` per element. The
/// clamped boundary must be the whole of `∂ω`. Quadrature points where the
/// surface is not elliptic are reported in `qp.warnings`.
pub fn assemble_membrane(mesh: &Mesh, chart: &Chart, material: Material, eps: f64, load: &LoadResultant) -> Result<ObstacleQP> {
    check_inputs(mesh, chart, eps)?;
    if !mesh.clamps_whole_boundary() {
        return Err(Error::Parameter("membrane problem requires gamma0 to be the whole boundary".into()));
    }
    let space = FeSpace::membrane(mesh);
    let (stiffness, non_elliptic) = membrane_stiffness(&space, chart, material)?;
    let (b, area) = loads_and_areas(&space, chart, MEMBRANE_QUADRATURE, load)?;
    let mut qp = build_qp(&space, stiffness.scaled(eps), b, area)?;
    if non_elliptic > 0 {
        qp.warnings.push(format!(
            "surface is not elliptic at {non_elliptic} quadrature points; membrane coercivity is not guaranteed"
        ));
    }
    Ok(qp)
}

/// Unscaled membrane stiffness `∫ a γ(φ_j) γ(φ_i) √a` and the number of
/// non-elliptic quadrature points.
pub fn membrane_stiffness(space: &FeSpace, chart: &Chart, material: Material) -> Result<(CsrMatrix, usize)> {
    let mut non_elliptic = 0;
    let mats = integrate(space, chart, MEMBRANE_QUADRATURE, 1, |p, locals| {
        if !p.frame.is_elliptic() {
            non_elliptic += 1;
        }
        let tensor = elasticity_tensor(&p.frame.a_con, material.lambda, material.mu)?;
        let strains: Vec<_> =
            p.basis.iter().map(|(_, j)| engineering(&gamma_of(p.frame, j.vals, j.grads))).collect();
        add_energy(&mut locals[0], &strains, &tensor.m, p.weight);
        Ok(())
    })?;
    Ok((mats.into_iter().next().unwrap(), non_elliptic))
}

/// Assembled flexural problem with its two stiffness contributions kept apart.
#[derive(Clone, Debug)]
pub struct FlexuralSystem {
    pub qp: ObstacleQP,
    /// `K_ρ = ∫ a^{αβστ} ρ_στ ρ_αβ √a` (unscaled).
    pub bending: CsrMatrix,
    /// `K_γ = ∫ γ:γ √a` (unscaled).
    pub penalty: CsrMatrix,
    /// `ε³/3`.
    pub bending_factor: f64,
    pub kappa: f64,
}

impl FlexuralSystem {
    /// Fraction of the stored energy `xᵀAx` carried by the inextensibility penalty.
    pub fn penalty_share(&self, x: &[f64]) -> f64 {
        let total = self.qp.a.quad_form(x);
        if total > 0.0 {
            self.kappa * self.penalty.quad_form(x) / total
        } else {
            0.0
        }
    }
}

/// Default inextensibility penalty `κ = 10³ · μ · ε`.
pub fn default_penalty(material: Material, eps: f64) -> f64 {
    1e3 * material.mu * eps
}

/// Discrete flexural-shell obstacle problem with penalised inextensibility.
///
/// `A = (ε³/3) K_ρ + κ K_γ` on Q1 × Q1 × BFS with 3×3 Gauss points; the
/// clamped data `η_i = ∂_ν η₃ = 0` on `γ₀` removes every tangential and
/// Hermite unknown of a clamped node. Obstacle bounds sit on the Hermite
/// value unknowns.
pub fn assemble_flexural(
    mesh: &Mesh,
    chart: &Chart,
    material: Material,
    eps: f64,
    load: &LoadResultant,
    kappa: Option<f64>,
) -> Result<FlexuralSystem> {
    check_inputs(mesh, chart, eps)?;
    let kappa = kappa.unwrap_or_else(|| default_penalty(material, eps));
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Parameter(format!("penalty parameter must be positive, got {kappa}")));
    }
    if mesh.gamma0_edges() == 0 {
        return Err(Error::Parameter("flexural problem needs a clamped boundary part of positive length".into()));
    }
    let space = FeSpace::flexural(mesh);
    let (bending, penalty) = flexural_stiffness(&space, chart, material)?;
    let bending_factor = eps * eps * eps / 3.0;
    let a = CsrMatrix::linear_combination(bending_factor, &bending, kappa, &penalty)?;
    let (b, area) = loads_and_areas(&space, chart, FLEXURAL_QUADRATURE, load)?;
    let qp = build_qp(&space, a, b, area)?;
    Ok(FlexuralSystem { qp, bending, penalty, bending_factor, kappa })
}

/// Unscaled `(K_ρ, K_γ)` on a flexural space.
pub fn flexural_stiffness(space: &FeSpace, chart: &Chart, material: Material) -> Result<(CsrMatrix, CsrMatrix)> {
    if space.kind != SpaceKind::Flexural {
        return Err(Error::Parameter("flexural stiffness needs a flexural space".into()));
    }
    let weights = frobenius_weights();
    let mut mats = integrate(space, chart, FLEXURAL_QUADRATURE, 2, |p, locals| {
        let tensor = elasticity_tensor(&p.frame.a_con, material.lambda, material.mu)?;
        let rho: Vec<_> = p
            .basis
            .iter()
            .map(|(_, j)| engineering(&rho_of(p.frame, j.vals, j.grads, j.eta3_hess)))
            .collect();
        let gamma: Vec<_> =
            p.basis.iter().map(|(_, j)| engineering(&gamma_of(p.frame, j.vals, j.grads))).collect();
        add_energy(&mut locals[0], &rho, &tensor.m, p.weight);
        add_energy(&mut locals[1], &gamma, &weights, p.weight);
        Ok(())
    })?;
    let penalty = mats.pop().unwrap();
    let bending = mats.pop().unwrap();
    Ok((bending, penalty))
}

/// Gram matrix of the norm in which coercivity is measured, in chart
/// measure `dy`: `H¹` for the tangential components, `L²` for the membrane
/// `η₃`, `H²` for the flexural `η₃`.
pub fn norm_matrix(space: &FeSpace) -> Result<CsrMatrix> {
    let rule = element_quadrature(3)?;
    let mesh = &space.mesh;
    let mut t = TripletBuilder::new(space.num_dofs());
    for e in 0..mesh.num_elements() {
        let [h1, h2] = mesh.element_extent(e);
        for (xi, w) in &rule {
            let weight = w * 0.25 * h1 * h2;
            let basis = space.basis(e, *xi);
            for (di, ji) in &basis {
                for (dj, jj) in &basis {
                    let mut v = 0.0;
                    for c in 0..2 {
                        v += ji.vals[c] * jj.vals[c] + ji.grads[c][0] * jj.grads[c][0] + ji.grads[c][1] * jj.grads[c][1];
                    }
                    v += ji.vals[2] * jj.vals[2];
                    if space.kind == SpaceKind::Flexural {
                        v += ji.grads[2][0] * jj.grads[2][0] + ji.grads[2][1] * jj.grads[2][1];
                        v += ji.eta3_hess.component_mul(&jj.eta3_hess).sum();
                    }
                    if v != 0.0 {
                        t.push(*di, *dj, weight * v);
                    }
                }
            }
        }
    }
    Ok(t.into_csr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretization::mesh::{build_mesh, Gamma0, Side};
    use crate::geometry::Rect;

    fn sphere() -> Chart {
        Chart::sphere_graph(2.0, Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap()).unwrap()
    }

    fn mat() -> Material {
        Material::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn membrane_counts_and_bounds() {
        let chart = sphere();
        let mesh = build_mesh(2, 2, chart.domain(), &Gamma0::All).unwrap();
        let qp = assemble_membrane(&mesh, &chart, mat(), 0.01, &LoadResultant { p: [0.0, 0.0, -1.0] }).unwrap();
        assert_eq!(qp.dim(), 6);
        assert_eq!(qp.constrained().len(), 4);
        assert!(qp.warnings.is_empty());
        assert!(qp.a.max_asymmetry() <= 1e-12 * qp.a.max_abs());
        // lumped areas of the element unknowns add up to the surface area
        let total: f64 = qp.constrained().iter().map(|&i| qp.dofs[i].lumped_area).sum();
        assert!(total > 4.0 && total < 4.0 * 2.0);
    }

    #[test]
    fn membrane_requires_full_clamping() {
        let chart = sphere();
        let mesh = build_mesh(2, 2, chart.domain(), &Gamma0::Sides(vec![Side::Y1Min])).unwrap();
        assert!(assemble_membrane(&mesh, &chart, mat(), 0.01, &LoadResultant::default()).is_err());
    }

    #[test]
    fn membrane_zero_load_gives_zero_vector() {
        let chart = sphere();
        let mesh = build_mesh(3, 3, chart.domain(), &Gamma0::All).unwrap();
        let qp = assemble_membrane(&mesh, &chart, mat(), 0.01, &LoadResultant::default()).unwrap();
        assert!(qp.b.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn non_elliptic_surface_is_flagged() {
        let chart = Chart::cylinder(1.0, Rect::new(-0.5, 0.5, 0.0, 1.0).unwrap()).unwrap();
        let mesh = build_mesh(2, 2, chart.domain(), &Gamma0::All).unwrap();
        let qp = assemble_membrane(&mesh, &chart, mat(), 0.1, &LoadResultant::default()).unwrap();
        assert_eq!(qp.warnings.len(), 1);
    }

    #[test]
    fn mesh_must_lie_in_chart() {
        let chart = sphere();
        let mesh = build_mesh(2, 2, Rect::new(-1.0, 1.5, -1.0, 1.0).unwrap(), &Gamma0::All).unwrap();
        assert!(assemble_membrane(&mesh, &chart, mat(), 0.01, &LoadResultant::default()).is_err());
    }

    #[test]
    fn flexural_parameter_errors() {
        let chart = Chart::cylinder(1.0, Rect::new(-0.5, 0.5, 0.0, 1.0).unwrap()).unwrap();
        let mesh = build_mesh(2, 2, chart.domain(), &Gamma0::Sides(vec![Side::Y2Min])).unwrap();
        let load = LoadResultant::default();
        assert!(assemble_flexural(&mesh, &chart, mat(), 0.1, &load, Some(0.0)).is_err());
        let free = build_mesh(2, 2, chart.domain(), &Gamma0::Sides(vec![])).unwrap();
        assert!(assemble_flexural(&free, &chart, mat(), 0.1, &load, None).is_err());
        let sys = assemble_flexural(&mesh, &chart, mat(), 0.1, &load, None).unwrap();
        assert_eq!(sys.kappa, 1e3 * 0.1);
        assert!(sys.qp.a.max_asymmetry() <= 1e-12 * sys.qp.a.max_abs());
    }

    #[test]
    fn plate_bending_decouples_tangential_unknowns() {
        let chart = Chart::plane(Rect::unit());
        let mesh = build_mesh(3, 3, Rect::unit(), &Gamma0::All).unwrap();
        let space = FeSpace::flexural(&mesh);
        let (bending, _) = flexural_stiffness(&space, &chart, mat()).unwrap();
        for (i, j, v) in bending.triplets() {
            let tangential = |d: usize| matches!(space.dof_kinds()[d], crate::qp::DofKind::Tangential { .. });
            if tangential(i) || tangential(j) {
                assert_eq!(v, 0.0);
            }
        }
    }
}
