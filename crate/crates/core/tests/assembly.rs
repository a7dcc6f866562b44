use nalgebra::{Matrix2, Vector3};
use shellvi::discretization::{
    assemble_flexural, assemble_membrane, build_mesh, element_quadrature, flexural_stiffness, membrane_stiffness,
    FeSpace, FieldSample, Gamma0, Material, Mesh, Side,
};
use shellvi::sparse::CsrMatrix;
use shellvi::tensors::{elasticity_tensor, engineering, gamma_of, rho_of, EtaJet, LoadResultant};
use shellvi::{Chart, Rect, SurfaceFrame};

fn unit_material() -> Material {
    Material::new(1.0, 1.0).unwrap()
}

fn sphere_setup(n: usize) -> (Chart, Mesh) {
    let d = Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap();
    (Chart::sphere_graph(2.0, d).unwrap(), build_mesh(n, n, d, &Gamma0::All).unwrap())
}

fn cylinder_setup(n: usize) -> (Chart, Mesh) {
    let d = Rect::new(-0.5, 0.5, 0.0, 1.0).unwrap();
    (Chart::cylinder(1.0, d).unwrap(), build_mesh(n, n, d, &Gamma0::Sides(vec![Side::Y2Min])).unwrap())
}

fn assert_scaled(a: &CsrMatrix, b: &CsrMatrix, factor: f64) {
    assert_eq!(a.nnz(), b.nnz());
    for ((i, j, va), (k, l, vb)) in a.triplets().zip(b.triplets()) {
        assert_eq!((i, j), (k, l));
        assert!((vb - factor * va).abs() <= 1e-14 * vb.abs(), "{va} {vb}");
    }
}

#[test]
fn membrane_stiffness_is_linear_in_thickness() {
    let (chart, mesh) = sphere_setup(4);
    let load = LoadResultant { p: [0.1, 0.0, -1.0] };
    let thin = assemble_membrane(&mesh, &chart, unit_material(), 0.01, &load).unwrap();
    let thick = assemble_membrane(&mesh, &chart, unit_material(), 0.02, &load).unwrap();
    assert_scaled(&thin.a, &thick.a, 2.0);
    assert_eq!(thin.b, thick.b);
}

#[test]
fn bending_stiffness_is_cubic_in_thickness() {
    let (chart, mesh) = cylinder_setup(3);
    let load = LoadResultant::default();
    let thin = assemble_flexural(&mesh, &chart, unit_material(), 0.05, &load, Some(10.0)).unwrap();
    let thick = assemble_flexural(&mesh, &chart, unit_material(), 0.1, &load, Some(10.0)).unwrap();
    assert_scaled(&thin.bending.scaled(thin.bending_factor), &thick.bending.scaled(thick.bending_factor), 8.0);
    assert_scaled(&thin.penalty, &thick.penalty, 1.0);
}

#[test]
fn assembled_matrices_are_symmetric() {
    let (chart, mesh) = sphere_setup(5);
    let qp = assemble_membrane(&mesh, &chart, Material::new(2.0, 0.7).unwrap(), 0.01, &LoadResultant::default()).unwrap();
    assert!(qp.a.max_asymmetry() <= 1e-12 * qp.a.max_abs());
    let (chart, mesh) = cylinder_setup(4);
    let sys = assemble_flexural(&mesh, &chart, Material::new(2.0, 0.7).unwrap(), 0.05, &LoadResultant::default(), None)
        .unwrap();
    assert!(sys.qp.a.max_asymmetry() <= 1e-12 * sys.qp.a.max_abs());
    assert_eq!(sys.qp.constrained().len(), mesh.nodes.len() - (mesh.nx + 1));
}

#[test]
fn membrane_dof_layout_matches_space() {
    let (chart, mesh) = sphere_setup(3);
    let qp = assemble_membrane(&mesh, &chart, unit_material(), 0.01, &LoadResultant::default()).unwrap();
    assert_eq!(qp.dim(), 2 * 4 + 9);
    let space = FeSpace::membrane(&mesh);
    let obstacle: Vec<usize> = (0..space.num_dofs()).filter(|&d| space.is_obstacle_dof(d)).collect();
    assert_eq!(qp.constrained(), obstacle);
    assert!(obstacle.iter().all(|&d| matches!(space.dof_kinds()[d], shellvi::DofKind::ElementNormal { .. })));
}

#[test]
fn flat_patch_test_gives_constant_strain() {
    let d = Rect::new(0.0, 2.0, 0.0, 1.0).unwrap();
    let chart = Chart::plane(d);
    let mesh = build_mesh(4, 3, d, &Gamma0::Sides(vec![])).unwrap();
    let space = FeSpace::membrane(&mesh);
    let x = space.interpolate(|y| FieldSample {
        eta: [0.2 + 0.5 * y[0] - 0.3 * y[1], -0.1 + 0.25 * y[0] + 0.75 * y[1], 0.4],
        ..Default::default()
    });
    let expected = Matrix2::new(0.5, -0.025, -0.025, 0.75);
    for e in 0..mesh.num_elements() {
        for (xi, _) in element_quadrature(2).unwrap() {
            let frame = SurfaceFrame::at(&chart, mesh.map_point(e, xi)).unwrap();
            let jet = space.eval(&x, e, xi);
            assert!((gamma_of(&frame, jet.vals, jet.grads) - expected).abs().max() <= 1e-12);
        }
    }
    // stored energy of a constant strain is area × density
    let (k, _) = membrane_stiffness(&space, &chart, unit_material()).unwrap();
    let density = elasticity_tensor(&Matrix2::identity(), 1.0, 1.0).unwrap().contract(&expected, &expected);
    assert!((k.quad_form(&x) - 2.0 * density).abs() <= 1e-12);
}

#[test]
fn plate_bending_reduces_to_hessian_energy() {
    let chart = Chart::plane(Rect::unit());
    let mesh = build_mesh(3, 3, Rect::unit(), &Gamma0::Sides(vec![])).unwrap();
    let space = FeSpace::flexural(&mesh);
    // biquadratic deflection, represented exactly by the Hermite space
    let w = |y: [f64; 2]| 0.3 * y[0] * y[0] - 0.2 * y[0] * y[1] + 0.5 * y[1] * y[1] + y[0] * y[0] * y[1] * y[1];
    let x = space.interpolate(|y| FieldSample {
        eta: [0.0, 0.0, w(y)],
        d1_eta3: 0.6 * y[0] - 0.2 * y[1] + 2.0 * y[0] * y[1] * y[1],
        d2_eta3: -0.2 * y[0] + y[1] + 2.0 * y[0] * y[0] * y[1],
        d12_eta3: -0.2 + 4.0 * y[0] * y[1],
    });
    let (bending, penalty) = flexural_stiffness(&space, &chart, unit_material()).unwrap();
    let tensor = elasticity_tensor(&Matrix2::identity(), 1.0, 1.0).unwrap();
    let mut exact = 0.0;
    for e in 0..mesh.num_elements() {
        let [h1, h2] = mesh.element_extent(e);
        for (xi, wt) in element_quadrature(4).unwrap() {
            let y = mesh.map_point(e, xi);
            let hess = Matrix2::new(
                0.6 + 2.0 * y[1] * y[1],
                -0.2 + 4.0 * y[0] * y[1],
                -0.2 + 4.0 * y[0] * y[1],
                1.0 + 2.0 * y[0] * y[0],
            );
            exact += wt * 0.25 * h1 * h2 * tensor.contract(&hess, &hess);
        }
    }
    let e = bending.quad_form(&x);
    assert!((e - exact).abs() <= 1e-12 * exact, "{e} {exact}");
    // a transverse field on the plane does not stretch the middle surface
    assert!(penalty.quad_form(&x) <= 1e-24);

    let constant = space.interpolate(|_| FieldSample { eta: [0.0, 0.0, 1.0], ..Default::default() });
    assert!(bending.quad_form(&constant).abs() <= 1e-12 * bending.max_abs(), "{}", bending.quad_form(&constant));
}

/// Continuous energy of a smooth field, integrated on a fine grid.
fn reference_energy<F>(chart: &Chart, jet: F, bending: bool) -> f64
where
    F: Fn([f64; 2]) -> EtaJet,
{
    let d = chart.domain();
    let n = 48;
    let mesh = build_mesh(n, n, d, &Gamma0::All).unwrap();
    let mut total = 0.0;
    for e in 0..mesh.num_elements() {
        let [h1, h2] = mesh.element_extent(e);
        for (xi, w) in element_quadrature(4).unwrap() {
            let y = mesh.map_point(e, xi);
            let f = SurfaceFrame::at(chart, y).unwrap();
            let t = elasticity_tensor(&f.a_con, 1.0, 1.0).unwrap();
            let j = jet(y);
            let s = if bending { rho_of(&f, j.vals, j.grads, j.eta3_hess) } else { gamma_of(&f, j.vals, j.grads) };
            let v: Vector3<f64> = engineering(&s);
            total += w * 0.25 * h1 * h2 * f.sqrt_a * v.dot(&(t.m * v));
        }
    }
    total
}

fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[test]
fn membrane_energy_converges_at_first_order() {
    use std::f64::consts::PI;
    let field = |y: [f64; 2]| {
        let (s1, c1) = (PI * (y[0] + 1.0) / 2.0).sin_cos();
        let (s2, c2) = (PI * (y[1] + 1.0) / 2.0).sin_cos();
        let mut j = EtaJet::default();
        j.vals = [s1 * s2, 0.5 * s1 * s2, (y[0] + 2.0 * y[1]).cos()];
        j.grads[0] = [0.5 * PI * c1 * s2, 0.5 * PI * s1 * c2];
        j.grads[1] = [0.25 * PI * c1 * s2, 0.25 * PI * s1 * c2];
        j
    };
    let (chart, _) = sphere_setup(1);
    let exact = reference_energy(&chart, field, false);
    let mut errors = Vec::new();
    for n in [4, 8, 16] {
        let (_, mesh) = sphere_setup(n);
        let space = FeSpace::membrane(&mesh);
        let (k, _) = membrane_stiffness(&space, &chart, unit_material()).unwrap();
        let x = space.interpolate(|y| FieldSample { eta: field(y).vals, ..Default::default() });
        errors.push((k.quad_form(&x) - exact).abs());
    }
    let orders = observed_orders(&errors);
    println!("membrane errors {errors:?} orders {orders:?}");
    assert!(orders.iter().all(|&p| p >= 1.0));
}

#[test]
fn bending_energy_converges_at_second_order() {
    let g = |y: [f64; 2]| (y[0].cos(), -y[0].sin(), -y[0].cos());
    let field = |y: [f64; 2]| {
        let (c, s, cc) = g(y);
        let t = y[1];
        let mut j = EtaJet::default();
        j.vals[2] = t * t * c;
        j.grads[2] = [t * t * s, 2.0 * t * c];
        j.eta3_hess = Matrix2::new(t * t * cc, 2.0 * t * s, 2.0 * t * s, 2.0 * c);
        j
    };
    let (chart, _) = cylinder_setup(1);
    let exact = reference_energy(&chart, field, true);
    let mut errors = Vec::new();
    for n in [2, 4, 8] {
        let (_, mesh) = cylinder_setup(n);
        let space = FeSpace::flexural(&mesh);
        let (k, _) = flexural_stiffness(&space, &chart, unit_material()).unwrap();
        let x = space.interpolate(|y| {
            let j = field(y);
            FieldSample { eta: j.vals, d1_eta3: j.grads[2][0], d2_eta3: j.grads[2][1], d12_eta3: j.eta3_hess[(0, 1)] }
        });
        errors.push((k.quad_form(&x) - exact).abs());
    }
    let orders = observed_orders(&errors);
    println!("bending errors {errors:?} orders {orders:?}");
    assert!(orders.iter().all(|&p| p >= 2.0));
}
