//! Shared fixtures for the benchmarks.

use shellvi::discretization::{assemble_flexural, assemble_membrane, build_mesh, FlexuralSystem, Gamma0, Material, Side};
use shellvi::tensors::LoadResultant;
use shellvi::{Chart, ObstacleQP, Rect};

pub fn membrane_problem(n: usize) -> ObstacleQP {
    let domain = Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap();
    let chart = Chart::sphere_graph(2.0, domain).unwrap();
    let mesh = build_mesh(n, n, domain, &Gamma0::All).unwrap();
    let load = LoadResultant { p: [0.0, 0.0, -1.0] };
    assemble_membrane(&mesh, &chart, Material::new(1.0, 1.0).unwrap(), 0.01, &load).unwrap()
}

pub fn flexural_problem(n: usize) -> FlexuralSystem {
    let domain = Rect::new(-0.5, 0.5, 0.0, 1.0).unwrap();
    let chart = Chart::cylinder(1.0, domain).unwrap();
    let mesh = build_mesh(n, n, domain, &Gamma0::Sides(vec![Side::Y2Min])).unwrap();
    let load = LoadResultant { p: [0.0, 0.0, -1e-3] };
    assemble_flexural(&mesh, &chart, Material::new(1.0, 1.0).unwrap(), 0.05, &load, None).unwrap()
}
