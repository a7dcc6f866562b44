//! Configuration → geometry check → assembly → solve → post-processing.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use shellvi::discretization::{
    assemble_flexural, assemble_membrane, build_mesh, element_quadrature, FeSpace, FlexuralSystem, Mesh,
    FLEXURAL_QUADRATURE, MEMBRANE_QUADRATURE,
};
use shellvi::qp::HermiteSlot;
use shellvi::solver::{brute_force_oracle, solve_active_set, solve_psor, ActiveSetOptions, PsorOptions, SolverMethod};
use shellvi::tensors::{gamma_of, reconstruct_u1, transverse_strain};
use shellvi::{validate_chart, Chart, ObstacleQP, SolveReport, SurfaceFrame, ValidationOptions};

use crate::config::{ProblemKind, RunConfig};

/// Command-line overrides of the configured solver settings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub method: Option<SolverMethod>,
}

pub enum Assembled {
    Membrane(ObstacleQP),
    Flexural(Box<FlexuralSystem>),
}

impl Assembled {
    pub fn qp(&self) -> &ObstacleQP {
        match self {
            Assembled::Membrane(qp) => qp,
            Assembled::Flexural(sys) => &sys.qp,
        }
    }

    /// Largest entry of the thickness-scaled leading operator: `ε K` for
    /// membranes, `(ε³/3) K_ρ` for flexural shells.
    pub fn leading_stiffness(&self) -> f64 {
        match self {
            Assembled::Membrane(qp) => qp.a.max_abs(),
            Assembled::Flexural(sys) => sys.bending_factor * sys.bending.max_abs(),
        }
    }
}

pub struct Problem {
    pub config: RunConfig,
    pub chart: Chart,
    pub mesh: Mesh,
    pub space: FeSpace,
    pub assembled: Assembled,
}

impl Problem {
    pub fn qp(&self) -> &ObstacleQP {
        self.assembled.qp()
    }
}

/// Check the chart against finite differences on the mesh domain.
pub fn check_geometry(chart: &Chart) -> Result<()> {
    let report = validate_chart(chart, &ValidationOptions::default());
    if !report.passed() {
        bail!("chart validation failed: {}", report.failures.join("; "));
    }
    Ok(())
}

pub fn build(config: &RunConfig) -> Result<Problem> {
    let chart = config.chart().context("geometry stage")?;
    check_geometry(&chart).context("geometry stage")?;
    let assembled = (|| -> Result<_> {
        let mesh = build_mesh(config.mesh.nx, config.mesh.ny, chart.domain(), &config.gamma0()?)?;
        let load = config.load_resultant()?;
        let material = config.material();
        let eps = config.shell.eps;
        let (space, assembled) = match config.problem {
            ProblemKind::Membrane => (
                FeSpace::membrane(&mesh),
                Assembled::Membrane(assemble_membrane(&mesh, &chart, material, eps, &load)?),
            ),
            ProblemKind::Flexural => (
                FeSpace::flexural(&mesh),
                Assembled::Flexural(Box::new(assemble_flexural(
                    &mesh,
                    &chart,
                    material,
                    eps,
                    &load,
                    config.shell.kappa,
                )?)),
            ),
        };
        Ok((mesh, space, assembled))
    })()
    .context("assembly stage")?;
    let (mesh, space, assembled) = assembled;
    Ok(Problem { config: config.clone(), chart, mesh, space, assembled })
}

pub fn solve(problem: &Problem, overrides: &Overrides) -> Result<SolveReport> {
    let cfg = &problem.config;
    let method = match overrides.method {
        Some(m) => m,
        None => cfg.method()?,
    };
    let tol = overrides.tol.unwrap_or(cfg.solver.tol);
    let qp = problem.qp();
    let report = match method {
        SolverMethod::Psor => solve_psor(
            qp,
            &PsorOptions { relax: cfg.solver.relax, tol, max_iter: cfg.solver.max_iter, ..Default::default() },
        ),
        SolverMethod::ActiveSet => solve_active_set(qp, &ActiveSetOptions { tol, ..Default::default() }),
        SolverMethod::Oracle => brute_force_oracle(qp),
    };
    report.context("solve stage")
}

/// One row of the field table: element centroids for membranes, nodes for
/// flexural shells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldRow {
    pub y1: f64,
    pub y2: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
    pub active_flag: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrainRow {
    pub element: usize,
    pub y1: f64,
    pub y2: f64,
    pub e33: f64,
}

/// First-order in-thickness displacement at an element centroid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisplacementRow {
    pub element: usize,
    pub y1: f64,
    pub y2: f64,
    pub x3: f64,
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactRow {
    pub dof: usize,
    pub y1: f64,
    pub y2: f64,
    pub multiplier: f64,
    pub pressure: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub problem: ProblemKind,
    pub method: SolverMethod,
    pub converged: bool,
    pub iterations: usize,
    pub dofs: usize,
    pub constrained: usize,
    pub active: usize,
    pub energy: f64,
    pub residual: f64,
    pub penalty_share: Option<f64>,
    pub min_multiplier: Option<f64>,
    pub warnings: Vec<String>,
}

pub struct ResultBundle {
    pub summary: Summary,
    pub fields: Vec<FieldRow>,
    pub strain: Vec<StrainRow>,
    pub displacement: Vec<DisplacementRow>,
    pub contact: Vec<ContactRow>,
    /// Per-node `(ξ₁, ξ₂, ξ₃)`; `ξ₃` is zero for membranes, whose normal
    /// component lives on elements.
    pub nodal: Vec<[f64; 3]>,
    /// Per-element normal component (membranes only).
    pub element_normal: Vec<f64>,
    pub report: SolveReport,
}

impl ResultBundle {
    pub fn converged(&self) -> bool {
        self.summary.converged
    }
}

pub const THICKNESS_SLICES: [f64; 3] = [-1.0, 0.0, 1.0];

pub fn postprocess(problem: &Problem, report: SolveReport) -> Result<ResultBundle> {
    let Problem { config, chart, mesh, space, assembled } = problem;
    let qp = assembled.qp();
    let x = &report.x;
    let active: Vec<bool> = {
        let mut a = vec![false; qp.dim()];
        report.active_set.iter().for_each(|&i| a[i] = true);
        a
    };

    let mut nodal = vec![[0.0; 3]; mesh.num_nodes()];
    for (n, v) in nodal.iter_mut().enumerate() {
        for c in 0..2 {
            if let Some(d) = space.tangential_dof(n, c) {
                v[c] = x[d];
            }
        }
        if let Some(d) = space.hermite_dof(n, HermiteSlot::Value) {
            v[2] = x[d];
        }
    }

    let mut fields = Vec::new();
    let mut element_normal = Vec::new();
    match config.problem {
        ProblemKind::Membrane => {
            for e in 0..mesh.num_elements() {
                let c = mesh.centroid(e);
                let jet = space.eval(x, e, [0.0, 0.0]);
                let d = space.element_normal_dof(e).context("membrane element without normal unknown")?;
                element_normal.push(x[d]);
                fields.push(FieldRow {
                    y1: c[0],
                    y2: c[1],
                    xi1: jet.vals[0],
                    xi2: jet.vals[1],
                    xi3: x[d],
                    active_flag: active[d] as u8,
                });
            }
        }
        ProblemKind::Flexural => {
            for (n, y) in mesh.nodes.iter().enumerate() {
                let flag = space.hermite_dof(n, HermiteSlot::Value).is_some_and(|d| active[d]);
                fields.push(FieldRow {
                    y1: y[0],
                    y2: y[1],
                    xi1: nodal[n][0],
                    xi2: nodal[n][1],
                    xi3: nodal[n][2],
                    active_flag: flag as u8,
                });
            }
        }
    }

    let order = match config.problem {
        ProblemKind::Membrane => MEMBRANE_QUADRATURE,
        ProblemKind::Flexural => FLEXURAL_QUADRATURE,
    };
    let rule = element_quadrature(order)?;
    let (lambda, mu) = (config.material.lambda, config.material.mu);
    let mut strain = Vec::new();
    let mut displacement = Vec::new();
    for e in 0..mesh.num_elements() {
        for (xi, _) in &rule {
            let y = mesh.map_point(e, *xi);
            let frame = SurfaceFrame::at(chart, y).context("post-processing stage")?;
            let jet = space.eval(x, e, *xi);
            let gamma = gamma_of(&frame, jet.vals, jet.grads);
            strain.push(StrainRow { element: e, y1: y[0], y2: y[1], e33: transverse_strain(&frame, &gamma, lambda, mu) });
        }
        let y = mesh.centroid(e);
        let frame = SurfaceFrame::at(chart, y).context("post-processing stage")?;
        let jet = space.eval(x, e, [0.0, 0.0]);
        for x3 in THICKNESS_SLICES {
            // the first-order correction ξ¹ is not determined by the limit problem
            let u = reconstruct_u1(&frame, jet.vals, jet.grads, [0.0; 3], x3);
            displacement.push(DisplacementRow { element: e, y1: y[0], y2: y[1], x3, u1: u[0], u2: u[1], u3: u[2] });
        }
    }

    let multipliers = report.multipliers(qp);
    let mut contact = Vec::with_capacity(multipliers.len());
    for &(d, m) in &multipliers {
        let y = match qp.dofs.get(d).map(|i| i.kind) {
            Some(shellvi::DofKind::ElementNormal { element }) => mesh.centroid(element),
            Some(shellvi::DofKind::Hermite { node, .. }) => mesh.nodes[node],
            _ => [f64::NAN, f64::NAN],
        };
        let area = qp.dofs.get(d).map_or(0.0, |i| i.lumped_area);
        let pressure = if area > 0.0 { m / area } else { f64::NAN };
        contact.push(ContactRow { dof: d, y1: y[0], y2: y[1], multiplier: m, pressure });
    }

    let penalty_share = match assembled {
        Assembled::Flexural(sys) => Some(sys.penalty_share(x)),
        Assembled::Membrane(_) => None,
    };
    let summary = Summary {
        problem: config.problem,
        method: report.method,
        converged: report.converged,
        iterations: report.iterations,
        dofs: qp.dim(),
        constrained: qp.constrained().len(),
        active: report.active_set.len(),
        energy: report.energy,
        residual: report.complementarity_residual,
        penalty_share,
        min_multiplier: multipliers.iter().map(|m| m.1).reduce(f64::min),
        warnings: qp.warnings.clone(),
    };
    Ok(ResultBundle { summary, fields, strain, displacement, contact, nodal, element_normal, report })
}

/// Full pipeline without writing any file.
pub fn run(config: &RunConfig, overrides: &Overrides) -> Result<(Problem, ResultBundle)> {
    let problem = build(config)?;
    let report = solve(&problem, overrides)?;
    let bundle = postprocess(&problem, report)?;
    Ok((problem, bundle))
}
