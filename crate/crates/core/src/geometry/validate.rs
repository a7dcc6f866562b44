use nalgebra::Matrix2;

use super::{Chart, ChartJet, ChartKind, SurfaceFrame, Vec3, DEGENERACY_THRESHOLD};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationOptions {
    /// Sample points per direction, boundaries included.
    pub resolution: usize,
    /// Central-difference step.
    pub step: f64,
    /// Largest accepted closed-form vs finite-difference discrepancy.
    pub threshold: f64,
    /// Largest accepted Codazzi asymmetry `|b^σ_1|2 − b^σ_2|1|`.
    pub codazzi_tol: f64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions { resolution: 10, step: 1e-5, threshold: 1e-6, codazzi_tol: 1e-6 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartValidation {
    pub samples: usize,
    pub max_discrepancy: f64,
    pub worst_point: Option<[f64; 2]>,
    pub min_cross_norm: f64,
    pub max_metric_defect: f64,
    pub max_normal_defect: f64,
    pub max_codazzi_defect: f64,
    pub failures: Vec<String>,
}

impl ChartValidation {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn max_abs(v: Vec3) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Compare the closed-form partials of `chart` against central differences.
///
/// The grid covers the whole domain; tabulated charts are additionally
/// probed at every table node. Problems are collected in the report rather
/// than returned as errors.
pub fn validate_chart(chart: &Chart, opts: &ValidationOptions) -> ChartValidation {
    let dom = chart.domain();
    let n = opts.resolution.max(2);
    let mut points = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let s = i as f64 / (n - 1) as f64;
            let t = j as f64 / (n - 1) as f64;
            points.push([
                dom.y1[0] + s * dom.width(),
                dom.y2[0] + t * dom.height(),
            ]);
        }
    }
    if let ChartKind::Tabulated(table) = chart.kind() {
        let (tx, ty) = table.shape();
        for j in 0..ty {
            for i in 0..tx {
                points.push(table.node(i, j));
            }
        }
    }

    let mut report = ChartValidation {
        samples: points.len(),
        max_discrepancy: 0.0,
        worst_point: None,
        min_cross_norm: f64::INFINITY,
        max_metric_defect: 0.0,
        max_normal_defect: 0.0,
        max_codazzi_defect: 0.0,
        failures: Vec::new(),
    };

    for y in points {
        match probe(chart, y, opts.step) {
            Ok(disc) => {
                if disc > report.max_discrepancy || report.worst_point.is_none() {
                    report.max_discrepancy = report.max_discrepancy.max(disc);
                    report.worst_point = Some(y);
                }
            }
            Err(e) => {
                report.failures.push(format!("({}, {}): {e}", y[0], y[1]));
                continue;
            }
        }
        match SurfaceFrame::at(chart, y) {
            Ok(f) => {
                report.min_cross_norm = report.min_cross_norm.min(f.a1.cross(&f.a2).norm());
                let metric = (f.a_cov * f.a_con - Matrix2::identity()).abs().max();
                report.max_metric_defect = report.max_metric_defect.max(metric);
                let normal = (f.a3.norm() - 1.0)
                    .abs()
                    .max(f.a3.dot(&f.a1).abs())
                    .max(f.a3.dot(&f.a2).abs());
                report.max_normal_defect = report.max_normal_defect.max(normal);
                report.max_codazzi_defect = report.max_codazzi_defect.max(f.codazzi_defect());
            }
            Err(e) => report.failures.push(format!("({}, {}): {e}", y[0], y[1])),
        }
    }

    if report.max_discrepancy > opts.threshold {
        report.failures.push(format!(
            "derivative discrepancy {:e} exceeds {:e}",
            report.max_discrepancy, opts.threshold
        ));
    }
    if report.min_cross_norm < DEGENERACY_THRESHOLD {
        report.failures.push(format!("tangent vectors degenerate, |a1 x a2| = {:e}", report.min_cross_norm));
    }
    if report.max_codazzi_defect > opts.codazzi_tol {
        report.failures.push(format!(
            "Codazzi asymmetry {:e} exceeds {:e}",
            report.max_codazzi_defect, opts.codazzi_tol
        ));
    }
    report
}

// Max |closed form − central difference| over all first and second partials.
// Differences divide by the realised step (y+h) − (y−h).
fn probe(chart: &Chart, y: [f64; 2], step: f64) -> crate::Result<f64> {
    let c = chart.eval(y)?;
    let shifted = |alpha: usize| -> crate::Result<(ChartJet, ChartJet, f64)> {
        let (mut p, mut m) = (y, y);
        p[alpha] += step;
        m[alpha] -= step;
        Ok((chart.jet(p)?, chart.jet(m)?, p[alpha] - m[alpha]))
    };
    let (p1, m1, h1) = shifted(0)?;
    let (p2, m2, h2) = shifted(1)?;
    let checks = [
        c.d1 - (p1.position - m1.position) / h1,
        c.d2 - (p2.position - m2.position) / h2,
        c.d11 - (p1.d1 - m1.d1) / h1,
        c.d12 - (p2.d1 - m2.d1) / h2,
        c.d12 - (p1.d2 - m1.d2) / h1,
        c.d22 - (p2.d2 - m2.d2) / h2,
    ];
    Ok(checks.into_iter().map(max_abs).fold(0.0, f64::max))
}
