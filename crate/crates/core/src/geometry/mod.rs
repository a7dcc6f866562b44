//! Middle-surface charts and the differential geometry derived from them.
//!
//! A [`Chart`] maps a rectangle of the parameter plane into R³. Every chart
//! supplies closed-form first and second partial derivatives through
//! [`Chart::eval`]; [`SurfaceFrame::at`] turns those into metric, curvature
//! and connection coefficients, and [`validate_chart`] cross-checks the
//! closed forms against finite differences.

mod frame;
mod tabulated;
mod validate;

pub use frame::{SurfaceFrame, DEGENERACY_THRESHOLD};
pub use tabulated::TabulatedSurface;
pub use validate::{validate_chart, ChartValidation, ValidationOptions};

use nalgebra::Vector3;

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Axis-aligned rectangle `[y1_min, y1_max] × [y2_min, y2_max]` in chart coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub y1: [f64; 2],
    pub y2: [f64; 2],
}

impl Rect {
    pub fn new(y1_min: f64, y1_max: f64, y2_min: f64, y2_max: f64) -> Result<Self> {
        let ok = [y1_min, y1_max, y2_min, y2_max].iter().all(|v| v.is_finite())
            && y1_max > y1_min
            && y2_max > y2_min;
        if !ok {
            return Err(Error::Parameter(format!(
                "empty or non-finite rectangle [{y1_min}, {y1_max}] x [{y2_min}, {y2_max}]"
            )));
        }
        Ok(Rect { y1: [y1_min, y1_max], y2: [y2_min, y2_max] })
    }

    pub fn unit() -> Self {
        Rect { y1: [0.0, 1.0], y2: [0.0, 1.0] }
    }

    pub fn width(&self) -> f64 {
        self.y1[1] - self.y1[0]
    }

    pub fn height(&self) -> f64 {
        self.y2[1] - self.y2[0]
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn contains(&self, y: [f64; 2]) -> bool {
        let tol = 1e-12 * self.diameter();
        y[0] >= self.y1[0] - tol
            && y[0] <= self.y1[1] + tol
            && y[1] >= self.y2[0] - tol
            && y[1] <= self.y2[1] + tol
    }

    pub fn corners(&self) -> [[f64; 2]; 4] {
        [
            [self.y1[0], self.y2[0]],
            [self.y1[1], self.y2[0]],
            [self.y1[1], self.y2[1]],
            [self.y1[0], self.y2[1]],
        ]
    }
}

/// Position and all first and second partial derivatives of a chart at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartJet {
    pub position: Vec3,
    pub d1: Vec3,
    pub d2: Vec3,
    pub d11: Vec3,
    pub d12: Vec3,
    pub d22: Vec3,
}

impl ChartJet {
    pub fn first(&self, alpha: usize) -> Vec3 {
        if alpha == 0 {
            self.d1
        } else {
            self.d2
        }
    }

    /// `∂_β ∂_α θ`; symmetric in the two indices.
    pub fn second(&self, alpha: usize, beta: usize) -> Vec3 {
        match (alpha, beta) {
            (0, 0) => self.d11,
            (1, 1) => self.d22,
            _ => self.d12,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChartKind {
    /// `θ(y) = (y1, y2, 0)`.
    Plane,
    /// `θ(y) = (R cos y1, R sin y1, y2)`.
    Cylinder { radius: f64 },
    /// Upper spherical cap as a graph, `θ(y) = (y1, y2, √(R² − |y|²))`.
    SphereGraph { radius: f64 },
    /// `θ(y) = (y1, y2, |y|² / (2R))`, apex curvature `1/R`.
    Paraboloid { radius: f64 },
    Tabulated(TabulatedSurface),
}

impl ChartKind {
    pub fn name(&self) -> &'static str {
        match self {
            ChartKind::Plane => "plane",
            ChartKind::Cylinder { .. } => "cylinder",
            ChartKind::SphereGraph { .. } => "sphere_graph",
            ChartKind::Paraboloid { .. } => "paraboloid",
            ChartKind::Tabulated(_) => "tabulated",
        }
    }
}

/// A parametrised middle surface over a rectangular domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    kind: ChartKind,
    domain: Rect,
}

fn positive_radius(radius: f64) -> Result<f64> {
    if radius.is_finite() && radius > 0.0 {
        Ok(radius)
    } else {
        Err(Error::Parameter(format!("chart radius must be positive, got {radius}")))
    }
}

impl Chart {
    pub fn plane(domain: Rect) -> Self {
        Chart { kind: ChartKind::Plane, domain }
    }

    pub fn cylinder(radius: f64, domain: Rect) -> Result<Self> {
        let radius = positive_radius(radius)?;
        Ok(Chart { kind: ChartKind::Cylinder { radius }, domain })
    }

    /// The closed domain has to stay strictly inside the disk of radius `R`
    /// (with a margin for finite-difference probes).
    pub fn sphere_graph(radius: f64, domain: Rect) -> Result<Self> {
        let radius = positive_radius(radius)?;
        let margin = 1e-3 * domain.diameter();
        let far = domain
            .corners()
            .iter()
            .map(|c| c[0].hypot(c[1]))
            .fold(0.0_f64, f64::max);
        if far + margin >= radius {
            return Err(Error::Geometry(format!(
                "sphere graph of radius {radius} is not a graph over a domain reaching |y| = {far}"
            )));
        }
        Ok(Chart { kind: ChartKind::SphereGraph { radius }, domain })
    }

    pub fn paraboloid(radius: f64, domain: Rect) -> Result<Self> {
        let radius = positive_radius(radius)?;
        Ok(Chart { kind: ChartKind::Paraboloid { radius }, domain })
    }

    pub fn tabulated(surface: TabulatedSurface) -> Self {
        let domain = surface.domain();
        Chart { kind: ChartKind::Tabulated(surface), domain }
    }

    pub fn kind(&self) -> &ChartKind {
        &self.kind
    }

    pub fn domain(&self) -> Rect {
        self.domain
    }

    /// Evaluate the chart and its partials at a point of the domain.
    pub fn eval(&self, y: [f64; 2]) -> Result<ChartJet> {
        if !self.domain.contains(y) {
            return Err(Error::OutsideDomain(y[0], y[1]));
        }
        self.jet(y)
    }

    /// Same as [`Chart::eval`] without the domain test. Finite-difference
    /// probes step slightly past the boundary.
    pub(crate) fn jet(&self, y: [f64; 2]) -> Result<ChartJet> {
        let [y1, y2] = y;
        let zero = Vec3::zeros();
        let jet = match &self.kind {
            ChartKind::Plane => ChartJet {
                position: Vec3::new(y1, y2, 0.0),
                d1: Vec3::new(1.0, 0.0, 0.0),
                d2: Vec3::new(0.0, 1.0, 0.0),
                d11: zero,
                d12: zero,
                d22: zero,
            },
            ChartKind::Cylinder { radius: r } => {
                let (s, c) = y1.sin_cos();
                ChartJet {
                    position: Vec3::new(r * c, r * s, y2),
                    d1: Vec3::new(-r * s, r * c, 0.0),
                    d2: Vec3::new(0.0, 0.0, 1.0),
                    d11: Vec3::new(-r * c, -r * s, 0.0),
                    d12: zero,
                    d22: zero,
                }
            }
            ChartKind::SphereGraph { radius: r } => {
                let w2 = r * r - y1 * y1 - y2 * y2;
                if w2 <= 0.0 {
                    return Err(Error::Geometry(format!(
                        "sphere graph undefined at ({y1}, {y2}) for radius {r}"
                    )));
                }
                let w = w2.sqrt();
                let w3 = w2 * w;
                ChartJet {
                    position: Vec3::new(y1, y2, w),
                    d1: Vec3::new(1.0, 0.0, -y1 / w),
                    d2: Vec3::new(0.0, 1.0, -y2 / w),
                    d11: Vec3::new(0.0, 0.0, -(r * r - y2 * y2) / w3),
                    d12: Vec3::new(0.0, 0.0, -y1 * y2 / w3),
                    d22: Vec3::new(0.0, 0.0, -(r * r - y1 * y1) / w3),
                }
            }
            ChartKind::Paraboloid { radius: r } => ChartJet {
                position: Vec3::new(y1, y2, (y1 * y1 + y2 * y2) / (2.0 * r)),
                d1: Vec3::new(1.0, 0.0, y1 / r),
                d2: Vec3::new(0.0, 1.0, y2 / r),
                d11: Vec3::new(0.0, 0.0, 1.0 / r),
                d12: zero,
                d22: Vec3::new(0.0, 0.0, 1.0 / r),
            },
            ChartKind::Tabulated(t) => t.interpolate(y)?,
        };
        Ok(jet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Central differences of the closed-form position/derivatives.
    fn fd_jet(chart: &Chart, y: [f64; 2], h: f64) -> ChartJet {
        let at = |dy: [f64; 2]| chart.jet([y[0] + dy[0], y[1] + dy[1]]).unwrap();
        let (p1, m1) = (at([h, 0.0]), at([-h, 0.0]));
        let (p2, m2) = (at([0.0, h]), at([0.0, -h]));
        let c = chart.jet(y).unwrap();
        ChartJet {
            position: c.position,
            d1: (p1.position - m1.position) / (2.0 * h),
            d2: (p2.position - m2.position) / (2.0 * h),
            d11: (p1.d1 - m1.d1) / (2.0 * h),
            d12: (p2.d1 - m2.d1) / (2.0 * h),
            d22: (p2.d2 - m2.d2) / (2.0 * h),
        }
    }

    fn assert_jet_close(a: &ChartJet, b: &ChartJet, tol: f64) {
        for (u, v) in [(a.d1, b.d1), (a.d2, b.d2), (a.d11, b.d11), (a.d12, b.d12), (a.d22, b.d22)] {
            assert_abs_diff_eq!(u, v, epsilon = tol);
        }
    }

    #[test]
    fn plane_chart_is_affine() {
        let chart = Chart::plane(Rect::unit());
        let j = chart.eval([0.3, 0.7]).unwrap();
        assert_eq!(j.d1, Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(j.d2, Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(j.d11, Vec3::zeros());
        assert_eq!(j.d12, Vec3::zeros());
        assert_eq!(j.d22, Vec3::zeros());
    }

    #[test]
    fn unit_cylinder_at_origin() {
        let chart = Chart::cylinder(1.0, Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap()).unwrap();
        let j = chart.eval([0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(j.d1, Vec3::new(0.0, 1.0, 0.0), epsilon = 1e-15);
        assert_abs_diff_eq!(j.d2, Vec3::new(0.0, 0.0, 1.0), epsilon = 1e-15);
        assert_abs_diff_eq!(j.d11, Vec3::new(-1.0, 0.0, 0.0), epsilon = 1e-15);
        assert_eq!(j.d12, Vec3::zeros());
        assert_eq!(j.d22, Vec3::zeros());
        assert_jet_close(&j, &fd_jet(&chart, [0.0, 0.0], 1e-5), 1e-9);
    }

    #[test]
    fn sphere_graph_at_origin() {
        let chart = Chart::sphere_graph(2.0, Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap()).unwrap();
        let j = chart.eval([0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(j.d1, Vec3::new(1.0, 0.0, 0.0), epsilon = 1e-15);
        assert_abs_diff_eq!(j.d2, Vec3::new(0.0, 1.0, 0.0), epsilon = 1e-15);
        assert_abs_diff_eq!(j.d11, Vec3::new(0.0, 0.0, -0.5), epsilon = 1e-15);
        assert_abs_diff_eq!(j.d22, Vec3::new(0.0, 0.0, -0.5), epsilon = 1e-15);
        assert_abs_diff_eq!(j.d12, Vec3::zeros(), epsilon = 1e-15);
        assert_jet_close(&j, &fd_jet(&chart, [0.0, 0.0], 1e-5), 1e-9);
    }

    #[test]
    fn presets_match_finite_differences_off_axis() {
        let dom = Rect::new(-0.8, 0.8, -0.6, 0.9).unwrap();
        let charts = [
            Chart::cylinder(1.5, dom).unwrap(),
            Chart::sphere_graph(2.0, dom).unwrap(),
            Chart::paraboloid(0.7, dom).unwrap(),
        ];
        for chart in &charts {
            for y in [[0.3, -0.2], [-0.7, 0.8], [0.1, 0.5]] {
                let j = chart.eval(y).unwrap();
                assert_jet_close(&j, &fd_jet(chart, y, 1e-5), 1e-8);
            }
        }
    }

    #[test]
    fn outside_domain_is_rejected() {
        let chart = Chart::plane(Rect::unit());
        assert!(matches!(chart.eval([1.5, 0.5]), Err(Error::OutsideDomain(..))));
    }

    #[test]
    fn sphere_graph_must_fit_in_disk() {
        let dom = Rect::new(-2.0, 2.0, -2.0, 2.0).unwrap();
        assert!(matches!(Chart::sphere_graph(2.0, dom), Err(Error::Geometry(_))));
    }

    #[test]
    fn bad_rectangle_and_radius() {
        assert!(Rect::new(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(Chart::cylinder(-1.0, Rect::unit()).is_err());
    }
}
