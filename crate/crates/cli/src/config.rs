//! Run configuration, read from a TOML file with one table per section.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use shellvi::discretization::{Gamma0, Material, Side};
use shellvi::solver::SolverMethod;
use shellvi::tensors::{load_resultant, LoadProfile, LoadResultant};
use shellvi::{Chart, Rect, TabulatedSurface};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Membrane,
    Flexural,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub chart: ChartSpec,
    pub material: MaterialSpec,
    pub shell: ShellSpec,
    pub mesh: MeshSpec,
    #[serde(default)]
    pub load: LoadSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub output: OutputSpec,
    /// Directory relative paths are resolved against (the config file's).
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    /// plane | cylinder | sphere_graph | paraboloid | tabulated
    pub kind: String,
    #[serde(default)]
    pub radius: Option<f64>,
    /// `[y1_min, y1_max, y2_min, y2_max]`; tabulated charts take theirs from the file.
    #[serde(default)]
    pub domain: Option<[f64; 4]>,
    #[serde(default)]
    pub file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub lambda: f64,
    pub mu: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShellSpec {
    /// Half-thickness.
    pub eps: f64,
    /// Inextensibility penalty for flexural runs; default `10³ μ ε`.
    #[serde(default)]
    pub kappa: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Gamma0Spec {
    One(String),
    Many(Vec<String>),
}

impl Default for Gamma0Spec {
    fn default() -> Self {
        Gamma0Spec::One("all".into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSpec {
    pub nx: usize,
    pub ny: usize,
    #[serde(default)]
    pub gamma0: Gamma0Spec,
}

/// Body force `f^i(x₃)` as ascending polynomial coefficients and the
/// upper-face traction `h^i₊`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadSpec {
    #[serde(default)]
    pub f1: Vec<f64>,
    #[serde(default)]
    pub f2: Vec<f64>,
    #[serde(default)]
    pub f3: Vec<f64>,
    #[serde(default)]
    pub h: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default = "default_method")]
    pub method: String,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_relax")]
    pub relax: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
}

fn default_method() -> String {
    "activeset".into()
}
fn default_tol() -> f64 {
    1e-10
}
fn default_relax() -> f64 {
    1.5
}
fn default_max_iter() -> usize {
    200_000
}

impl Default for SolverSpec {
    fn default() -> Self {
        SolverSpec { method: default_method(), tol: default_tol(), relax: default_relax(), max_iter: default_max_iter() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_true")]
    pub vtk: bool,
}

fn default_dir() -> PathBuf {
    PathBuf::from("output")
}
fn default_true() -> bool {
    true
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { dir: default_dir(), vtk: true }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: RunConfig = toml::from_str(text).context("parsing configuration")?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_toml(&text, &base).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.resolve(&self.output.dir)
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.shell;
        if !(s.eps > 0.0 && s.eps.is_finite()) {
            bail!("shell.eps must be positive, got {}", s.eps);
        }
        Material::new(self.material.lambda, self.material.mu)?;
        if self.mesh.nx == 0 || self.mesh.ny == 0 {
            bail!("mesh.nx and mesh.ny must be at least 1");
        }
        let g0 = self.gamma0()?;
        if self.problem == ProblemKind::Membrane && !g0.is_whole_boundary() {
            bail!("membrane problems must be clamped on the whole boundary (mesh.gamma0 = \"all\")");
        }
        if let Some(k) = s.kappa {
            if !(k > 0.0) {
                bail!("shell.kappa must be positive, got {k}");
            }
        }
        self.method()?;
        if !(self.solver.tol > 0.0) {
            bail!("solver.tol must be positive");
        }
        if !(self.solver.relax > 0.0 && self.solver.relax < 2.0) {
            bail!("solver.relax must lie in (0, 2)");
        }
        self.profile_degree_check()?;
        Ok(())
    }

    fn profile_degree_check(&self) -> Result<()> {
        load_resultant(&self.load_profile(), self.load.h, self.shell.eps)?;
        Ok(())
    }

    pub fn method(&self) -> Result<SolverMethod> {
        self.solver.method.parse().map_err(|e| anyhow::anyhow!("solver.method: {e}"))
    }

    pub fn material(&self) -> Material {
        Material { lambda: self.material.lambda, mu: self.material.mu }
    }

    pub fn gamma0(&self) -> Result<Gamma0> {
        let names: Vec<&str> = match &self.mesh.gamma0 {
            Gamma0Spec::One(s) => vec![s.as_str()],
            Gamma0Spec::Many(v) => v.iter().map(String::as_str).collect(),
        };
        if names.iter().any(|n| n.eq_ignore_ascii_case("all")) {
            return Ok(Gamma0::All);
        }
        let sides = names
            .iter()
            .map(|n| n.parse::<Side>().map_err(|e| anyhow::anyhow!("mesh.gamma0: {e}")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Gamma0::Sides(sides))
    }

    pub fn load_profile(&self) -> LoadProfile {
        LoadProfile { coeffs: [self.load.f1.clone(), self.load.f2.clone(), self.load.f3.clone()] }
    }

    pub fn load_resultant(&self) -> Result<LoadResultant> {
        Ok(load_resultant(&self.load_profile(), self.load.h, self.shell.eps)?)
    }

    pub fn chart(&self) -> Result<Chart> {
        let c = &self.chart;
        let domain = || -> Result<Rect> {
            let d = c.domain.context("chart.domain is required for this chart kind")?;
            Ok(Rect::new(d[0], d[1], d[2], d[3])?)
        };
        let radius = || c.radius.context("chart.radius is required for this chart kind");
        let chart = match c.kind.as_str() {
            "plane" => Chart::plane(domain()?),
            "cylinder" => Chart::cylinder(radius()?, domain()?)?,
            "sphere_graph" => Chart::sphere_graph(radius()?, domain()?)?,
            "paraboloid" => Chart::paraboloid(radius()?, domain()?)?,
            "tabulated" => {
                let file = c.file.as_ref().context("chart.file is required for tabulated charts")?;
                let path = self.resolve(file);
                let f = fs::File::open(&path).with_context(|| format!("opening {}", path.display()))?;
                let surface = TabulatedSurface::read(std::io::BufReader::new(f))
                    .with_context(|| format!("reading {}", path.display()))?;
                Chart::tabulated(surface)
            }
            other => bail!("unknown chart kind '{other}'"),
        };
        Ok(chart)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MEMBRANE: &str = r#"
problem = "membrane"

[chart]
kind = "sphere_graph"
radius = 2.0
domain = [-1.0, 1.0, -1.0, 1.0]

[material]
lambda = 1.0
mu = 1.0

[shell]
eps = 0.01

[mesh]
nx = 4
ny = 4

[load]
h = [0.0, 0.0, -1.0]
"#;

    #[test]
    fn parses_with_defaults() {
        let c = RunConfig::from_toml(MEMBRANE, Path::new(".")).unwrap();
        assert_eq!(c.problem, ProblemKind::Membrane);
        assert_eq!(c.method().unwrap(), SolverMethod::ActiveSet);
        assert_eq!(c.solver.tol, 1e-10);
        assert_eq!(c.gamma0().unwrap(), Gamma0::All);
        assert_eq!(c.load_resultant().unwrap().p, [0.0, 0.0, -1.0]);
        let again = RunConfig::from_toml(&c.to_toml().unwrap(), Path::new(".")).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rejects_partial_clamping_for_membranes() {
        let text = MEMBRANE.replace("ny = 4", "ny = 4\ngamma0 = [\"y1_min\"]");
        assert!(RunConfig::from_toml(&text, Path::new(".")).is_err());
    }

    #[test]
    fn rejects_bad_values() {
        for (from, to) in [("eps = 0.01", "eps = 0.0"), ("mu = 1.0", "mu = -1.0"), ("nx = 4", "nx = 0")] {
            let text = MEMBRANE.replace(from, to);
            assert!(RunConfig::from_toml(&text, Path::new(".")).is_err(), "{to}");
        }
        assert!(RunConfig::from_toml(&MEMBRANE.replace("radius = 2.0", "radius = 2.0\ncolour = 1"), Path::new(".")).is_err());
    }

    #[test]
    fn named_sides() {
        let text = MEMBRANE
            .replace("\"membrane\"", "\"flexural\"")
            .replace("ny = 4", "ny = 4\ngamma0 = [\"y1_min\", \"y2_max\"]");
        let c = RunConfig::from_toml(&text, Path::new(".")).unwrap();
        assert_eq!(c.gamma0().unwrap(), Gamma0::Sides(vec![Side::Y1Min, Side::Y2Max]));
    }
}
