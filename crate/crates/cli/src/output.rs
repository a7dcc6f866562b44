//! CSV tables, run summary and legacy VTK export.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use shellvi::discretization::Mesh;
use shellvi::Chart;

use crate::config::ProblemKind;
use crate::pipeline::{FieldRow, ResultBundle, Summary};

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<T: DeserializeOwned, R: Read>(r: R) -> Result<Vec<T>> {
    let mut reader = csv::Reader::from_reader(r);
    Ok(reader.deserialize().collect::<std::result::Result<Vec<T>, _>>()?)
}

pub fn read_fields(path: &Path) -> Result<Vec<FieldRow>> {
    read_csv(File::open(path).with_context(|| format!("opening {}", path.display()))?)
}

fn timestamp_line() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("generated at unix time {secs}")
}

pub fn format_summary(s: &Summary) -> String {
    let mut t = String::new();
    let problem = match s.problem {
        ProblemKind::Membrane => "membrane",
        ProblemKind::Flexural => "flexural",
    };
    let _ = writeln!(t, "problem = {problem}");
    let _ = writeln!(t, "method = {}", s.method);
    let _ = writeln!(t, "converged = {}", s.converged);
    let _ = writeln!(t, "iterations = {}", s.iterations);
    let _ = writeln!(t, "dofs = {}", s.dofs);
    let _ = writeln!(t, "constrained = {}", s.constrained);
    let _ = writeln!(t, "active = {}", s.active);
    let _ = writeln!(t, "energy = {:e}", s.energy);
    let _ = writeln!(t, "complementarity_residual = {:e}", s.residual);
    if let Some(m) = s.min_multiplier {
        let _ = writeln!(t, "min_multiplier = {m:e}");
    }
    if let Some(p) = s.penalty_share {
        let _ = writeln!(t, "penalty_share = {p:e}");
    }
    for w in &s.warnings {
        let _ = writeln!(t, "warning = {w}");
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Point,
    Cell,
}

#[derive(Clone, Copy, Debug)]
pub struct VtkField<'a> {
    pub name: &'a str,
    pub location: Location,
    pub values: &'a [f64],
}

/// Legacy ASCII unstructured grid of quads. Points sit on the surface when a
/// chart is given, on the parameter plane otherwise.
pub fn write_vtk<W: Write>(mesh: &Mesh, chart: Option<&Chart>, fields: &[VtkField<'_>], title: &str, w: W) -> Result<()> {
    let (np, nc) = (mesh.num_nodes(), mesh.num_elements());
    for f in fields {
        let expected = match f.location {
            Location::Point => np,
            Location::Cell => nc,
        };
        if f.values.len() != expected {
            bail!("field '{}' has {} values, mesh needs {expected}", f.name, f.values.len());
        }
        if f.name.is_empty() || f.name.contains(char::is_whitespace) {
            bail!("invalid field name '{}'", f.name);
        }
    }
    if title.contains('\n') || title.len() > 255 {
        bail!("VTK title must be a single line of at most 255 characters");
    }
    let mut w = BufWriter::new(w);
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "{title}")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(w, "POINTS {np} double")?;
    for y in &mesh.nodes {
        let p = match chart {
            Some(c) => {
                let v = c.eval(*y)?.position;
                [v.x, v.y, v.z]
            }
            None => [y[0], y[1], 0.0],
        };
        writeln!(w, "{} {} {}", p[0], p[1], p[2])?;
    }
    writeln!(w, "CELLS {nc} {}", 5 * nc)?;
    for e in &mesh.elements {
        writeln!(w, "4 {} {} {} {}", e[0], e[1], e[2], e[3])?;
    }
    writeln!(w, "CELL_TYPES {nc}")?;
    for _ in 0..nc {
        writeln!(w, "9")?;
    }
    for (loc, header, count) in [(Location::Point, "POINT_DATA", np), (Location::Cell, "CELL_DATA", nc)] {
        let group: Vec<_> = fields.iter().filter(|f| f.location == loc).collect();
        if group.is_empty() {
            continue;
        }
        writeln!(w, "{header} {count}")?;
        for f in group {
            writeln!(w, "SCALARS {} double 1", f.name)?;
            writeln!(w, "LOOKUP_TABLE default")?;
            for v in f.values {
                writeln!(w, "{v}")?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn export_vtk(mesh: &Mesh, chart: Option<&Chart>, fields: &[VtkField<'_>], title: &str, path: &Path) -> Result<()> {
    // validate before touching the file system
    write_vtk(mesh, chart, fields, title, std::io::sink())?;
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_vtk(mesh, chart, fields, title, f)
}

/// Files written by [`write_results`].
pub const RESULT_FILES: [&str; 6] = ["fields.csv", "strain.csv", "displacement.csv", "contact.csv", "summary.txt", "result.vtk"];

pub fn write_results(
    bundle: &ResultBundle,
    mesh: &Mesh,
    chart: &Chart,
    dir: &Path,
    timestamp: bool,
    vtk: bool,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    let mut create = |name: &str| -> Result<BufWriter<File>> {
        let p = dir.join(name);
        let f = File::create(&p).with_context(|| format!("creating {}", p.display()))?;
        written.push(p);
        Ok(BufWriter::new(f))
    };
    write_csv(&bundle.fields, create("fields.csv")?)?;
    write_csv(&bundle.strain, create("strain.csv")?)?;
    write_csv(&bundle.displacement, create("displacement.csv")?)?;
    write_csv(&bundle.contact, create("contact.csv")?)?;
    let mut s = create("summary.txt")?;
    if timestamp {
        writeln!(s, "# {}", timestamp_line())?;
    }
    s.write_all(format_summary(&bundle.summary).as_bytes())?;
    s.flush()?;
    drop(s);
    if vtk {
        let title = if timestamp { format!("shellvi result, {}", timestamp_line()) } else { "shellvi result".into() };
        let comp = |k: usize| bundle.nodal.iter().map(|v| v[k]).collect::<Vec<_>>();
        let (xi1, xi2, xi3) = (comp(0), comp(1), comp(2));
        let flags: Vec<f64> = bundle.fields.iter().map(|r| r.active_flag as f64).collect();
        let mut fields = vec![
            VtkField { name: "xi1", location: Location::Point, values: &xi1 },
            VtkField { name: "xi2", location: Location::Point, values: &xi2 },
        ];
        match bundle.summary.problem {
            ProblemKind::Membrane => {
                fields.push(VtkField { name: "xi3", location: Location::Cell, values: &bundle.element_normal });
                fields.push(VtkField { name: "active", location: Location::Cell, values: &flags });
            }
            ProblemKind::Flexural => {
                fields.push(VtkField { name: "xi3", location: Location::Point, values: &xi3 });
                fields.push(VtkField { name: "active", location: Location::Point, values: &flags });
            }
        }
        let p = dir.join("result.vtk");
        export_vtk(mesh, Some(chart), &fields, &title, &p)?;
        written.push(p);
    }
    Ok(written)
}
