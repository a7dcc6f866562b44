use std::io::{BufRead, Write};

use super::{ChartJet, Rect, Vec3};
use crate::error::{Error, Result};

/// Chart data sampled on a uniform grid, interpolated bicubically.
///
/// Each of the position and derivative fields is interpolated independently
/// with the Keys cubic-convolution kernel (`a = −1/2`); the interpolant
/// reproduces the tabulated rows exactly at grid nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedSurface {
    nx: usize,
    ny: usize,
    domain: Rect,
    position: Vec<Vec3>,
    d1: Vec<Vec3>,
    d2: Vec<Vec3>,
    second: Option<SecondPartials>,
}

#[derive(Clone, Debug, PartialEq)]
struct SecondPartials {
    d11: Vec<Vec3>,
    d12: Vec<Vec3>,
    d22: Vec<Vec3>,
}

/// Columns per row: `y1 y2` followed by θ, ∂₁θ, ∂₂θ, ∂₁₁θ, ∂₁₂θ, ∂₂₂θ.
pub const FULL_COLUMNS: usize = 20;
/// Rows without second partials (not usable for curvature).
pub const FIRST_ORDER_COLUMNS: usize = 11;

impl TabulatedSurface {
    /// Sample a jet-valued function on an `nx × ny` node grid (row-major, y1 fastest).
    pub fn sample<F>(nx: usize, ny: usize, domain: Rect, mut f: F) -> Result<Self>
    where
        F: FnMut([f64; 2]) -> Result<ChartJet>,
    {
        check_grid(nx, ny)?;
        let mut jets = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                jets.push(f(grid_point(&domain, nx, ny, i, j))?);
            }
        }
        Ok(Self::from_jets(nx, ny, domain, &jets))
    }

    fn from_jets(nx: usize, ny: usize, domain: Rect, jets: &[ChartJet]) -> Self {
        TabulatedSurface {
            nx,
            ny,
            domain,
            position: jets.iter().map(|j| j.position).collect(),
            d1: jets.iter().map(|j| j.d1).collect(),
            d2: jets.iter().map(|j| j.d2).collect(),
            second: Some(SecondPartials {
                d11: jets.iter().map(|j| j.d11).collect(),
                d12: jets.iter().map(|j| j.d12).collect(),
                d22: jets.iter().map(|j| j.d22).collect(),
            }),
        }
    }

    pub fn domain(&self) -> Rect {
        self.domain
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn has_second_derivatives(&self) -> bool {
        self.second.is_some()
    }

    pub fn node(&self, i: usize, j: usize) -> [f64; 2] {
        grid_point(&self.domain, self.nx, self.ny, i, j)
    }

    /// Overwrite one tabulated `∂₁₁θ` entry. Used to inject faults in tests.
    pub fn set_d11(&mut self, i: usize, j: usize, value: Vec3) -> Result<()> {
        let k = j * self.nx + i;
        match &mut self.second {
            Some(s) if k < s.d11.len() => {
                s.d11[k] = value;
                Ok(())
            }
            Some(_) => Err(Error::Dimension(format!("node ({i}, {j}) outside table"))),
            None => Err(Error::Capability("table has no second derivatives".into())),
        }
    }

    pub(crate) fn interpolate(&self, y: [f64; 2]) -> Result<ChartJet> {
        let second = self.second.as_ref().ok_or_else(|| {
            Error::Capability("tabulated chart supplies no second derivatives".into())
        })?;
        let (ix, wx) = keys_weights(y[0], self.domain.y1, self.nx);
        let (iy, wy) = keys_weights(y[1], self.domain.y2, self.ny);
        let field = |data: &[Vec3]| {
            let mut acc = Vec3::zeros();
            for (b, wyb) in wy.iter().enumerate() {
                for (a, wxa) in wx.iter().enumerate() {
                    acc += self.extended(data, ix + a as isize - 1, iy + b as isize - 1) * (wxa * wyb);
                }
            }
            acc
        };
        Ok(ChartJet {
            position: field(&self.position),
            d1: field(&self.d1),
            d2: field(&self.d2),
            d11: field(&second.d11),
            d12: field(&second.d12),
            d22: field(&second.d22),
        })
    }

    // Node value with cubic-convolution ghost extension f(-1) = 3f(0) − 3f(1) + f(2).
    fn extended(&self, data: &[Vec3], i: isize, j: isize) -> Vec3 {
        fn ghost(n: isize, k: isize, f: impl Fn(isize) -> Vec3) -> Vec3 {
            if k < 0 {
                f(0) * 3.0 - f(1) * 3.0 + f(2)
            } else if k >= n {
                f(n - 1) * 3.0 - f(n - 2) * 3.0 + f(n - 3)
            } else {
                f(k)
            }
        }
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        ghost(ny, j, |jj| ghost(nx, i, |ii| data[(jj * nx + ii) as usize]))
    }

    /// Parse the whitespace-separated table format.
    ///
    /// Header: `nx ny y1_min y1_max y2_min y2_max`, then `nx·ny` rows with y1
    /// varying fastest. Rows carry 20 columns (`y1 y2`, θ, ∂₁θ, ∂₂θ, ∂₁₁θ,
    /// ∂₁₂θ, ∂₂₂θ) or 11 columns when second partials are absent. Blank
    /// lines and `#` comments are ignored.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l))
            .filter(|(_, l)| match l {
                Ok(s) => {
                    let t = s.trim();
                    !t.is_empty() && !t.starts_with('#')
                }
                Err(_) => true,
            });

        let (hline, header) = lines
            .next()
            .ok_or(Error::Parse { line: 0, msg: "empty table".into() })?;
        let header = parse_numbers(&header?, hline)?;
        if header.len() != 6 {
            return Err(Error::Parse { line: hline, msg: "header needs nx ny y1_min y1_max y2_min y2_max".into() });
        }
        let as_count = |v: f64| -> Result<usize> {
            if v.fract() == 0.0 && v >= 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::Parse { line: hline, msg: format!("grid size {v} is not a count") })
            }
        };
        let (nx, ny) = (as_count(header[0])?, as_count(header[1])?);
        check_grid(nx, ny)?;
        let domain = Rect::new(header[2], header[3], header[4], header[5])?;

        let mut rows = Vec::with_capacity(nx * ny);
        let mut width = None;
        for (lineno, line) in lines {
            let vals = parse_numbers(&line?, lineno)?;
            if vals.len() != FULL_COLUMNS && vals.len() != FIRST_ORDER_COLUMNS {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected {FULL_COLUMNS} or {FIRST_ORDER_COLUMNS} columns, found {}", vals.len()),
                });
            }
            if *width.get_or_insert(vals.len()) != vals.len() {
                return Err(Error::Parse { line: lineno, msg: "inconsistent column count".into() });
            }
            let k = rows.len();
            if k >= nx * ny {
                return Err(Error::Parse { line: lineno, msg: "more rows than nx*ny".into() });
            }
            let expect = grid_point(&domain, nx, ny, k % nx, k / nx);
            let tol = 1e-9 * domain.diameter();
            if (vals[0] - expect[0]).abs() > tol || (vals[1] - expect[1]).abs() > tol {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("row coordinates ({}, {}) do not match grid node ({}, {})", vals[0], vals[1], expect[0], expect[1]),
                });
            }
            rows.push(vals);
        }
        if rows.len() != nx * ny {
            return Err(Error::Parse { line: 0, msg: format!("expected {} rows, found {}", nx * ny, rows.len()) });
        }

        let col = |r: &Vec<f64>, c: usize| Vec3::new(r[c], r[c + 1], r[c + 2]);
        let pick = |c: usize| rows.iter().map(|r| col(r, c)).collect::<Vec<_>>();
        let second = (width == Some(FULL_COLUMNS)).then(|| SecondPartials { d11: pick(11), d12: pick(14), d22: pick(17) });
        Ok(TabulatedSurface { nx, ny, domain, position: pick(2), d1: pick(5), d2: pick(8), second })
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        let d = self.domain;
        writeln!(w, "{} {} {} {} {} {}", self.nx, self.ny, d.y1[0], d.y1[1], d.y2[0], d.y2[1])?;
        for k in 0..self.nx * self.ny {
            let y = self.node(k % self.nx, k / self.nx);
            let mut cols = vec![y[0], y[1]];
            let mut fields = vec![&self.position, &self.d1, &self.d2];
            if let Some(s) = &self.second {
                fields.extend([&s.d11, &s.d12, &s.d22]);
            }
            for f in fields {
                cols.extend(f[k].iter());
            }
            let line: Vec<String> = cols.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

fn check_grid(nx: usize, ny: usize) -> Result<()> {
    if nx < 3 || ny < 3 {
        return Err(Error::Parameter(format!("tabulated chart needs at least 3x3 nodes, got {nx}x{ny}")));
    }
    Ok(())
}

fn grid_point(domain: &Rect, nx: usize, ny: usize, i: usize, j: usize) -> [f64; 2] {
    let t = |range: [f64; 2], n: usize, k: usize| {
        if k == n - 1 {
            range[1]
        } else {
            range[0] + (range[1] - range[0]) * k as f64 / (n - 1) as f64
        }
    };
    [t(domain.y1, nx, i), t(domain.y2, ny, j)]
}

fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| Error::Parse { line: lineno, msg: format!("not a number: {tok:?}") })
        })
        .collect()
}

/// Cell index and Keys weights for nodes `i−1 … i+2`.
fn keys_weights(y: f64, range: [f64; 2], n: usize) -> (isize, [f64; 4]) {
    let t = (y - range[0]) / (range[1] - range[0]) * (n - 1) as f64;
    let i = (t.floor() as isize).clamp(0, n as isize - 2);
    let s = t - i as f64;
    let (s2, s3) = (s * s, s * s * s);
    (
        i,
        [
            0.5 * (-s3 + 2.0 * s2 - s),
            0.5 * (3.0 * s3 - 5.0 * s2 + 2.0),
            0.5 * (-3.0 * s3 + 4.0 * s2 + s),
            0.5 * (s3 - s2),
        ],
    )
}
