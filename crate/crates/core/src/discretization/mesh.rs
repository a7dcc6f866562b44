use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::Rect;

/// Side of the rectangular parameter domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Y1Min,
    Y1Max,
    Y2Min,
    Y2Max,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Y1Min, Side::Y1Max, Side::Y2Min, Side::Y2Max];
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Y1Min => "y1_min",
            Side::Y1Max => "y1_max",
            Side::Y2Min => "y2_min",
            Side::Y2Max => "y2_max",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "y1_min" | "y1=0" | "left" => Ok(Side::Y1Min),
            "y1_max" | "right" => Ok(Side::Y1Max),
            "y2_min" | "y2=0" | "bottom" => Ok(Side::Y2Min),
            "y2_max" | "top" => Ok(Side::Y2Max),
            other => Err(Error::Parameter(format!("unknown boundary side {other:?}"))),
        }
    }
}

/// Which boundary edges belong to the clamped part `γ₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gamma0 {
    All,
    Sides(Vec<Side>),
}

impl Gamma0 {
    pub fn contains(&self, side: Side) -> bool {
        match self {
            Gamma0::All => true,
            Gamma0::Sides(s) => s.contains(&side),
        }
    }

    pub fn is_whole_boundary(&self) -> bool {
        Side::ALL.iter().all(|s| self.contains(*s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub side: Side,
    pub gamma0: bool,
}

/// Structured quadrilateral grid over a rectangle.
///
/// Node `(i, j)` has index `j·(nx+1) + i`; element `(i, j)` has index
/// `j·nx + i` and counter-clockwise connectivity starting at its lower-left node.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub domain: Rect,
    pub nx: usize,
    pub ny: usize,
    pub nodes: Vec<[f64; 2]>,
    pub elements: Vec<[usize; 4]>,
    pub boundary: Vec<BoundaryEdge>,
    on_gamma0: Vec<bool>,
}

pub fn build_mesh(nx: usize, ny: usize, domain: Rect, gamma0: &Gamma0) -> Result<Mesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::Parameter(format!("mesh needs at least one element per direction, got {nx}x{ny}")));
    }
    let coord = |range: [f64; 2], n: usize, k: usize| {
        if k == n {
            range[1]
        } else {
            range[0] + (range[1] - range[0]) * k as f64 / n as f64
        }
    };
    let node = |i: usize, j: usize| j * (nx + 1) + i;

    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push([coord(domain.y1, nx, i), coord(domain.y2, ny, j)]);
        }
    }
    let mut elements = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            elements.push([node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)]);
        }
    }

    let mut boundary = Vec::with_capacity(2 * (nx + ny));
    let mut edge = |a: usize, b: usize, side: Side| {
        boundary.push(BoundaryEdge { nodes: [a, b], side, gamma0: gamma0.contains(side) })
    };
    for i in 0..nx {
        edge(node(i, 0), node(i + 1, 0), Side::Y2Min);
    }
    for j in 0..ny {
        edge(node(nx, j), node(nx, j + 1), Side::Y1Max);
    }
    for i in (0..nx).rev() {
        edge(node(i + 1, ny), node(i, ny), Side::Y2Max);
    }
    for j in (0..ny).rev() {
        edge(node(0, j + 1), node(0, j), Side::Y1Min);
    }

    let mut on_gamma0 = vec![false; nodes.len()];
    for e in boundary.iter().filter(|e| e.gamma0) {
        on_gamma0[e.nodes[0]] = true;
        on_gamma0[e.nodes[1]] = true;
    }
    Ok(Mesh { domain, nx, ny, nodes, elements, boundary, on_gamma0 })
}

impl Mesh {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn element_size(&self) -> [f64; 2] {
        [self.domain.width() / self.nx as f64, self.domain.height() / self.ny as f64]
    }

    pub fn node_on_gamma0(&self, node: usize) -> bool {
        self.on_gamma0[node]
    }

    pub fn gamma0_edges(&self) -> usize {
        self.boundary.iter().filter(|e| e.gamma0).count()
    }

    pub fn clamps_whole_boundary(&self) -> bool {
        self.boundary.iter().all(|e| e.gamma0)
    }

    pub fn centroid(&self, element: usize) -> [f64; 2] {
        let [a, _, c, _] = self.elements[element];
        [0.5 * (self.nodes[a][0] + self.nodes[c][0]), 0.5 * (self.nodes[a][1] + self.nodes[c][1])]
    }

    /// Map a reference point of `[−1, 1]²` into element `element`.
    pub fn map_point(&self, element: usize, xi: [f64; 2]) -> [f64; 2] {
        let [a, _, c, _] = self.elements[element];
        let (lo, hi) = (self.nodes[a], self.nodes[c]);
        [
            0.5 * (lo[0] + hi[0]) + 0.5 * (hi[0] - lo[0]) * xi[0],
            0.5 * (lo[1] + hi[1]) + 0.5 * (hi[1] - lo[1]) * xi[1],
        ]
    }

    /// Physical edge lengths `(h₁, h₂)` of one element.
    pub fn element_extent(&self, element: usize) -> [f64; 2] {
        let [a, _, c, _] = self.elements[element];
        [self.nodes[c][0] - self.nodes[a][0], self.nodes[c][1] - self.nodes[a][1]]
    }
}
