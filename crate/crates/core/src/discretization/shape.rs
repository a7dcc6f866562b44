//! Reference shape functions on `[−1, 1]²`, returned in physical derivatives
//! for an axis-aligned element of extent `(h₁, h₂)`.

use nalgebra::Matrix2;

use crate::qp::HermiteSlot;

/// Value, gradient and Hessian of a scalar shape function.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ShapeEval {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: Matrix2<f64>,
}

/// Reference coordinates of the four element corners, counter-clockwise.
pub const CORNERS: [[f64; 2]; 4] = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];

// Separable f = X(ξ)·Y(η) with 1-D jets (value, d/dξ, d²/dξ²).
fn tensor(x: [f64; 3], y: [f64; 3], scale: [f64; 2]) -> ShapeEval {
    let (sx, sy) = (2.0 / scale[0], 2.0 / scale[1]);
    ShapeEval {
        value: x[0] * y[0],
        grad: [sx * x[1] * y[0], sy * x[0] * y[1]],
        hess: Matrix2::new(
            sx * sx * x[2] * y[0],
            sx * sy * x[1] * y[1],
            sx * sy * x[1] * y[1],
            sy * sy * x[0] * y[2],
        ),
    }
}

fn linear(t: f64, side: f64) -> [f64; 3] {
    [0.5 * (1.0 + side * t), 0.5 * side, 0.0]
}

/// Bilinear Lagrange function of corner `corner`.
pub fn q1(corner: usize, xi: [f64; 2], extent: [f64; 2]) -> ShapeEval {
    let c = CORNERS[corner];
    tensor(linear(xi[0], c[0]), linear(xi[1], c[1]), extent)
}

// Cubic Hermite value function for the node at `side ∈ {−1, +1}`.
fn hermite_value(t: f64, side: f64) -> [f64; 3] {
    let s = side;
    [
        0.25 * (2.0 + 3.0 * s * t - s * t * t * t),
        0.25 * (3.0 * s - 3.0 * s * t * t),
        -0.25 * 6.0 * s * t,
    ]
}

// Cubic Hermite slope function (unit reference derivative at its node).
fn hermite_slope(t: f64, side: f64) -> [f64; 3] {
    if side < 0.0 {
        [
            0.25 * (1.0 - t - t * t + t * t * t),
            0.25 * (-1.0 - 2.0 * t + 3.0 * t * t),
            0.25 * (-2.0 + 6.0 * t),
        ]
    } else {
        [
            0.25 * (-1.0 - t + t * t + t * t * t),
            0.25 * (-1.0 + 2.0 * t + 3.0 * t * t),
            0.25 * (2.0 + 6.0 * t),
        ]
    }
}

/// Bogner–Fox–Schmit bicubic Hermite function for `(corner, slot)`.
///
/// Derivative slots are scaled so that the degree of freedom is the physical
/// derivative `∂₁`, `∂₂` or `∂₁₂` of the interpolated field at the node.
pub fn bfs(corner: usize, slot: HermiteSlot, xi: [f64; 2], extent: [f64; 2]) -> ShapeEval {
    let c = CORNERS[corner];
    let (hx, hy) = (0.5 * extent[0], 0.5 * extent[1]);
    let scale = |v: [f64; 3], k: f64| v.map(|e| e * k);
    let (x, y) = match slot {
        HermiteSlot::Value => (hermite_value(xi[0], c[0]), hermite_value(xi[1], c[1])),
        HermiteSlot::D1 => (scale(hermite_slope(xi[0], c[0]), hx), hermite_value(xi[1], c[1])),
        HermiteSlot::D2 => (hermite_value(xi[0], c[0]), scale(hermite_slope(xi[1], c[1]), hy)),
        HermiteSlot::D12 => (scale(hermite_slope(xi[0], c[0]), hx), scale(hermite_slope(xi[1], c[1]), hy)),
    };
    tensor(x, y, extent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const EXTENT: [f64; 2] = [0.5, 0.25];

    #[test]
    fn q1_partition_of_unity_and_kronecker() {
        let xi = [0.3, -0.7];
        let s: f64 = (0..4).map(|a| q1(a, xi, EXTENT).value).sum();
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-15);
        let g: f64 = (0..4).map(|a| q1(a, xi, EXTENT).grad[0]).sum();
        assert_abs_diff_eq!(g, 0.0, epsilon = 1e-15);
        for a in 0..4 {
            for b in 0..4 {
                let v = q1(a, CORNERS[b], EXTENT).value;
                assert_eq!(v, if a == b { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn bfs_nodal_interpolation_property() {
        // DOF functional of (corner b, slot t) applied to basis (a, s) is δ_ab δ_st
        for a in 0..4 {
            for s in HermiteSlot::ALL {
                for b in 0..4 {
                    let e = bfs(a, s, CORNERS[b], EXTENT);
                    let dofs = [e.value, e.grad[0], e.grad[1], e.hess[(0, 1)]];
                    for t in HermiteSlot::ALL {
                        let expect = if a == b && s == t { 1.0 } else { 0.0 };
                        assert_abs_diff_eq!(dofs[t.index()], expect, epsilon = 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn bfs_reproduces_bicubic_polynomial() {
        // f(y) = y1³ y2² − 2 y1 y2³ + y1² on the element centred at the origin
        let f = |y: [f64; 2]| y[0].powi(3) * y[1].powi(2) - 2.0 * y[0] * y[1].powi(3) + y[0] * y[0];
        let df = |y: [f64; 2]| {
            [
                3.0 * y[0] * y[0] * y[1] * y[1] - 2.0 * y[1].powi(3) + 2.0 * y[0],
                2.0 * y[0].powi(3) * y[1] - 6.0 * y[0] * y[1] * y[1],
                6.0 * y[0] * y[0] * y[1] - 6.0 * y[1] * y[1],
            ]
        };
        let to_phys = |xi: [f64; 2]| [0.5 * EXTENT[0] * xi[0], 0.5 * EXTENT[1] * xi[1]];
        let probe = [0.37, -0.61];
        let mut val = 0.0;
        let mut hess = Matrix2::zeros();
        for a in 0..4 {
            let node = to_phys(CORNERS[a]);
            let d = df(node);
            let dofs = [f(node), d[0], d[1], d[2]];
            for s in HermiteSlot::ALL {
                let e = bfs(a, s, probe, EXTENT);
                val += dofs[s.index()] * e.value;
                hess += e.hess * dofs[s.index()];
            }
        }
        let y = to_phys(probe);
        assert_abs_diff_eq!(val, f(y), epsilon = 1e-14);
        let exact_h12 = 6.0 * y[0] * y[0] * y[1] - 6.0 * y[1] * y[1];
        assert_abs_diff_eq!(hess[(0, 1)], exact_h12, epsilon = 1e-13);
        let exact_h11 = 6.0 * y[0] * y[1] * y[1] + 2.0;
        assert_abs_diff_eq!(hess[(0, 0)], exact_h11, epsilon = 1e-13);
    }
}
