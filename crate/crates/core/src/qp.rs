//! The discrete obstacle problem: minimise `½xᵀAx − bᵀx` subject to
//! `x_i ≥ lower_i` on the constrained indices.

use std::io::Write;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Hermite degree of freedom at a node: value, `∂₁`, `∂₂`, `∂₁₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HermiteSlot {
    Value,
    D1,
    D2,
    D12,
}

impl HermiteSlot {
    pub const ALL: [HermiteSlot; 4] = [HermiteSlot::Value, HermiteSlot::D1, HermiteSlot::D2, HermiteSlot::D12];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DofKind {
    /// Unstructured unknown (hand-built problems).
    Plain,
    /// Nodal tangential component `η_α`, `component ∈ {0, 1}`.
    Tangential { node: usize, component: usize },
    /// Element-wise constant normal component `η₃`.
    ElementNormal { element: usize },
    /// Bicubic Hermite normal-component DOF.
    Hermite { node: usize, slot: HermiteSlot },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DofInfo {
    pub kind: DofKind,
    /// `∫ φ_i √a dy`, used to turn multipliers into pressures.
    pub lumped_area: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstacleQP {
    pub a: CsrMatrix,
    pub b: Vec<f64>,
    /// `−∞` on unconstrained entries.
    pub lower: Vec<f64>,
    pub dofs: Vec<DofInfo>,
    /// Assembly diagnostics, e.g. non-elliptic quadrature points.
    pub warnings: Vec<String>,
}

impl ObstacleQP {
    pub fn new(a: CsrMatrix, b: Vec<f64>, lower: Vec<f64>) -> Result<Self> {
        let n = a.dim();
        if b.len() != n || lower.len() != n {
            return Err(Error::Dimension(format!(
                "matrix is {n}x{n} but load has {} entries and bounds {}",
                b.len(),
                lower.len()
            )));
        }
        if lower.iter().any(|l| l.is_nan() || *l == f64::INFINITY) {
            return Err(Error::Parameter("lower bounds must be finite or -inf".into()));
        }
        let dofs = vec![DofInfo { kind: DofKind::Plain, lumped_area: 1.0 }; n];
        Ok(ObstacleQP { a, b, lower, dofs, warnings: Vec::new() })
    }

    /// Dense convenience constructor: `constrained[i]` imposes `x_i ≥ 0`.
    pub fn from_dense(a: &DMatrix<f64>, b: Vec<f64>, constrained: &[bool]) -> Result<Self> {
        let lower = constrained.iter().map(|&c| if c { 0.0 } else { f64::NEG_INFINITY }).collect();
        Self::new(CsrMatrix::from_dense(a)?, b, lower)
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn is_constrained(&self, i: usize) -> bool {
        self.lower[i] > f64::NEG_INFINITY
    }

    pub fn constrained(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.is_constrained(i)).collect()
    }

    /// `½xᵀAx − bᵀx`.
    pub fn energy(&self, x: &[f64]) -> f64 {
        0.5 * self.a.quad_form(x) - dot(&self.b, x)
    }

    /// `Ax − b`; on active constrained entries this is the multiplier.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut r = self.a.mul_vec(x);
        r.iter_mut().zip(&self.b).for_each(|(ri, bi)| *ri -= bi);
        r
    }

    /// Stiffness as COO text, load and bounds as one value per line.
    pub fn write_dump<W1: Write, W2: Write>(&self, matrix: W1, mut vectors: W2) -> Result<()> {
        self.a.write_coo(matrix)?;
        writeln!(vectors, "% index load lower_bound")?;
        for (i, (b, l)) in self.b.iter().zip(&self.lower).enumerate() {
            writeln!(vectors, "{i} {b:e} {l:e}")?;
        }
        Ok(())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_checks() {
        let a = CsrMatrix::from_dense(&DMatrix::identity(2, 2)).unwrap();
        assert!(ObstacleQP::new(a.clone(), vec![1.0], vec![0.0, 0.0]).is_err());
        assert!(ObstacleQP::new(a.clone(), vec![1.0, 1.0], vec![0.0, f64::NAN]).is_err());
        let qp = ObstacleQP::new(a, vec![1.0, 2.0], vec![0.0, f64::NEG_INFINITY]).unwrap();
        assert_eq!(qp.constrained(), vec![0]);
        assert_eq!(qp.energy(&[1.0, 2.0]), 0.5 * 5.0 - 5.0);
        assert_eq!(qp.gradient(&[1.0, 2.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn dump_has_one_line_per_dof() {
        let qp = ObstacleQP::from_dense(&DMatrix::identity(3, 3), vec![1.0, 2.0, 3.0], &[true, false, true]).unwrap();
        let (mut m, mut v) = (Vec::new(), Vec::new());
        qp.write_dump(&mut m, &mut v).unwrap();
        assert_eq!(String::from_utf8(v).unwrap().lines().count(), 4);
        assert_eq!(String::from_utf8(m).unwrap().lines().count(), 4);
    }
}
