use super::mesh::Mesh;
use super::shape::{bfs, q1};
use crate::qp::{DofKind, HermiteSlot};
use crate::tensors::EtaJet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    /// Q1 × Q1 × Q0: nodal tangential components, element-constant `η₃`.
    Membrane,
    /// Q1 × Q1 × Bogner–Fox–Schmit: nodal tangential components and four
    /// Hermite unknowns per node for `η₃`.
    Flexural,
}

/// Point data used to interpolate a smooth field into a finite-element space.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FieldSample {
    pub eta: [f64; 3],
    /// `∂₁η₃`, `∂₂η₃`, `∂₁₂η₃` (Hermite unknowns only).
    pub d1_eta3: f64,
    pub d2_eta3: f64,
    pub d12_eta3: f64,
}

/// Degree-of-freedom numbering with clamped unknowns on `γ₀` eliminated.
///
/// Numbering walks the nodes in order and emits the free tangential
/// components first and then, for flexural spaces, the free Hermite
/// unknowns of the node. Membrane `η₃` unknowns follow all nodal ones,
/// one per element.
#[derive(Clone, Debug, PartialEq)]
pub struct FeSpace {
    pub kind: SpaceKind,
    pub mesh: Mesh,
    tangential: Vec<[Option<usize>; 2]>,
    element_normal: Vec<usize>,
    hermite: Vec<[Option<usize>; 4]>,
    dofs: Vec<DofKind>,
}

impl FeSpace {
    pub fn membrane(mesh: &Mesh) -> Self {
        Self::build(mesh, SpaceKind::Membrane)
    }

    pub fn flexural(mesh: &Mesh) -> Self {
        Self::build(mesh, SpaceKind::Flexural)
    }

    fn build(mesh: &Mesh, kind: SpaceKind) -> Self {
        let mut dofs = Vec::new();
        let mut tangential = vec![[None; 2]; mesh.num_nodes()];
        let mut hermite = vec![[None; 4]; if kind == SpaceKind::Flexural { mesh.num_nodes() } else { 0 }];
        for node in 0..mesh.num_nodes() {
            if mesh.node_on_gamma0(node) {
                continue;
            }
            for component in 0..2 {
                tangential[node][component] = Some(dofs.len());
                dofs.push(DofKind::Tangential { node, component });
            }
            if kind == SpaceKind::Flexural {
                for slot in HermiteSlot::ALL {
                    hermite[node][slot.index()] = Some(dofs.len());
                    dofs.push(DofKind::Hermite { node, slot });
                }
            }
        }
        let mut element_normal = Vec::new();
        if kind == SpaceKind::Membrane {
            for element in 0..mesh.num_elements() {
                element_normal.push(dofs.len());
                dofs.push(DofKind::ElementNormal { element });
            }
        }
        FeSpace { kind, mesh: mesh.clone(), tangential, element_normal, hermite, dofs }
    }

    pub fn num_dofs(&self) -> usize {
        self.dofs.len()
    }

    pub fn dof_kinds(&self) -> &[DofKind] {
        &self.dofs
    }

    /// Unknowns subject to `η₃ ≥ 0`: every membrane `η₃` and the Hermite value unknowns.
    pub fn is_obstacle_dof(&self, dof: usize) -> bool {
        matches!(
            self.dofs[dof],
            DofKind::ElementNormal { .. } | DofKind::Hermite { slot: HermiteSlot::Value, .. }
        )
    }

    pub fn tangential_dof(&self, node: usize, component: usize) -> Option<usize> {
        self.tangential[node][component]
    }

    pub fn hermite_dof(&self, node: usize, slot: HermiteSlot) -> Option<usize> {
        self.hermite.get(node).and_then(|h| h[slot.index()])
    }

    pub fn element_normal_dof(&self, element: usize) -> Option<usize> {
        self.element_normal.get(element).copied()
    }

    /// Jets of every non-eliminated basis function supported on `element`,
    /// at reference point `xi`.
    pub fn basis(&self, element: usize, xi: [f64; 2]) -> Vec<(usize, EtaJet)> {
        let extent = self.mesh.element_extent(element);
        let conn = self.mesh.elements[element];
        let mut out = Vec::with_capacity(24);
        for (corner, &node) in conn.iter().enumerate() {
            let n = q1(corner, xi, extent);
            for component in 0..2 {
                if let Some(d) = self.tangential[node][component] {
                    let mut jet = EtaJet::default();
                    jet.vals[component] = n.value;
                    jet.grads[component] = n.grad;
                    out.push((d, jet));
                }
            }
            if self.kind == SpaceKind::Flexural {
                for slot in HermiteSlot::ALL {
                    if let Some(d) = self.hermite[node][slot.index()] {
                        let h = bfs(corner, slot, xi, extent);
                        let mut jet = EtaJet::default();
                        jet.vals[2] = h.value;
                        jet.grads[2] = h.grad;
                        jet.eta3_hess = h.hess;
                        out.push((d, jet));
                    }
                }
            }
        }
        if self.kind == SpaceKind::Membrane {
            let mut jet = EtaJet::default();
            jet.vals[2] = 1.0;
            out.push((self.element_normal[element], jet));
        }
        out
    }

    /// Field jet of the coefficient vector `x` at a reference point.
    pub fn eval(&self, x: &[f64], element: usize, xi: [f64; 2]) -> EtaJet {
        let mut acc = EtaJet::default();
        for (d, jet) in self.basis(element, xi) {
            let c = x[d];
            for i in 0..3 {
                acc.vals[i] += c * jet.vals[i];
                acc.grads[i][0] += c * jet.grads[i][0];
                acc.grads[i][1] += c * jet.grads[i][1];
            }
            acc.eta3_hess += jet.eta3_hess * c;
        }
        acc
    }

    /// Nodal interpolant of a smooth field: nodal values (and Hermite
    /// derivatives) at free nodes, centroid values for element unknowns.
    pub fn interpolate<F: Fn([f64; 2]) -> FieldSample>(&self, field: F) -> Vec<f64> {
        let mut x = vec![0.0; self.num_dofs()];
        for (d, kind) in self.dofs.iter().enumerate() {
            x[d] = match *kind {
                DofKind::Tangential { node, component } => field(self.mesh.nodes[node]).eta[component],
                DofKind::ElementNormal { element } => field(self.mesh.centroid(element)).eta[2],
                DofKind::Hermite { node, slot } => {
                    let s = field(self.mesh.nodes[node]);
                    match slot {
                        HermiteSlot::Value => s.eta[2],
                        HermiteSlot::D1 => s.d1_eta3,
                        HermiteSlot::D2 => s.d2_eta3,
                        HermiteSlot::D12 => s.d12_eta3,
                    }
                }
                DofKind::Plain => 0.0,
            };
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretization::mesh::{build_mesh, Gamma0};
    use crate::geometry::Rect;

    #[test]
    fn membrane_dof_count() {
        let m = build_mesh(2, 2, Rect::unit(), &Gamma0::All).unwrap();
        let s = FeSpace::membrane(&m);
        assert_eq!(s.num_dofs(), 2 + 4);
        assert_eq!((0..6).filter(|&d| s.is_obstacle_dof(d)).count(), 4);
        assert_eq!(s.tangential_dof(4, 1), Some(1));
        assert_eq!(s.tangential_dof(0, 0), None);
    }

    #[test]
    fn flexural_dof_count_after_clamping() {
        let m = build_mesh(2, 2, Rect::unit(), &Gamma0::All).unwrap();
        let s = FeSpace::flexural(&m);
        // only the centre node survives: 2 tangential + 4 Hermite
        assert_eq!(s.num_dofs(), 6);
        assert_eq!((0..6).filter(|&d| s.is_obstacle_dof(d)).count(), 1);
        let unclamped = build_mesh(2, 2, Rect::unit(), &Gamma0::Sides(vec![])).unwrap();
        let full = FeSpace::flexural(&unclamped);
        assert_eq!(full.num_dofs(), 9 * 6);
        assert_eq!(full.dof_kinds().iter().filter(|k| matches!(k, DofKind::Hermite { .. })).count(), 36);
    }

    #[test]
    fn interpolant_reproduces_bicubic_field() {
        let m = build_mesh(3, 2, Rect::new(0.0, 1.5, -0.5, 0.5).unwrap(), &Gamma0::Sides(vec![])).unwrap();
        let s = FeSpace::flexural(&m);
        let f = |y: [f64; 2]| FieldSample {
            eta: [y[0] + 2.0 * y[1], y[0] * y[1], y[0].powi(3) * y[1] - y[1] * y[1]],
            d1_eta3: 3.0 * y[0] * y[0] * y[1],
            d2_eta3: y[0].powi(3) - 2.0 * y[1],
            d12_eta3: 3.0 * y[0] * y[0],
        };
        let x = s.interpolate(f);
        let xi = [0.21, -0.44];
        let y = m.map_point(4, xi);
        let jet = s.eval(&x, 4, xi);
        let exact = f(y);
        for i in 0..3 {
            approx::assert_abs_diff_eq!(jet.vals[i], exact.eta[i], epsilon = 1e-13);
        }
        approx::assert_abs_diff_eq!(jet.grads[2][0], exact.d1_eta3, epsilon = 1e-12);
        approx::assert_abs_diff_eq!(jet.eta3_hess[(0, 1)], exact.d12_eta3, epsilon = 1e-12);
        approx::assert_abs_diff_eq!(jet.grads[0][1], 2.0, epsilon = 1e-13);
    }
}
