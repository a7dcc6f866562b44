//! Structured meshes, finite-element spaces and assembly of the discrete
//! membrane and flexural obstacle problems.

mod assembly;
mod mesh;
mod quadrature;
pub mod shape;
mod space;

pub use assembly::{
    assemble_flexural, assemble_membrane, default_penalty, flexural_stiffness, membrane_stiffness, norm_matrix,
    FlexuralSystem, Material, FLEXURAL_QUADRATURE, MEMBRANE_QUADRATURE,
};
pub use mesh::{build_mesh, BoundaryEdge, Gamma0, Mesh, Side};
pub use quadrature::{element_quadrature, gauss_legendre};
pub use space::{FeSpace, FieldSample, SpaceKind};
