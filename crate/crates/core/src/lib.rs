//! Finite-element solvers for the obstacle problems of elastic membrane and
//! flexural shells resting on a rigid foundation.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`] evaluates middle-surface charts and their fundamental forms,
//! * [`tensors`] holds the shell elasticity tensor, the change-of-metric and
//!   change-of-curvature operators, load resultants and post-processing,
//! * [`discretization`] meshes the parameter domain and assembles the
//!   bound-constrained quadratic programs,
//! * [`solver`] solves those programs.

pub mod discretization;
pub mod error;
pub mod geometry;
pub mod qp;
pub mod solver;
pub mod sparse;
pub mod tensors;

pub use error::{Error, Result};
pub use geometry::{validate_chart, Chart, ChartJet, ChartKind, ChartValidation, Rect, SurfaceFrame, TabulatedSurface, ValidationOptions, Vec3};
pub use qp::{DofKind, ObstacleQP};
pub use solver::{SolveReport, SolverMethod};
