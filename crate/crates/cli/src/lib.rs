//! Configuration, pipeline and file output behind the `shellvi` command.

pub mod config;
pub mod output;
pub mod pipeline;
pub mod sweep;

pub use config::{ProblemKind, RunConfig};
pub use pipeline::{build, postprocess, run, solve, Overrides, Problem, ResultBundle};
pub use sweep::{sweep, SweepParam, SweepRow};
