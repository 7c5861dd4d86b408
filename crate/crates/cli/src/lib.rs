//! Sweep engine, figure datasets and file formats for `omn-core`.

pub mod config;
pub mod error;
pub mod figures;
pub mod report;
pub mod sweep;

pub use config::{Axis, Config, ParamKey};
pub use error::{CliError, Result};
pub use figures::Figure;
pub use sweep::{run_sweep, SweepRow, SweepSpec};
