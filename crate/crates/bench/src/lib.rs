//! Precision and speed harness for grid interpolation.
//!
//! Builds grids from benchmark functions, compares interpolated values with
//! direct evaluation at seeded sample points, and contrasts the recursive
//! evaluation path with the staged baseline.

pub mod config;
pub mod error;
pub mod functions;
pub mod report;
pub mod run;

pub use config::{layout, BenchConfig, Layout, MAX_GRID_ELEMENTS};
pub use error::{BenchError, Result};
pub use functions::{r6, r6_formula, BenchmarkFunction, FunctionId};
pub use report::{emit, BenchRow, Format};
pub use run::{iterative_prepare_count, run_precision, run_speed, verify, AuditLine, SpeedReport};
