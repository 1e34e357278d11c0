//! Command-line harness: graph files, random and lower-bound instance
//! generation, algorithm runs with JSON reports, verification and sweeps.

pub mod app;
pub mod format;
pub mod report;

pub use app::{run_algo, run_cli, Algo, CliError, ModelArg, RunOptions};
pub use format::{read_graph, write_graph, ParseError};
pub use report::{RunReport, RUN_REPORT_SCHEMA};
