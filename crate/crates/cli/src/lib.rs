//! Scenario-driven front end for `paretoscope_core`.

pub mod commands;
pub mod error;
pub mod report;
pub mod scenario;

pub use commands::{run_command, Command, MoveRow, Report, ReportBody, ReportHeader, RunFlags};
pub use error::CliError;
pub use report::{emit_report, Format};
pub use scenario::{parse_scenario, parse_scenario_str, DiscoverParams, Scenario};
