//! Command-line front end for `nclorentz-core`: named scenarios, TOML
//! configuration and JSON/CSV reports.

pub mod config;
pub mod error;
pub mod report;
pub mod scenarios;

pub use config::{resolve, FileConfig, Format, Overrides, ScenarioConfig};
pub use error::CliError;
pub use report::{emit_report, Check, ExperimentReport};
pub use scenarios::{run_scenario, SCENARIOS};
