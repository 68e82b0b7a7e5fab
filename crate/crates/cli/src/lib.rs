//! Library side of the `vorticity` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod render;
pub mod validate;

/// Published schemas, versioned with the crate.
pub mod schemas {
    pub use crate::config::RUN_CONFIG_SCHEMA;
    pub const FIELD_CSV_SCHEMA: &str = include_str!("../schemas/field_csv.schema.json");
    pub const DEGREE_REPORT_SCHEMA: &str = include_str!("../schemas/degree_report.schema.json");
}

pub use config::{BasisConfig, RunConfig};
pub use error::{CliError, CliResult};
