//! Configuration, job execution and CSV output behind the `rkdg` binary.

pub mod config;
pub mod csv;
pub mod error;
pub mod run;

pub use config::{parse_assignment, parse_text, resolve, Command, RunConfig};
pub use csv::{parse_csv, CsvTable};
pub use error::{CliError, Result};
pub use run::{run, Outcome};
