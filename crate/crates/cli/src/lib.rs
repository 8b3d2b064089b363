//! Configuration, output and verification behind the `pathlight` command.

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod verify;

pub use config::{parse_config, Format, RunConfig, Scenario};
pub use error::CliError;
pub use verify::{verify, Suite, VerificationReport, VerifyOptions};
