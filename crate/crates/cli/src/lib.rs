//! Library side of the `steklov` command: configuration parsing and subcommand dispatch.

pub mod config;
pub mod run;

pub use config::{parse_config, Config, ConfigError};
pub use run::{dispatch, Command, Format, Invocation, Outcome, RunError};

/// Exit status for a finished run.
pub fn exit_code(result: &Result<Outcome, RunError>) -> u8 {
    match result {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 2,
        Err(_) => 1,
    }
}
