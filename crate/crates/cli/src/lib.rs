//! Library surface of the porolux command-line runner, split out so
//! integration tests can drive configuration parsing and runs directly.

pub mod config;
pub mod export;
pub mod run;

pub use config::{parse_config, ConfigError, Mode, RunConfig};
pub use run::{run, EXIT_CONFIG_ERROR, EXIT_OK, EXIT_SOLVER_FAILURE};
