//! Experiment drivers behind the `subradiance` command line: configuration,
//! sweep records, plots and the seven numerical campaigns.

pub mod commands;
pub mod config;
pub mod plot;
pub mod record;
pub mod rng;

pub use commands::Ctx;
pub use config::RunConfig;
pub use record::{RecordWriter, SweepRecord, SCHEMA};
