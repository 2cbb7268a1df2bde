//! Scenario files, the check runner and result output.

pub mod bundled;
pub mod checks;
pub mod config;
pub mod output;
pub mod sweep;
pub mod table;

pub use checks::{run_checks, CheckOutcome, Metric, RunReport};
pub use config::{Check, ScenarioConfig};
