//! Scenario files, reports and the verbs behind the `epstab` command.
//!
//! A scenario is a TOML file with a `kind` (`similar`, `powerlaw`, `planets` or
//! `custom-system`), unit declarations and a parameter block. Quantities are either bare
//! numbers in the declared unit or strings such as `"2.7 AU"`; every unit name comes from
//! the bundled constants table. Reports echo the scenario in SI so that feeding the echo
//! back reproduces the numbers exactly.

pub mod commands;
pub mod datasets;
pub mod error;
pub mod report;
pub mod scenario;
pub mod units;

pub use commands::{run_bound, run_oracle, run_sample, run_sweep, run_verify, SweepAxis};
pub use error::{CliError, CliResult, EXIT_FLAGGED, EXIT_INPUT};
pub use report::{Format, Report};
pub use scenario::{load_scenario, open_scenario, Scenario, ScenarioFile};
