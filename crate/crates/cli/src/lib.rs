//! Front end for the box evaluators: single-point evaluation, ε-expansion, verification
//! suites and grid sweeps, all reporting JSON.

pub mod config;
pub mod report;
pub mod run;
pub mod suites;

pub use config::{Integral, QuadOverrides, RunConfig, Tolerances};
pub use report::{Check, Cplx, Deviation, PointRecord, Report, Status, Summary};
pub use run::{cmd_eval, cmd_expand, cmd_sweep, evaluate, laurent, parse_grid, CliError, Grid, GridPoint};
pub use suites::{cmd_verify, Suite};
