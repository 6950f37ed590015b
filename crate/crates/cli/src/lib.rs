//! Command-line front end: problem files, solver runs and reports.

pub mod app;
pub mod file;
pub mod report;

pub use app::run;
pub use file::{emit_problem, parse_problem, InputError, ProblemSpec};
