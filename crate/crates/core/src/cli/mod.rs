//! Command-line front end: element syntax, session configuration, task
//! runner and JSON reports.

pub mod config;
pub mod json;
pub mod parse;
pub mod run;
pub mod selftest;
pub mod verify;

pub use config::{Session, SessionConfig};
pub use parse::{format_element, parse_element, Syntax};
pub use run::{input_lines, run_inputs, Task, SCHEMA};
pub use selftest::run_selftest;
pub use verify::{verify_document, verify_report};
