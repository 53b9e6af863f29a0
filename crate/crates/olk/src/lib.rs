//! IO, file formats and the command-line front end for `olk-core`.
//!
//! - [`config`]: TOML space definitions.
//! - [`steps`]: the `.steps` text format for step functions.
//! - [`report`]: structured (JSON) renderings of results.
//! - [`parallel`]: index-ordered fan-out over worker threads.
//! - [`cli`]: the `olk` command.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod parallel;
pub mod report;
pub mod steps;

pub use config::{load_space, parse_space, ConfigError};
pub use steps::{parse_steps, read_steps, write_steps, StepsError};
