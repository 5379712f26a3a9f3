// SPDX-License-Identifier: Apache-2.0

//! Configuration, execution and output rendering for the `sipf` command.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod presets;
pub mod run;

pub use config::{parse_config, to_text, ConfigError, OutputFormat, RunConfig};
pub use error::{CliError, Result};
pub use run::{run, write_outputs, RunOutput, Runner};
