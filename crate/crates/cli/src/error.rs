// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use crate::config::ConfigError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),

    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: sipf_core::Error,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn core(context: impl Into<String>) -> impl FnOnce(sipf_core::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Core { context, source }
    }

    /// Process exit status: 2 validation, 3 calibration, 4 numerical, 1 I/O.
    pub fn exit_code(&self) -> u8 {
        use sipf_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core { source, .. } => match source {
                E::Validation(_) | E::Usage(_) => 2,
                E::CalibrationFailure(_) | E::AmbiguousResonance(_) => 3,
                E::Domain(_)
                | E::Singular { .. }
                | E::PassivityViolation { .. }
                | E::GridTooCoarse(_) => 4,
            },
            CliError::Io { .. } | CliError::Csv(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
