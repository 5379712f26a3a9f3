// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Which kind of resonant degeneracy produced a singular evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularKind {
    /// A shunt branch became a short circuit (e.g. quarter-wave open stub).
    ResonantShort,
    /// A series path became an open circuit or a termination collapsed.
    ResonantOpen,
    /// The S-parameter denominator `a + b/z + c z + d` vanished.
    DegenerateConversion,
}

impl std::fmt::Display for SingularKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SingularKind::ResonantShort => "resonant short",
            SingularKind::ResonantOpen => "resonant open",
            SingularKind::DegenerateConversion => "degenerate conversion",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{kind} singularity{}", frequency.map(|f| format!(" at {f} Hz")).unwrap_or_default())]
    Singular {
        kind: SingularKind,
        frequency: Option<f64>,
    },

    #[error("passivity violation: Re[Y] = {re_y} S at {frequency} Hz")]
    PassivityViolation { re_y: f64, frequency: f64 },

    #[error("ambiguous resonance: {0}")]
    AmbiguousResonance(String),

    #[error("calibration failure: {0}")]
    CalibrationFailure(String),

    #[error("band-edge search failed: {0}")]
    GridTooCoarse(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn singular(kind: SingularKind) -> Self {
        Error::Singular {
            kind,
            frequency: None,
        }
    }

    /// Attach frequency context to a singularity that was raised without it.
    pub fn at_frequency(self, f: f64) -> Self {
        match self {
            Error::Singular {
                kind,
                frequency: None,
            } => Error::Singular {
                kind,
                frequency: Some(f),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
