// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{device, PASSIVITY_SLACK_S};
use crate::error::{Error, Result};

/// Energy-relaxation time, possibly unbounded for a lossless environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lifetime {
    Finite(f64),
    Unbounded,
}

impl Lifetime {
    /// Seconds, with `Unbounded` mapped to +∞.
    pub fn seconds(self) -> f64 {
        match self {
            Lifetime::Finite(t) => t,
            Lifetime::Unbounded => f64::INFINITY,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Lifetime::Unbounded)
    }

    /// Decay rate (1/s); zero when unbounded.
    pub fn rate(self) -> f64 {
        match self {
            Lifetime::Finite(t) => 1.0 / t,
            Lifetime::Unbounded => 0.0,
        }
    }
}

/// Transmon treated as a harmonic oscillator with total capacitance `c_sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitSpec {
    /// Shunt plus junction capacitance (F).
    pub c_sigma: f64,
    /// Intrinsic quality factor; `None` means no intrinsic loss.
    pub q_intrinsic: Option<f64>,
}

impl QubitSpec {
    pub fn reference() -> Self {
        Self {
            c_sigma: device::C_SIGMA_F,
            q_intrinsic: None,
        }
    }

    pub fn with_intrinsic_q(mut self, q: Option<f64>) -> Self {
        self.q_intrinsic = q;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c_sigma > 1e-15 && self.c_sigma < 1e-12) {
            return Err(Error::validation(format!(
                "qubit capacitance {} F outside (1 fF, 1 pF)",
                self.c_sigma
            )));
        }
        if self
            .q_intrinsic
            .is_some_and(|q| !(q > 0.0 && q.is_finite()))
        {
            return Err(Error::validation("intrinsic Q must be positive"));
        }
        Ok(())
    }
}

/// Purcell-limited lifetime `T₁ = C_Σ / Re[Y(ω_q)]`.
///
/// Re[Y] within the passivity slack of zero (either sign) is treated as a
/// lossless environment.
pub fn purcell_t1(y: Complex64, f: f64, qubit: &QubitSpec) -> Result<Lifetime> {
    qubit.validate()?;
    if !(y.re.is_finite() && y.im.is_finite()) {
        return Err(Error::validation("admittance is not finite"));
    }
    if y.re < -PASSIVITY_SLACK_S {
        return Err(Error::PassivityViolation {
            re_y: y.re,
            frequency: f,
        });
    }
    if y.re <= 0.0 || !(qubit.c_sigma / y.re).is_finite() {
        return Ok(Lifetime::Unbounded);
    }
    Ok(Lifetime::Finite(qubit.c_sigma / y.re))
}

/// Combine the Purcell rate with the intrinsic rate `2πf / Q`.
pub fn total_t1(t1_purcell: Lifetime, f: f64, qubit: &QubitSpec) -> Lifetime {
    let Some(q) = qubit.q_intrinsic else {
        return t1_purcell;
    };
    let rate = t1_purcell.rate() + TAU * f / q;
    if rate > 0.0 {
        Lifetime::Finite(1.0 / rate)
    } else {
        Lifetime::Unbounded
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn qubit(q: Option<f64>) -> QubitSpec {
        QubitSpec {
            c_sigma: 70e-15,
            q_intrinsic: q,
        }
    }

    #[test]
    fn bare_environment_lifetime() {
        let t = purcell_t1(Complex64::new(0.02, 0.0), 5e9, &qubit(None)).unwrap();
        assert_relative_eq!(t.seconds(), 3.5e-12, max_relative = 1e-14);
    }

    #[test]
    fn lossless_environment_is_unbounded() {
        let t = purcell_t1(Complex64::new(0.0, 0.3), 5e9, &qubit(None)).unwrap();
        assert_eq!(t, Lifetime::Unbounded);
    }

    #[test]
    fn negative_conductance_is_passivity_violation() {
        let err = purcell_t1(Complex64::new(-1e-6, 0.0), 5e9, &qubit(None)).unwrap_err();
        assert!(matches!(err, Error::PassivityViolation { .. }));
    }

    #[test]
    fn intrinsic_only() {
        let t = total_t1(Lifetime::Unbounded, 5e9, &qubit(Some(1e6)));
        assert_relative_eq!(t.seconds(), 1e6 / (TAU * 5e9), max_relative = 1e-14);
        assert!((t.seconds() - 31.83e-6).abs() < 0.01e-6);
    }

    #[test]
    fn equal_rates_halve() {
        let q = qubit(Some(1e6));
        let ti = 1e6 / (TAU * 5e9);
        let t = total_t1(Lifetime::Finite(ti), 5e9, &q);
        assert_relative_eq!(t.seconds(), ti / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn no_intrinsic_marker_passes_through() {
        let t = Lifetime::Finite(1e-3);
        assert_eq!(total_t1(t, 5e9, &qubit(None)), t);
    }

    #[test]
    fn qubit_validation_window() {
        assert!(qubit(None).validate().is_ok());
        assert!(QubitSpec {
            c_sigma: 1e-16,
            q_intrinsic: None
        }
        .validate()
        .is_err());
        assert!(QubitSpec {
            c_sigma: 2e-12,
            q_intrinsic: None
        }
        .validate()
        .is_err());
        assert!(qubit(Some(-1.0)).validate().is_err());
    }
}
