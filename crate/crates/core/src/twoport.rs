// SPDX-License-Identifier: Apache-2.0

//! Two-port chain (ABCD) algebra and conversions.
//!
//! Every network section in the crate is reduced to a [`TwoPortABCD`] at a
//! single frequency and composed by explicit matrix products. Nothing here
//! holds state; all values are `Copy`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::SINGULAR_REL_EPS;
use crate::error::{Error, Result, SingularKind};

/// Complex scalar used for impedances, admittances and matrix entries.
pub type ComplexValue = Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Chain matrix `[[a, b], [c, d]]` relating port-1 (V, I) to port-2 (V, I).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPortABCD {
    /// Voltage ratio (unitless).
    pub a: Complex64,
    /// Transfer impedance (Ω).
    pub b: Complex64,
    /// Transfer admittance (S).
    pub c: Complex64,
    /// Current ratio (unitless).
    pub d: Complex64,
}

impl TwoPortABCD {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    /// Through connection.
    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    /// Series impedance `z` between the ports.
    pub fn series(z: Complex64) -> Self {
        Self::new(ONE, z, ZERO, ONE)
    }

    /// Shunt admittance `y` across the ports.
    pub fn shunt(y: Complex64) -> Self {
        Self::new(ONE, ZERO, y, ONE)
    }

    /// Matrix product `self · next` (`self` nearer the source).
    pub fn then(&self, next: &TwoPortABCD) -> TwoPortABCD {
        TwoPortABCD {
            a: self.a * next.a + self.b * next.c,
            b: self.a * next.b + self.b * next.d,
            c: self.c * next.a + self.d * next.c,
            d: self.c * next.b + self.d * next.d,
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// `|ad − bc − 1|`, zero for a reciprocal network.
    pub fn reciprocity_error(&self) -> f64 {
        (self.determinant() - ONE).norm()
    }

    pub fn is_finite(&self) -> bool {
        finite(self.a) && finite(self.b) && finite(self.c) && finite(self.d)
    }

    /// Largest entry-wise difference, scaled by the larger operand magnitude.
    /// `b` and `c` are compared after normalising by `z_scale` so the units
    /// are commensurate.
    pub fn relative_difference(&self, other: &TwoPortABCD, z_scale: f64) -> f64 {
        let pairs = [
            (self.a, other.a),
            (self.b / z_scale, other.b / z_scale),
            (self.c * z_scale, other.c * z_scale),
            (self.d, other.d),
        ];
        let scale = pairs
            .iter()
            .map(|(x, y)| x.norm().max(y.norm()))
            .fold(1.0_f64, f64::max);
        pairs
            .iter()
            .map(|(x, y)| (x - y).norm())
            .fold(0.0_f64, f64::max)
            / scale
    }

    fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::validation("two-port entry is not finite"))
        }
    }
}

impl Default for TwoPortABCD {
    fn default() -> Self {
        Self::identity()
    }
}

/// Compose sections in order; the first section is nearest the source.
pub fn cascade(sections: &[TwoPortABCD]) -> Result<TwoPortABCD> {
    let (first, rest) = sections
        .split_first()
        .ok_or_else(|| Error::Usage("cascade of an empty section list".into()))?;
    first.check_finite()?;
    rest.iter().try_fold(*first, |acc, m| {
        m.check_finite()?;
        Ok(acc.then(m))
    })
}

/// Two-port scattering parameters at a real reference impedance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SParams2 {
    pub s11: Complex64,
    pub s12: Complex64,
    pub s21: Complex64,
    pub s22: Complex64,
    /// Reference impedance (Ω).
    pub z_ref: f64,
}

impl SParams2 {
    /// `|s11|² + |s21|²`: 1 for a lossless network, ≤ 1 for a passive one.
    pub fn power_sum(&self) -> f64 {
        self.s11.norm_sqr() + self.s21.norm_sqr()
    }

    pub fn s11_db(&self) -> f64 {
        magnitude_db(self.s11)
    }

    pub fn s21_db(&self) -> f64 {
        magnitude_db(self.s21)
    }
}

/// `20 log10 |z|`.
pub fn magnitude_db(z: Complex64) -> f64 {
    20.0 * z.norm().log10()
}

/// Standard chain-matrix to S-parameter conversion at `z_ref`.
pub fn abcd_to_sparams(m: &TwoPortABCD, z_ref: f64) -> Result<SParams2> {
    if !(z_ref > 0.0 && z_ref.is_finite()) {
        return Err(Error::validation(format!(
            "reference impedance must be positive, got {z_ref}"
        )));
    }
    m.check_finite()?;
    let bz = m.b / z_ref;
    let cz = m.c * z_ref;
    let denom = m.a + bz + cz + m.d;
    let scale = m.a.norm() + bz.norm() + cz.norm() + m.d.norm();
    if denom.norm() <= SINGULAR_REL_EPS * scale {
        return Err(Error::singular(SingularKind::DegenerateConversion));
    }
    Ok(SParams2 {
        s11: (m.a + bz - cz - m.d) / denom,
        s12: 2.0 * m.determinant() / denom,
        s21: 2.0 / denom,
        s22: (-m.a + bz - cz + m.d) / denom,
        z_ref,
    })
}

/// What terminates port 2 when computing a driving-point quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Termination {
    /// A finite load impedance (Ω).
    Load(Complex64),
    /// Open circuit, evaluated as the analytic `a/c` limit.
    Open,
}

impl Termination {
    pub fn resistive(r: f64) -> Self {
        Termination::Load(Complex64::new(r, 0.0))
    }
}

/// Port-1 impedance with port 2 terminated by `load`: `(a z + b)/(c z + d)`.
pub fn input_impedance(m: &TwoPortABCD, load: Termination) -> Result<Complex64> {
    m.check_finite()?;
    let (num, den, scale) = match load {
        Termination::Load(z) => {
            if !finite(z) {
                return Err(Error::validation("load impedance is not finite"));
            }
            let cz = m.c * z;
            (m.a * z + m.b, cz + m.d, cz.norm() + m.d.norm())
        }
        Termination::Open => (m.a, m.c, 0.0),
    };
    if den.norm() <= SINGULAR_REL_EPS * scale || den == ZERO {
        return Err(Error::singular(SingularKind::ResonantOpen));
    }
    Ok(num / den)
}

/// Port-1 admittance with port 2 terminated by `load`: `(c z + d)/(a z + b)`.
///
/// Computed directly rather than as `1 / input_impedance` so that an open
/// input (zero admittance) is not a singularity.
pub fn input_admittance(m: &TwoPortABCD, load: Termination) -> Result<Complex64> {
    m.check_finite()?;
    let (num, den, scale) = match load {
        Termination::Load(z) => {
            if !finite(z) {
                return Err(Error::validation("load impedance is not finite"));
            }
            let az = m.a * z;
            (m.c * z + m.d, az + m.b, az.norm() + m.b.norm())
        }
        Termination::Open => (m.c, m.a, 0.0),
    };
    if den.norm() <= SINGULAR_REL_EPS * scale || den == ZERO {
        return Err(Error::singular(SingularKind::ResonantShort));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Lossless line of impedance z0 and electrical length theta.
    fn line(z0: f64, theta: f64) -> TwoPortABCD {
        TwoPortABCD::new(
            c(theta.cos(), 0.0),
            c(0.0, z0 * theta.sin()),
            c(0.0, theta.sin() / z0),
            c(theta.cos(), 0.0),
        )
    }

    #[test]
    fn single_element_cascade_is_itself() {
        let id = TwoPortABCD::identity();
        assert_eq!(cascade(&[id]).unwrap(), id);
    }

    #[test]
    fn two_quarter_waves_make_minus_identity() {
        let q = line(50.0, FRAC_PI_2);
        let m = cascade(&[q, q]).unwrap();
        assert!((m.a + 1.0).norm() < 1e-12);
        assert!((m.d + 1.0).norm() < 1e-12);
        assert!(m.b.norm() < 1e-10);
        assert!(m.c.norm() < 1e-12);
    }

    #[test]
    fn empty_cascade_is_usage_error() {
        assert!(matches!(cascade(&[]), Err(Error::Usage(_))));
    }

    #[test]
    fn non_finite_entry_rejected() {
        let bad = TwoPortABCD::series(c(f64::NAN, 0.0));
        assert!(matches!(
            cascade(&[TwoPortABCD::identity(), bad]),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn identity_is_perfect_through() {
        for z in [1.0, 50.0, 377.0] {
            let s = abcd_to_sparams(&TwoPortABCD::identity(), z).unwrap();
            assert!(s.s11.norm() < 1e-15);
            assert!((s.s21 - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn series_fifty_ohm_in_fifty_ohm_system() {
        let s = abcd_to_sparams(&TwoPortABCD::series(c(50.0, 0.0)), 50.0).unwrap();
        assert_relative_eq!(s.s11.re, 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(s.s21.re, 2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(s.s12, s.s21);
    }

    #[test]
    fn quarter_wave_transformer_reflection() {
        let s = abcd_to_sparams(&line(100.0, FRAC_PI_2), 50.0).unwrap();
        assert_relative_eq!(s.s11.norm(), 0.6, epsilon = 1e-12);
    }

    #[test]
    fn conversion_rejects_bad_reference() {
        let id = TwoPortABCD::identity();
        assert!(matches!(
            abcd_to_sparams(&id, 0.0),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            abcd_to_sparams(&id, -5.0),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn conversion_detects_degenerate_denominator() {
        // a + b/z + c z + d = 1 + 0 + (-2) + 1 = 0 at z = 1.
        let m = TwoPortABCD::new(c(1.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0));
        assert!(matches!(
            abcd_to_sparams(&m, 1.0),
            Err(Error::Singular {
                kind: SingularKind::DegenerateConversion,
                ..
            })
        ));
    }

    #[test]
    fn input_impedance_cases() {
        let z = input_impedance(&TwoPortABCD::identity(), Termination::resistive(30.0)).unwrap();
        assert_relative_eq!(z.re, 30.0);
        assert_eq!(z.im, 0.0);

        let z = input_impedance(&line(50.0, FRAC_PI_2), Termination::resistive(100.0)).unwrap();
        assert_relative_eq!(z.re, 25.0, epsilon = 1e-10);
        assert!(z.im.abs() < 1e-10);

        let z =
            input_impedance(&line(50.0, std::f64::consts::FRAC_PI_4), Termination::Open).unwrap();
        assert!(z.re.abs() < 1e-12);
        assert_relative_eq!(z.im, -50.0, epsilon = 1e-12);
    }

    #[test]
    fn open_identity_is_singular_impedance_but_zero_admittance() {
        let id = TwoPortABCD::identity();
        assert!(matches!(
            input_impedance(&id, Termination::Open),
            Err(Error::Singular { .. })
        ));
        assert_eq!(input_admittance(&id, Termination::Open).unwrap(), ZERO);
    }

    #[test]
    fn shorted_input_is_singular_admittance() {
        let m = TwoPortABCD::series(c(0.0, 0.0));
        let err = input_admittance(&m, Termination::Load(ZERO)).unwrap_err();
        assert_eq!(
            err.at_frequency(1e9),
            Error::Singular {
                kind: SingularKind::ResonantShort,
                frequency: Some(1e9)
            }
        );
    }
}
