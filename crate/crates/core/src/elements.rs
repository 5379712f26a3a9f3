// SPDX-License-Identifier: Apache-2.0

//! Physical circuit elements rendered as chain matrices at one frequency.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{C0, SINGULAR_REL_EPS};
use crate::elliptic::elliptic_k_ratio;
use crate::error::{Error, Result, SingularKind};
use crate::twoport::TwoPortABCD;

pub(crate) fn check_frequency(f: f64) -> Result<()> {
    if f > 0.0 && f.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "frequency must be positive and finite, got {f}"
        )))
    }
}

/// A uniform transmission-line segment with a real characteristic impedance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TLineSpec {
    /// Characteristic impedance (Ω).
    pub z0: f64,
    /// Effective relative permittivity.
    pub eps_eff: f64,
    /// Physical length (m).
    pub length: f64,
    /// Series conductor resistance per unit length (Ω/m).
    pub r_per_len: f64,
    /// Dielectric loss tangent.
    pub tan_delta: f64,
}

impl TLineSpec {
    pub fn lossless(z0: f64, eps_eff: f64, length: f64) -> Self {
        Self {
            z0,
            eps_eff,
            length,
            r_per_len: 0.0,
            tan_delta: 0.0,
        }
    }

    pub fn with_loss(mut self, r_per_len: f64, tan_delta: f64) -> Self {
        self.r_per_len = r_per_len;
        self.tan_delta = tan_delta;
        self
    }

    pub fn with_length(mut self, length: f64) -> Self {
        self.length = length;
        self
    }

    pub fn is_lossless(&self) -> bool {
        self.r_per_len == 0.0 && self.tan_delta == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.z0 > 0.0
            && self.z0.is_finite()
            && self.eps_eff >= 1.0
            && self.eps_eff.is_finite()
            && self.length >= 0.0
            && self.length.is_finite()
            && self.r_per_len >= 0.0
            && self.r_per_len.is_finite()
            && self.tan_delta >= 0.0
            && self.tan_delta.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::validation(format!(
                "invalid line parameters: {self:?}"
            )))
        }
    }

    /// Phase velocity `c₀ / √ε_eff` (m/s).
    pub fn phase_velocity(&self) -> f64 {
        C0 / self.eps_eff.sqrt()
    }

    /// Phase constant β (rad/m).
    pub fn beta(&self, f: f64) -> f64 {
        TAU * f * self.eps_eff.sqrt() / C0
    }

    /// Propagation constant `γ = α_c + α_d + jβ` (1/m).
    pub fn gamma(&self, f: f64) -> Complex64 {
        let beta = self.beta(f);
        let alpha_c = self.r_per_len / (2.0 * self.z0);
        let alpha_d = beta * self.tan_delta / 2.0;
        Complex64::new(alpha_c + alpha_d, beta)
    }

    /// Frequency at which the line is a quarter wavelength long.
    pub fn quarter_wave_frequency(&self) -> f64 {
        self.phase_velocity() / (4.0 * self.length)
    }

    /// Length that makes the line a quarter wavelength at `f`.
    pub fn quarter_wave_length(eps_eff: f64, f: f64) -> f64 {
        C0 / (eps_eff.sqrt() * 4.0 * f)
    }

    pub fn abcd(&self, f: f64) -> Result<TwoPortABCD> {
        tline_abcd(self, f)
    }
}

/// Chain matrix of a (possibly lossy) line segment.
pub fn tline_abcd(spec: &TLineSpec, f: f64) -> Result<TwoPortABCD> {
    check_frequency(f)?;
    spec.validate()?;
    if spec.length == 0.0 {
        return Ok(TwoPortABCD::identity());
    }
    let gl = spec.gamma(f) * spec.length;
    let (ch, sh) = if spec.is_lossless() {
        // Keep the lossless case exactly unimodular on the real/imaginary split.
        let theta = gl.im;
        (
            Complex64::new(theta.cos(), 0.0),
            Complex64::new(0.0, theta.sin()),
        )
    } else {
        (gl.cosh(), gl.sinh())
    };
    Ok(TwoPortABCD::new(ch, sh * spec.z0, sh / spec.z0, ch))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LumpedKind {
    SeriesInductor,
    SeriesCapacitor,
    SeriesResistor,
    ShuntInductor,
    ShuntCapacitor,
    ShuntResistor,
}

/// A single ideal lumped component in series or shunt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LumpedElement {
    pub kind: LumpedKind,
    /// H, F or Ω depending on `kind`.
    pub value: f64,
}

impl LumpedElement {
    pub fn new(kind: LumpedKind, value: f64) -> Self {
        Self { kind, value }
    }

    pub fn series_inductor(henry: f64) -> Self {
        Self::new(LumpedKind::SeriesInductor, henry)
    }

    pub fn series_capacitor(farad: f64) -> Self {
        Self::new(LumpedKind::SeriesCapacitor, farad)
    }

    /// Branch impedance at `f`.
    fn impedance(&self, omega: f64) -> Complex64 {
        use LumpedKind::*;
        match self.kind {
            SeriesInductor | ShuntInductor => Complex64::new(0.0, omega * self.value),
            SeriesCapacitor | ShuntCapacitor => Complex64::new(0.0, -1.0 / (omega * self.value)),
            SeriesResistor | ShuntResistor => Complex64::new(self.value, 0.0),
        }
    }

    pub fn abcd(&self, f: f64) -> Result<TwoPortABCD> {
        lumped_abcd(self, f)
    }
}

pub fn lumped_abcd(el: &LumpedElement, f: f64) -> Result<TwoPortABCD> {
    check_frequency(f)?;
    if !(el.value > 0.0 && el.value.is_finite()) {
        return Err(Error::validation(format!(
            "lumped element value must be positive, got {}",
            el.value
        )));
    }
    use LumpedKind::*;
    let omega = TAU * f;
    Ok(match el.kind {
        SeriesInductor | SeriesCapacitor | SeriesResistor => {
            TwoPortABCD::series(el.impedance(omega))
        }
        ShuntInductor | ShuntResistor => TwoPortABCD::shunt(1.0 / el.impedance(omega)),
        // jωC directly; avoids the 1/(1/x) round trip.
        ShuntCapacitor => TwoPortABCD::shunt(Complex64::new(0.0, omega * el.value)),
    })
}

/// Open-circuited stub connected in shunt across the through path.
///
/// The shunt admittance is the open-line input admittance `c/a` of the stub's
/// own chain matrix (`j tan βℓ / z0` when lossless). At the quarter-wave
/// frequency of a lossless stub this is an exact short and is reported as a
/// [`SingularKind::ResonantShort`].
pub fn open_stub_shunt_abcd(stub: &TLineSpec, f: f64) -> Result<TwoPortABCD> {
    let m = tline_abcd(stub, f)?;
    let scale = m.a.norm() + m.c.norm() * stub.z0;
    if m.a.norm() <= SINGULAR_REL_EPS * scale {
        return Err(Error::Singular {
            kind: SingularKind::ResonantShort,
            frequency: Some(f),
        });
    }
    Ok(TwoPortABCD::shunt(m.c / m.a))
}

/// Coplanar-waveguide cross section on a dielectric half-space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpwGeometry {
    /// Centre conductor width `w` (m).
    pub center_width: f64,
    /// Gap between centre conductor and ground `s` (m).
    pub gap_width: f64,
    pub substrate_eps_r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpwCharacteristics {
    pub z0: f64,
    pub eps_eff: f64,
}

impl CpwGeometry {
    pub fn new(center_width: f64, gap_width: f64, substrate_eps_r: f64) -> Self {
        Self {
            center_width,
            gap_width,
            substrate_eps_r,
        }
    }

    /// Elliptic modulus `k = w / (w + 2s)`.
    pub fn modulus(&self) -> f64 {
        self.center_width / (self.center_width + 2.0 * self.gap_width)
    }

    /// Geometry with the same centre width whose modulus is the complement
    /// `k' = √(1 − k²)` of this one. The two impedances multiply to
    /// `(30π)² / ε_eff`.
    pub fn complementary(&self) -> Self {
        let k = self.modulus();
        let kp = ((1.0 - k) * (1.0 + k)).sqrt();
        Self {
            gap_width: 0.5 * self.center_width * (1.0 / kp - 1.0),
            ..*self
        }
    }

    pub fn characteristics(&self) -> Result<CpwCharacteristics> {
        cpw_characteristics(self)
    }
}

/// Quasi-static CPW impedance (zero metal thickness, infinite substrate).
pub fn cpw_characteristics(geom: &CpwGeometry) -> Result<CpwCharacteristics> {
    if !(geom.center_width > 0.0 && geom.gap_width > 0.0 && geom.substrate_eps_r >= 1.0) {
        return Err(Error::validation(format!(
            "degenerate CPW geometry: {geom:?}"
        )));
    }
    let k = geom.modulus();
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::validation(format!("CPW modulus out of range: {k}")));
    }
    let eps_eff = (1.0 + geom.substrate_eps_r) / 2.0;
    let z0 = 30.0 * PI / eps_eff.sqrt() * elliptic_k_ratio(k)?;
    Ok(CpwCharacteristics { z0, eps_eff })
}
