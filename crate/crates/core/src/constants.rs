// SPDX-License-Identifier: Apache-2.0

//! Physical constants, numeric tolerances and the reference device parameters.
//!
//! All tolerances used by algebraic identity checks live here so tests and
//! library code agree on a single set of numbers.

/// Vacuum speed of light (m/s).
pub const C0: f64 = 299_792_458.0;

/// Relative tolerance for algebraic identities (reciprocity, unitarity).
pub const ALGEBRAIC_REL_TOL: f64 = 1e-9;

/// Relative tolerance for cascade associativity and segment splitting.
pub const COMPOSITION_REL_TOL: f64 = 1e-12;

/// Magnitude below which a denominator is treated as an exact singularity
/// (relative to the scale of the operands).
pub const SINGULAR_REL_EPS: f64 = 1e-13;

/// Passivity slack for Re[Y] (S).
pub const PASSIVITY_SLACK_S: f64 = 1e-15;

/// Default environment impedance (Ω).
pub const Z_ENV: f64 = 50.0;

/// Sapphire relative permittivity (isotropic approximation).
pub const EPS_R_SAPPHIRE: f64 = 10.4;
/// Silicon relative permittivity.
pub const EPS_R_SILICON: f64 = 11.45;

/// Stepped-impedance filter reference values.
pub mod filter {
    pub const Z_LO: f64 = 25.0;
    pub const Z_HI: f64 = 120.0;
    pub const N_SECTIONS: usize = 5;
    /// Quasi-static CPW effective permittivity on sapphire, (1 + 10.4) / 2.
    pub const EPS_EFF: f64 = 5.7;
    pub const STOPBAND_ENTRY_HZ: f64 = 2.6e9;
    pub const STOPBAND_EXIT_HZ: f64 = 5.7e9;
    /// Reported physical length of the fabricated filter (metadata only).
    pub const REPORTED_TOTAL_LENGTH_M: f64 = 37.5e-3;
}

/// Readout, qubit and package reference values.
pub mod device {
    pub const F_RESONATOR_HZ: f64 = 6.42e9;
    pub const KAPPA_HZ: f64 = 7.0e6;
    pub const Z0_RESONATOR: f64 = 50.0;
    pub const C_SIGMA_F: f64 = 70e-15;
    pub const WIREBOND_H: f64 = 2e-9;
    pub const Q_INTRINSIC_INTEGRATED: f64 = 1.0e6;
    pub const Q_INTRINSIC_STANDALONE: f64 = 2.4e6;
    /// Unfiltered Purcell lifetime anchor: (frequency, lifetime).
    pub const T1_ANCHOR: (f64, f64) = (5.0e9, 5.0e-6);
    pub const QUBIT_DESIGN_HZ: f64 = 5.0e9;
    pub const QUBIT_SPREAD_HZ: f64 = 500e6;
}

/// Package signal trace (buried stripline in FR408).
pub mod trace {
    pub const Z0: f64 = 50.0;
    pub const EPS_R: f64 = 3.66;
    pub const TAN_DELTA: f64 = 0.0127;
    /// 8.7 nΩ/μm.
    pub const R_PER_LEN: f64 = 8.7e-3;
    pub const LENGTH_M: f64 = 10e-3;
}
